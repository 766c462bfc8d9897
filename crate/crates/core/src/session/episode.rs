use std::io::{self, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::BackendMode;
use crate::agent::{AgentConfig, AgentStats, CommCondition, ToMFlags};
use crate::env::{GameConfig, Layout, LayoutError};
use crate::history::HistoryRecord;
use crate::metrics::MetricsReport;

pub const LOG_FORMAT: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AgentDriver {
    Llm,
    Script,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeHeader {
    pub format: u32,
    pub code_version: String,
    pub comm_condition: CommCondition,
    pub tom_flags: ToMFlags,
    pub seed: u64,
    pub backend: BackendMode,
    pub agent_driver: AgentDriver,
    /// Agent settings when the LLM agent played.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agent: Option<AgentConfig>,
    pub layout_hash: String,
    /// Layout text, so a log replays without its layout file.
    pub layout: String,
    pub game: GameConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transcript: Option<String>,
}

impl EpisodeHeader {
    pub fn parse_layout(&self) -> Result<Layout, LayoutError> {
        Layout::parse(&self.layout)
    }
}

/// One tick: what happened and the hash of the state it left behind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TickRecord {
    #[serde(flatten)]
    pub record: HistoryRecord,
    pub state_hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeFooter {
    pub final_score: i32,
    /// Last tick played when a client dropped out mid-game.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aborted_at: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<MetricsReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agent_stats: Option<AgentStats>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeLog {
    pub header: EpisodeHeader,
    pub ticks: Vec<TickRecord>,
    pub footer: EpisodeFooter,
}

#[derive(Serialize)]
struct HashedContent<'a> {
    comm_condition: CommCondition,
    tom_flags: ToMFlags,
    seed: u64,
    layout_hash: &'a str,
    game: &'a GameConfig,
    ticks: &'a [TickRecord],
    final_score: i32,
    aborted_at: Option<u32>,
}

impl EpisodeLog {
    /// Hash of everything that happened in the game. Backend, transcript
    /// path, code version and derived reports are left out, so a recorded
    /// run and its transcript replay hash the same.
    pub fn content_hash(&self) -> String {
        let content = HashedContent {
            comm_condition: self.header.comm_condition,
            tom_flags: self.header.tom_flags,
            seed: self.header.seed,
            layout_hash: &self.header.layout_hash,
            game: &self.header.game,
            ticks: &self.ticks,
            final_score: self.footer.final_score,
            aborted_at: self.footer.aborted_at,
        };
        hex::encode(Sha256::digest(serde_json::to_vec(&content).expect("log serializes")))
    }

    pub fn is_complete(&self) -> bool {
        self.footer.aborted_at.is_none() && self.ticks.len() == self.header.game.episode_ticks as usize
    }

    pub fn history(&self) -> impl Iterator<Item = &HistoryRecord> {
        self.ticks.iter().map(|t| &t.record)
    }

    pub fn save(&self, path: &Path) -> io::Result<()> {
        let mut w = BufWriter::new(std::fs::File::create(path)?);
        serde_json::to_writer(&mut w, self)?;
        w.write_all(b"\n")?;
        w.flush()
    }

    pub fn load(path: &Path) -> io::Result<EpisodeLog> {
        let r = BufReader::new(std::fs::File::open(path)?);
        Ok(serde_json::from_reader(r)?)
    }
}
