use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agent::{AgentConfig, CommCondition, ToMFlags};
use crate::env::{ConfigError, GameConfig, Layout, LayoutError};
use crate::llm::{Gateway, LiveConfig, MockScript, Transcript};
use crate::prompts::{PromptError, PromptSet};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendMode {
    #[default]
    Mock,
    Live,
    Replay,
}

impl std::str::FromStr for BackendMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "mock" => Ok(BackendMode::Mock),
            "live" => Ok(BackendMode::Live),
            "replay" => Ok(BackendMode::Replay),
            _ => Err(format!("unknown backend {s:?} (mock, live or replay)")),
        }
    }
}

/// Who plays the human chef.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HumanSourceConfig {
    #[default]
    Wire,
    Script {
        path: PathBuf,
    },
    /// The FSM-only teammate.
    Teammate,
}

#[derive(Debug, Error)]
pub enum SessionConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("bad session config: {0}")]
    Toml(#[from] toml::de::Error),
    #[error(transparent)]
    Game(#[from] ConfigError),
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error(transparent)]
    Prompt(#[from] PromptError),
    #[error("replay backend needs a transcript path")]
    NoTranscript,
    #[error("cannot load transcript {path}: {source}")]
    Transcript { path: PathBuf, source: std::io::Error },
}

/// One session: condition cell, seed, engine settings and wiring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SessionConfig {
    pub comm_condition: CommCondition,
    pub tom: bool,
    pub seed: u64,
    /// Layout file; the bundled counter-circuit kitchen when absent.
    pub layout: Option<PathBuf>,
    pub game: GameConfig,
    pub backend: BackendMode,
    /// Replay source, or where a live or mock run records its transcript.
    pub transcript: Option<PathBuf>,
    pub live: LiveConfig,
    pub mock_latency_ticks: u32,
    pub human: HumanSourceConfig,
    pub agent: AgentConfig,
    pub prompts_dir: Option<PathBuf>,
    /// Finished episode logs land here.
    pub log_dir: Option<PathBuf>,
    pub countdown_secs: u32,
}

impl Default for SessionConfig {
    fn default() -> Self {
        Self {
            comm_condition: CommCondition::BiComm,
            tom: true,
            seed: 0,
            layout: None,
            game: GameConfig::default(),
            backend: BackendMode::Mock,
            transcript: None,
            live: LiveConfig::default(),
            mock_latency_ticks: 2,
            human: HumanSourceConfig::default(),
            agent: AgentConfig::default(),
            prompts_dir: None,
            log_dir: None,
            countdown_secs: 3,
        }
    }
}

impl SessionConfig {
    pub fn new(comm_condition: CommCondition, tom: bool, seed: u64) -> Self {
        Self { comm_condition, tom, seed, ..Self::default() }
    }

    pub fn from_toml(text: &str) -> Result<Self, SessionConfigError> {
        let cfg: SessionConfig = toml::from_str(text)?;
        cfg.game.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, SessionConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| SessionConfigError::Io { path: path.into(), source })?;
        Self::from_toml(&text)
    }

    pub fn tom_flags(&self) -> ToMFlags {
        ToMFlags::for_condition(self.tom, self.comm_condition)
    }

    /// Agent settings with the session's condition cell applied.
    pub fn agent_config(&self) -> AgentConfig {
        AgentConfig { condition: self.comm_condition, tom: self.tom, ..self.agent.clone() }
    }

    pub fn load_layout(&self) -> Result<Layout, SessionConfigError> {
        match &self.layout {
            None => Ok(Layout::counter_circuit()),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|source| SessionConfigError::Io { path: p.clone(), source })?;
                Ok(Layout::parse(&text)?)
            }
        }
    }

    pub fn load_prompts(&self) -> Result<PromptSet, SessionConfigError> {
        Ok(match &self.prompts_dir {
            Some(dir) => PromptSet::load_dir(dir)?,
            None => PromptSet::builtin(),
        })
    }

    /// Gateway for the configured backend. Mock and live runs record to
    /// `transcript` when it is set.
    pub fn build_gateway(&self) -> Result<Gateway, SessionConfigError> {
        let record = |gw: Gateway| match &self.transcript {
            Some(p) => gw.with_recorder(p).map_err(|source| SessionConfigError::Transcript { path: p.clone(), source }),
            None => Ok(gw),
        };
        match self.backend {
            BackendMode::Mock => record(Gateway::mock_with_latency(MockScript::kitchen_default(), self.mock_latency_ticks)),
            BackendMode::Live => record(Gateway::live(self.live.clone())),
            BackendMode::Replay => {
                let path = self.transcript.as_ref().ok_or(SessionConfigError::NoTranscript)?;
                let t = Transcript::load(path).map_err(|source| SessionConfigError::Transcript { path: path.clone(), source })?;
                Ok(Gateway::replay(t))
            }
        }
    }
}
