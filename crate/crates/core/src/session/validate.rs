//! Agent-versus-teammate validation games: the LLM agent without its
//! communication module paired with the fixed FSM teammate.

use std::fmt::Write;
use std::path::PathBuf;

use serde::Serialize;

use super::config::{BackendMode, SessionConfig};
use super::human::TeammateHuman;
use super::run::{run_with, AgentSide};
use crate::agent::CommCondition;
use crate::env::GameConfig;
use crate::llm::{Gateway, LiveConfig, MockScript, Transcript};
use crate::prompts::PromptSet;

#[derive(Debug, Clone)]
pub struct ValidationOptions {
    pub games: u32,
    pub tom: bool,
    pub backend: BackendMode,
    /// Live and mock runs record `<tag>-game-<i>.jsonl` here; replay reads them.
    pub transcripts: Option<PathBuf>,
    pub live: LiveConfig,
    pub base_seed: u64,
    pub game: GameConfig,
}

impl ValidationOptions {
    pub fn new(games: u32, tom: bool, backend: BackendMode) -> Self {
        Self {
            games,
            tom,
            backend,
            transcripts: None,
            live: LiveConfig::default(),
            base_seed: 1000,
            game: GameConfig::default(),
        }
    }

    fn transcript_path(&self, game: u32) -> Option<PathBuf> {
        let tag = if self.tom { "tom" } else { "notom" };
        self.transcripts.as_ref().map(|d| d.join(format!("{tag}-game-{game}.jsonl")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GameResult {
    pub game: u32,
    pub seed: u64,
    pub score: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FailedGame {
    pub game: u32,
    pub seed: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationTable {
    pub tom: bool,
    pub backend: BackendMode,
    pub games: Vec<GameResult>,
    pub failed: Vec<FailedGame>,
    pub mean: Option<f64>,
    /// Sample standard deviation.
    pub sd: Option<f64>,
}

pub fn mean_sd(xs: &[f64]) -> (Option<f64>, Option<f64>) {
    if xs.is_empty() {
        return (None, None);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let sd = (xs.len() > 1).then(|| (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt());
    (Some(mean), sd)
}

fn gateway_for(opts: &ValidationOptions, game: u32) -> Result<Gateway, String> {
    let path = opts.transcript_path(game);
    let gw = match opts.backend {
        BackendMode::Mock => Gateway::mock(MockScript::kitchen_default()),
        BackendMode::Live => Gateway::live(opts.live.clone()),
        BackendMode::Replay => {
            let p = path.ok_or("replay needs a transcript directory")?;
            return Transcript::load(&p).map(Gateway::replay).map_err(|e| format!("{}: {e}", p.display()));
        }
    };
    match path {
        Some(p) => gw.with_recorder(&p).map_err(|e| format!("{}: {e}", p.display())),
        None => Ok(gw),
    }
}

pub fn run_validation(opts: &ValidationOptions) -> ValidationTable {
    let mut games = Vec::new();
    let mut failed = Vec::new();
    for game in 0..opts.games {
        let seed = opts.base_seed + u64::from(game);
        let mut cfg = SessionConfig::new(CommCondition::NoComm, opts.tom, seed);
        cfg.game = opts.game.clone();
        cfg.backend = opts.backend;
        let outcome = gateway_for(opts, game).and_then(|gw| {
            let agent = AgentSide::llm(cfg.agent_config(), PromptSet::builtin(), gw);
            run_with(&cfg, agent, &mut TeammateHuman::default()).map_err(|e| e.to_string())
        });
        match outcome {
            Ok((log, gw)) => {
                let t = gw.map(Gateway::into_transcript).unwrap_or_default();
                let errors = t.entries.iter().filter(|e| e.error.is_some()).count();
                if !t.is_empty() && errors == t.len() {
                    let reason = t.entries[0].error.clone().map_or_else(String::new, |e| e.to_string());
                    log::warn!("game {game}: every completion failed ({reason})");
                    failed.push(FailedGame { game, seed, reason: format!("every completion failed: {reason}") });
                } else {
                    if errors > 0 {
                        log::warn!("game {game}: {errors} of {} completions failed", t.len());
                    }
                    games.push(GameResult { game, seed, score: log.footer.final_score });
                }
            }
            Err(reason) => {
                log::warn!("game {game}: {reason}");
                failed.push(FailedGame { game, seed, reason });
            }
        }
    }
    let scores: Vec<f64> = games.iter().map(|g| f64::from(g.score)).collect();
    let (mean, sd) = mean_sd(&scores);
    ValidationTable { tom: opts.tom, backend: opts.backend, games, failed, mean, sd }
}

impl ValidationTable {
    pub fn label(&self) -> &'static str {
        if self.tom {
            "w/ ToM"
        } else {
            "w/o ToM"
        }
    }

    pub fn per_game(&self) -> String {
        let mut out = format!("{} ({:?} backend)\ngame  seed   score\n", self.label(), self.backend);
        for g in &self.games {
            let _ = writeln!(out, "{:<5} {:<6} {}", g.game, g.seed, g.score);
        }
        for f in &self.failed {
            let _ = writeln!(out, "{:<5} {:<6} failed: {}", f.game, f.seed, f.reason);
        }
        out
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_owned(), |x| format!("{x:.2}"))
}

/// Side-by-side summary: agent, games played, mean score, SD.
pub fn comparison_table(tables: &[&ValidationTable]) -> String {
    let mut out = String::from("agent     games  mean     sd\n");
    for t in tables {
        let _ = writeln!(out, "{:<9} {:<6} {:<8} {}", t.label(), t.games.len(), fmt_opt(t.mean), fmt_opt(t.sd));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_sd() {
        let (m, sd) = mean_sd(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]);
        assert_eq!(m, Some(5.0));
        assert!((sd.unwrap() - 2.138_089_935).abs() < 1e-6);
        assert_eq!(mean_sd(&[3.0]), (Some(3.0), None));
        assert_eq!(mean_sd(&[]), (None, None));
    }
}
