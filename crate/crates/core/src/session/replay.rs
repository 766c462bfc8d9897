use serde::Serialize;
use thiserror::Error;

use super::config::{BackendMode, SessionConfig};
use super::human::LoggedHuman;
use super::episode::{AgentDriver, EpisodeLog};
use super::run::{AgentSide, Session, SessionError};
use super::script::ChefScript;
use crate::env::{init_game, state_hash, step_in_place, GameState, LayoutError, StepError};
use crate::llm::{Gateway, Transcript};
use crate::prompts::PromptSet;

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error("logged layout does not parse: {0}")]
    Layout(#[from] LayoutError),
    #[error("logged layout hash {logged} does not match its text ({actual})")]
    LayoutHash { logged: String, actual: String },
    #[error("tick {tick}: {source}")]
    Step { tick: u32, source: StepError },
    #[error("state hash mismatch at tick {tick}")]
    HashMismatch { tick: u32, expected: String, actual: String },
}

/// Re-executes a log's actions from its header, one state per tick.
pub struct Replayer<'a> {
    log: &'a EpisodeLog,
    state: GameState,
    next: usize,
}

impl<'a> Replayer<'a> {
    pub fn new(log: &'a EpisodeLog) -> Result<Self, ReplayError> {
        let layout = log.header.parse_layout()?;
        if layout.hash() != log.header.layout_hash {
            return Err(ReplayError::LayoutHash { logged: log.header.layout_hash.clone(), actual: layout.hash() });
        }
        Ok(Self { state: init_game(&layout, &log.header.game, log.header.seed), log, next: 0 })
    }

    /// State before the next logged tick.
    pub fn state(&self) -> &GameState {
        &self.state
    }

    /// Applies the next logged tick and checks its hash.
    pub fn advance(&mut self) -> Option<Result<&GameState, ReplayError>> {
        let t = self.log.ticks.get(self.next)?;
        self.next += 1;
        let tick = t.record.tick;
        if let Err(source) = step_in_place(&mut self.state, t.record.agent_action, t.record.human_action) {
            return Some(Err(ReplayError::Step { tick, source }));
        }
        let actual = state_hash(&self.state);
        if actual != t.state_hash {
            return Some(Err(ReplayError::HashMismatch { tick, expected: t.state_hash.clone(), actual }));
        }
        Some(Ok(&self.state))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReplayReport {
    pub ticks_verified: u32,
    pub final_score: i32,
    pub footer_score: i32,
    /// First tick whose state hash disagreed.
    pub mismatch_at: Option<u32>,
}

impl ReplayReport {
    pub fn ok(&self) -> bool {
        self.mismatch_at.is_none() && self.final_score == self.footer_score
    }
}

/// Verifies every per-tick state hash. Stops at the first mismatch.
pub fn verify_log(log: &EpisodeLog) -> Result<ReplayReport, ReplayError> {
    let mut r = Replayer::new(log)?;
    let mut verified = 0;
    let mut mismatch_at = None;
    while let Some(step) = r.advance() {
        match step {
            Ok(_) => verified += 1,
            Err(ReplayError::HashMismatch { tick, .. }) => {
                mismatch_at = Some(tick);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(ReplayReport { ticks_verified: verified, final_score: r.state.score, footer_score: log.footer.final_score, mismatch_at })
}

/// Session settings recovered from a log header.
pub fn config_from_header(log: &EpisodeLog) -> SessionConfig {
    let h = &log.header;
    let mut cfg = SessionConfig::new(h.comm_condition, h.tom_flags.enabled, h.seed);
    cfg.game = h.game.clone();
    if let Some(a) = &h.agent {
        cfg.agent = a.clone();
    }
    cfg
}

/// Plays the episode again with the LLM agent answering from `transcript`
/// and the human repeating the logged inputs.
pub fn rerun_with_transcript(log: &EpisodeLog, transcript: Transcript) -> Result<EpisodeLog, SessionError> {
    let mut cfg = config_from_header(log);
    cfg.backend = BackendMode::Replay;
    let layout = log.header.parse_layout().map_err(crate::session::SessionConfigError::from)?;
    let agent = match log.header.agent_driver {
        AgentDriver::Llm => AgentSide::llm(cfg.agent_config(), PromptSet::builtin(), Gateway::replay(transcript)),
        AgentDriver::Script => {
            let mut s = ChefScript::default();
            for t in &log.ticks {
                s.actions.insert(t.record.tick, t.record.agent_action);
                if let Some(m) = &t.record.agent_message {
                    s.says.insert(t.record.tick, m.text.clone());
                }
            }
            AgentSide::Script(s)
        }
    };
    let mut human = LoggedHuman::new(log);
    let mut session = Session::with_parts(&cfg, layout, agent)?;
    for _ in 0..log.ticks.len() {
        let input = crate::session::HumanSource::input(&mut human, session.state());
        session.tick(input)?;
    }
    Ok(session.finish())
}
