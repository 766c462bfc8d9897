use thiserror::Error;

use super::config::{HumanSourceConfig, SessionConfig, SessionConfigError};
use super::human::{HumanInput, HumanSource, ScriptedHuman, TeammateHuman};
use super::episode::{AgentDriver, EpisodeFooter, EpisodeHeader, EpisodeLog, TickRecord, LOG_FORMAT};
use super::script::{ChefScript, Script, ScriptError};
use crate::agent::{Agent, AgentConfig, AgentError};
use crate::env::{describe_state, init_game, state_hash, step_in_place, GameState, Layout, StepError};
use crate::history::{AgentMessage, HistoryRecord, HumanMessage, MessageTrigger};
use crate::llm::{Gateway, GatewayError};
use crate::metrics::compute_report;
use crate::prompts::PromptSet;

#[derive(Debug, Error)]
pub enum SessionError {
    #[error(transparent)]
    Config(#[from] SessionConfigError),
    #[error(transparent)]
    Agent(#[from] AgentError),
    #[error(transparent)]
    Gateway(#[from] GatewayError),
    #[error(transparent)]
    Step(#[from] StepError),
    #[error(transparent)]
    Script(#[from] ScriptError),
    #[error("cannot read script {path}: {source}")]
    ScriptIo { path: std::path::PathBuf, source: std::io::Error },
    #[error("the episode is already over")]
    Finished,
    #[error("a wire client must be attached through the server")]
    NeedsWireClient,
}

/// Whoever plays the AI chef.
pub enum AgentSide {
    Llm { agent: Box<Agent>, gateway: Gateway },
    Script(ChefScript),
}

impl AgentSide {
    pub fn llm(config: AgentConfig, prompts: PromptSet, gateway: Gateway) -> Self {
        AgentSide::Llm { agent: Box::new(Agent::new(config, prompts)), gateway }
    }

    pub fn agent(&self) -> Option<&Agent> {
        match self {
            AgentSide::Llm { agent, .. } => Some(agent),
            AgentSide::Script(_) => None,
        }
    }

    pub fn gateway(&self) -> Option<&Gateway> {
        match self {
            AgentSide::Llm { gateway, .. } => Some(gateway),
            AgentSide::Script(_) => None,
        }
    }
}

/// Tally of inputs the session refused.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Rejections {
    pub human_messages: u32,
    pub agent_messages: u32,
}

/// One running episode. [`Session::tick`] advances exactly one tick.
pub struct Session {
    header: EpisodeHeader,
    state: GameState,
    agent: AgentSide,
    history: Vec<HistoryRecord>,
    ticks: Vec<TickRecord>,
    rejections: Rejections,
}

impl Session {
    /// LLM agent on the configured backend.
    pub fn new(config: &SessionConfig) -> Result<Self, SessionError> {
        let agent = AgentSide::llm(config.agent_config(), config.load_prompts()?, config.build_gateway()?);
        Self::with_parts(config, config.load_layout()?, agent)
    }

    pub fn with_parts(config: &SessionConfig, layout: Layout, agent: AgentSide) -> Result<Self, SessionError> {
        config.game.validate().map_err(SessionConfigError::from)?;
        let (driver, agent_config) = match &agent {
            AgentSide::Llm { agent, .. } => (AgentDriver::Llm, Some(agent.config.clone())),
            AgentSide::Script(_) => (AgentDriver::Script, None),
        };
        let header = EpisodeHeader {
            format: LOG_FORMAT,
            code_version: env!("CARGO_PKG_VERSION").to_owned(),
            comm_condition: config.comm_condition,
            tom_flags: config.tom_flags(),
            seed: config.seed,
            backend: config.backend,
            agent_driver: driver,
            agent: agent_config,
            layout_hash: layout.hash(),
            layout: layout.to_text(),
            game: config.game.clone(),
            transcript: config.transcript.as_ref().map(|p| p.display().to_string()),
        };
        let state = init_game(&layout, &config.game, config.seed);
        Ok(Self { header, state, agent, history: Vec::new(), ticks: Vec::new(), rejections: Rejections::default() })
    }

    pub fn state(&self) -> &GameState {
        &self.state
    }

    pub fn header(&self) -> &EpisodeHeader {
        &self.header
    }

    pub fn agent_side(&self) -> &AgentSide {
        &self.agent
    }

    pub fn history(&self) -> &[HistoryRecord] {
        &self.history
    }

    pub fn rejections(&self) -> Rejections {
        self.rejections
    }

    pub fn is_finished(&self) -> bool {
        self.state.is_finished()
    }

    /// Poll, human input, agent action, step, history, dispatch, log.
    pub fn tick(&mut self, input: HumanInput) -> Result<&TickRecord, SessionError> {
        if self.is_finished() {
            return Err(SessionError::Finished);
        }
        let tick = self.state.tick;
        let cond = self.header.comm_condition;

        if let AgentSide::Llm { agent, gateway } = &mut self.agent {
            agent.absorb(gateway.poll(tick)?);
        }

        let human_message = match input.message {
            Some(id) if cond.human_may_send() => match HumanMessage::new(tick, id) {
                Ok(m) => Some(m),
                Err(e) => {
                    log::warn!("tick {tick}: {e}");
                    self.rejections.human_messages += 1;
                    None
                }
            },
            Some(_) => {
                self.rejections.human_messages += 1;
                None
            }
            None => None,
        };

        let (agent_action, agent_message) = match &mut self.agent {
            AgentSide::Llm { agent, .. } => {
                if let Some(m) = &human_message {
                    agent.observe_human_message(&self.state, m);
                }
                (agent.act(&self.state), agent.take_message(tick))
            }
            AgentSide::Script(script) => {
                let said = script.says.get(&tick).map(|text| AgentMessage { tick, text: text.clone(), trigger: MessageTrigger::Periodic });
                (script.action(tick), said)
            }
        };
        let agent_message = match agent_message {
            Some(_) if !cond.agent_may_send() => {
                self.rejections.agent_messages += 1;
                None
            }
            m => m,
        };

        let state_digest = describe_state(&self.state);
        let events = step_in_place(&mut self.state, agent_action, input.action)?;
        let record = HistoryRecord {
            tick,
            state_digest,
            agent_action,
            human_action: input.action,
            agent_message,
            human_message,
            reward_delta: events.iter().map(|e| e.reward()).sum(),
            events,
        };
        self.history.push(record.clone());

        if let AgentSide::Llm { agent, gateway } = &mut self.agent {
            agent.dispatch(tick, &self.state, &self.history, gateway)?;
        }

        self.ticks.push(TickRecord { record, state_hash: state_hash(&self.state) });
        Ok(self.ticks.last().expect("just pushed"))
    }

    /// Plays to the end, or until the human source disconnects.
    pub fn run(mut self, human: &mut dyn HumanSource) -> Result<EpisodeLog, SessionError> {
        while !self.is_finished() {
            if human.disconnected() {
                return Ok(self.finish());
            }
            let input = human.input(&self.state);
            self.tick(input)?;
        }
        Ok(self.finish())
    }

    /// Closes the log. An unfinished episode is marked aborted at its last tick.
    pub fn finish(self) -> EpisodeLog {
        let aborted_at = (!self.is_finished()).then(|| self.state.tick.saturating_sub(1));
        let agent_stats = self.agent.agent().map(|a| a.stats().clone());
        let mut log = EpisodeLog {
            header: self.header,
            ticks: self.ticks,
            footer: EpisodeFooter { final_score: self.state.score, aborted_at, report: None, agent_stats },
        };
        log.footer.report = compute_report(&log).ok();
        log
    }

    /// Like [`Session::finish`], also handing back the gateway and its transcript.
    pub fn into_parts(mut self) -> (EpisodeLog, Option<Gateway>) {
        let side = std::mem::replace(&mut self.agent, AgentSide::Script(ChefScript::default()));
        let (stats, gateway) = match side {
            AgentSide::Llm { agent, gateway } => (Some(agent.stats().clone()), Some(gateway)),
            AgentSide::Script(_) => (None, None),
        };
        let mut log = self.finish();
        log.footer.agent_stats = stats;
        (log, gateway)
    }
}

/// Human source named by the config. Wire clients need the server.
pub fn human_from_config(config: &SessionConfig) -> Result<Box<dyn HumanSource>, SessionError> {
    match &config.human {
        HumanSourceConfig::Wire => Err(SessionError::NeedsWireClient),
        HumanSourceConfig::Teammate => Ok(Box::new(TeammateHuman::default())),
        HumanSourceConfig::Script { path } => {
            let text = std::fs::read_to_string(path).map_err(|source| SessionError::ScriptIo { path: path.clone(), source })?;
            Ok(Box::new(ScriptedHuman::new(Script::parse(&text)?.human)))
        }
    }
}

/// Headless run of one configured session.
pub fn run_session(config: &SessionConfig) -> Result<EpisodeLog, SessionError> {
    let mut human = human_from_config(config)?;
    Session::new(config)?.run(human.as_mut())
}

/// Runs with the given human and returns the gateway too.
pub fn run_with(config: &SessionConfig, agent: AgentSide, human: &mut dyn HumanSource) -> Result<(EpisodeLog, Option<Gateway>), SessionError> {
    let mut s = Session::with_parts(config, config.load_layout()?, agent)?;
    while !s.is_finished() && !human.disconnected() {
        let input = human.input(s.state());
        s.tick(input)?;
    }
    Ok(s.into_parts())
}
