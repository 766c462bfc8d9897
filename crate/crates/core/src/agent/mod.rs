//! The AI chef: belief inference, policy snippets, reflection and messages
//! layered over the per-tick [`policy::Controller`].
//!
//! The session loop drives an [`Agent`] in a fixed order each tick:
//! [`Agent::absorb`] the gateway deliveries, [`Agent::observe_human_message`],
//! [`Agent::act`], [`Agent::take_message`], then after the environment step
//! [`Agent::dispatch`] whatever requests fall due.

pub mod comm;
pub mod policy;
pub mod summary;
pub mod tom;

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

pub use comm::{CommCondition, CommReply};
pub use tom::{Belief, ToMFlags};

use crate::env::{describe_state, ControlAction, GameState, Player};
use crate::history::{AgentMessage, HistoryRecord, HumanMessage, MessageTrigger};
use crate::llm::{CompletionRequest, Delivery, Gateway, GatewayError, Purpose};
use crate::prompts::{render, PromptError, PromptSet};
use policy::reflect::reflection_due;
use policy::{parse_snippet_reply, BehaviorGuideline, Controller};
use summary::summarize_history;
use tom::{apply_tom_result, render_tom_prompt, tom_due, ToMError, ToMInput};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AgentConfig {
    pub condition: CommCondition,
    pub tom: bool,
    pub tom_interval: u32,
    pub tom_warmup: bool,
    /// Ticks between snippet requests; also how long a snippet stays live.
    pub snippet_interval: u32,
    pub snippet_lifetime: u32,
    pub reflection: bool,
    pub reflection_interval: u32,
    pub comm_interval: u32,
    pub comm_cooldown: u32,
    /// Token budget for the history section of every prompt.
    pub history_budget: usize,
}

impl Default for AgentConfig {
    fn default() -> Self {
        Self {
            condition: CommCondition::BiComm,
            tom: true,
            tom_interval: tom::TOM_INTERVAL,
            tom_warmup: false,
            snippet_interval: 25,
            snippet_lifetime: 25,
            reflection: true,
            reflection_interval: 75,
            comm_interval: comm::COMM_INTERVAL,
            comm_cooldown: comm::COMM_COOLDOWN,
            history_budget: 1500,
        }
    }
}

impl AgentConfig {
    pub fn new(condition: CommCondition, tom: bool) -> Self {
        Self { condition, tom, ..Self::default() }
    }

    pub fn tom_flags(&self) -> ToMFlags {
        ToMFlags::for_condition(self.tom, self.condition)
    }
}

/// Counters kept for reporting; none of them feed back into decisions.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentStats {
    pub beliefs: u32,
    pub tom_failures: u32,
    pub snippets_accepted: u32,
    pub snippets_rejected: u32,
    pub snippet_failures: u32,
    pub guidelines: u32,
    pub reflection_failures: u32,
    pub messages_sent: u32,
    pub silent_replies: u32,
    pub comm_failures: u32,
    pub comm_retries: u32,
    pub comm_truncated: u32,
    pub requests_skipped_busy: u32,
}

#[derive(Debug, thiserror::Error)]
pub enum AgentError {
    #[error(transparent)]
    Prompt(#[from] PromptError),
    #[error(transparent)]
    Gateway(#[from] GatewayError),
}

impl From<ToMError> for AgentError {
    fn from(e: ToMError) -> Self {
        match e {
            ToMError::Prompt(p) => AgentError::Prompt(p),
            ToMError::Gateway(g) => AgentError::Gateway(g),
            ToMError::Disabled => unreachable!("dispatch only infers with ToM enabled"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct CommRetry {
    trigger: MessageTrigger,
}

pub struct Agent {
    pub config: AgentConfig,
    prompts: PromptSet,
    controller: Controller,
    belief: Option<Belief>,
    guideline: BehaviorGuideline,
    snippet_trigger: Option<HumanMessage>,
    comm_trigger: Option<HumanMessage>,
    comm_in_flight: Option<MessageTrigger>,
    comm_retry: Option<CommRetry>,
    retried_once: bool,
    outbox: VecDeque<(String, MessageTrigger)>,
    last_sent: Option<u32>,
    stats: AgentStats,
}

impl Agent {
    pub fn new(config: AgentConfig, prompts: PromptSet) -> Self {
        Self {
            config,
            prompts,
            controller: Controller::new(Player::Agent),
            belief: None,
            guideline: BehaviorGuideline::default(),
            snippet_trigger: None,
            comm_trigger: None,
            comm_in_flight: None,
            comm_retry: None,
            retried_once: false,
            outbox: VecDeque::new(),
            last_sent: None,
            stats: AgentStats::default(),
        }
    }

    pub fn belief(&self) -> Option<&Belief> {
        self.belief.as_ref()
    }

    pub fn guideline(&self) -> &BehaviorGuideline {
        &self.guideline
    }

    pub fn controller(&self) -> &Controller {
        &self.controller
    }

    pub fn stats(&self) -> &AgentStats {
        &self.stats
    }

    /// Applies finished requests. Call at the start of a tick.
    pub fn absorb(&mut self, deliveries: Vec<Delivery>) {
        for d in deliveries {
            match d.purpose {
                Purpose::ToMInference => match apply_tom_result(self.belief.as_ref(), &d.result, d.request_tick) {
                    Some(b) => {
                        self.stats.beliefs += 1;
                        self.belief = Some(b);
                    }
                    None => self.stats.tom_failures += 1,
                },
                Purpose::CodeAsPolicy => match d.result.text() {
                    Some(text) => {
                        let batch = parse_snippet_reply(text, d.request_tick, self.config.snippet_lifetime);
                        self.stats.snippets_accepted += batch.snippets.len() as u32;
                        self.stats.snippets_rejected += batch.rejected.len() as u32;
                        if batch.unparseable {
                            self.stats.snippet_failures += 1;
                        }
                        self.controller.add_snippets(batch);
                    }
                    None => self.stats.snippet_failures += 1,
                },
                Purpose::Reflection => match d.result.text().map(str::trim).filter(|t| !t.is_empty()) {
                    Some(text) => {
                        self.guideline = self.guideline.merged(text, d.request_tick);
                        self.stats.guidelines += 1;
                    }
                    None => self.stats.reflection_failures += 1,
                },
                Purpose::Communication => self.absorb_comm(d),
            }
        }
    }

    fn absorb_comm(&mut self, d: Delivery) {
        let trigger = self.comm_in_flight.take().unwrap_or(MessageTrigger::Periodic);
        let Some(text) = d.result.text() else {
            self.stats.comm_failures += 1;
            self.retried_once = false;
            return;
        };
        match comm::interpret_reply(text) {
            CommReply::Silent => self.stats.silent_replies += 1,
            CommReply::Message(m) => self.outbox.push_back((m, trigger)),
            CommReply::TooLong { text, .. } if self.retried_once => {
                self.stats.comm_truncated += 1;
                self.outbox.push_back((comm::truncate_words(&text, comm::MAX_WORDS), trigger));
            }
            CommReply::TooLong { .. } => {
                self.comm_retry = Some(CommRetry { trigger });
                self.retried_once = true;
                return;
            }
        }
        self.retried_once = false;
    }

    /// A human message reaches the agent: the handler macro starts at once
    /// and the next snippet and comm requests fire early.
    pub fn observe_human_message(&mut self, state: &GameState, msg: &HumanMessage) {
        self.controller.on_human_message(state, msg);
        self.snippet_trigger = Some(msg.clone());
        if self.config.condition.agent_may_send() {
            self.comm_trigger = Some(msg.clone());
        }
    }

    pub fn act(&mut self, state: &GameState) -> ControlAction {
        self.controller.act(state)
    }

    /// Oldest queued message, once the cooldown since the previous one has passed.
    pub fn take_message(&mut self, tick: u32) -> Option<AgentMessage> {
        if !self.config.condition.agent_may_send() {
            self.outbox.clear();
            return None;
        }
        if self.last_sent.is_some_and(|t| tick < t + self.config.comm_cooldown) {
            return None;
        }
        let (text, trigger) = self.outbox.pop_front()?;
        self.last_sent = Some(tick);
        self.stats.messages_sent += 1;
        Some(AgentMessage { tick, text, trigger })
    }

    fn blocks(&self, trigger: Option<&HumanMessage>) -> [(&'static str, String); 3] {
        let belief = match &self.belief {
            Some(b) if self.config.tom => format!("\nWhat you believe about the human:\n{}\n", b.text),
            _ => String::new(),
        };
        let guideline = if self.guideline.is_empty() {
            String::new()
        } else {
            format!("\nYour behaviour guideline:\n{}\n", self.guideline.text)
        };
        let message = match trigger {
            Some(m) => format!("\nAt time-step {} the human told you: \"{}\"\n", m.tick, m.text),
            None => String::new(),
        };
        [("belief_block", belief), ("guideline_block", guideline), ("message_block", message)]
    }

    fn base_vars(&self, tick: u32, history: &[HistoryRecord], window: u32) -> BTreeMap<&'static str, String> {
        let mut vars = BTreeMap::new();
        vars.insert("rules", self.prompts.rules.clone());
        vars.insert("tick", tick.to_string());
        vars.insert("history", summarize_history(history, window, self.config.history_budget));
        vars
    }

    fn submit(&mut self, gateway: &mut Gateway, purpose: Purpose, prompt: String, tick: u32) -> Result<bool, AgentError> {
        match gateway.submit(CompletionRequest::new(purpose, prompt, tick)) {
            Ok(()) => Ok(true),
            Err(GatewayError::Busy(_)) => {
                self.stats.requests_skipped_busy += 1;
                Ok(false)
            }
            Err(e) => Err(e.into()),
        }
    }

    /// Submits every request due after tick `tick`. `state` is the state
    /// after that tick's step and `history` ends with its record.
    pub fn dispatch(
        &mut self,
        tick: u32,
        state: &GameState,
        history: &[HistoryRecord],
        gateway: &mut Gateway,
    ) -> Result<(), AgentError> {
        let cfg = self.config.clone();
        let digest = describe_state(state);

        if cfg.tom && tom_due(tick, cfg.tom_interval, cfg.tom_warmup) && !gateway.is_pending(Purpose::ToMInference) {
            let prompt = render_tom_prompt(&ToMInput {
                prompts: &self.prompts,
                history,
                prev: self.belief.as_ref(),
                flags: cfg.tom_flags(),
                tick,
                episode_ticks: state.config.episode_ticks,
                budget: cfg.history_budget,
            })?;
            self.submit(gateway, Purpose::ToMInference, prompt, tick)?;
        }

        let snippet_due = self.snippet_trigger.is_some() || (cfg.snippet_interval > 0 && tick.is_multiple_of(cfg.snippet_interval));
        if snippet_due && !gateway.is_pending(Purpose::CodeAsPolicy) {
            let mut vars = self.base_vars(tick, history, cfg.snippet_interval);
            vars.insert("state", digest.clone());
            vars.insert("window", cfg.snippet_lifetime.to_string());
            vars.extend(self.blocks(self.snippet_trigger.as_ref()));
            let prompt = render("policy", &self.prompts.policy, &vars)?;
            if self.submit(gateway, Purpose::CodeAsPolicy, prompt, tick)? {
                self.snippet_trigger = None;
            }
        }

        if cfg.reflection && reflection_due(tick, cfg.reflection_interval) && !gateway.is_pending(Purpose::Reflection) {
            let mut vars = self.base_vars(tick, history, cfg.reflection_interval);
            vars.insert("score", state.score.to_string());
            vars.insert("guideline", self.guideline.prompt_text().to_owned());
            let [belief, ..] = self.blocks(None);
            vars.insert(belief.0, belief.1);
            let prompt = render("reflection", &self.prompts.reflection, &vars)?;
            self.submit(gateway, Purpose::Reflection, prompt, tick)?;
        }

        if cfg.condition.agent_may_send() && !gateway.is_pending(Purpose::Communication) {
            let retry = self.comm_retry.take();
            let due = retry.is_some() || comm::comm_due(tick, self.comm_trigger.is_some(), cfg.comm_interval);
            if due {
                let trigger = match (retry, &self.comm_trigger) {
                    (Some(r), _) => r.trigger,
                    (None, Some(_)) => MessageTrigger::HumanMessageReply,
                    (None, None) => MessageTrigger::Periodic,
                };
                let mut vars = self.base_vars(tick, history, cfg.comm_interval);
                vars.insert("state", digest);
                vars.insert("silence", comm::SILENCE_TOKEN.to_owned());
                vars.insert(
                    "retry_note",
                    if retry.is_some() {
                        format!("\nYour previous message was longer than {} words. Say it shorter.", comm::MAX_WORDS)
                    } else {
                        String::new()
                    },
                );
                vars.extend(self.blocks(self.comm_trigger.as_ref()));
                let prompt = render("comm", &self.prompts.comm, &vars)?;
                if self.submit(gateway, Purpose::Communication, prompt, tick)? {
                    self.comm_in_flight = Some(trigger);
                    self.comm_trigger = None;
                } else if let Some(r) = retry {
                    self.comm_retry = Some(r);
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{init_game, GameConfig, Layout};
    use crate::llm::MockScript;

    fn run(config: AgentConfig, ticks: u32, mut script: MockScript) -> (Agent, Gateway) {
        script = script.exhausted(crate::llm::WhenExhausted::Cycle);
        let mut gw = Gateway::mock(script);
        let mut agent = Agent::new(config, PromptSet::builtin());
        let mut state = init_game(&Layout::counter_circuit(), &GameConfig::default(), 3);
        let mut history = Vec::new();
        for tick in 0..ticks {
            agent.absorb(gw.poll(tick).unwrap());
            let a = agent.act(&state);
            let msg = agent.take_message(tick);
            let digest = describe_state(&state);
            let events = crate::env::step_in_place(&mut state, a, ControlAction::Noop).unwrap();
            history.push(HistoryRecord {
                tick,
                state_digest: digest,
                agent_action: a,
                human_action: ControlAction::Noop,
                agent_message: msg,
                human_message: None,
                reward_delta: events.iter().map(|e| e.reward()).sum(),
                events,
            });
            agent.dispatch(tick, &state, &history, &mut gw).unwrap();
        }
        (agent, gw)
    }

    #[test]
    fn request_counts_per_condition() {
        let (_, gw) = run(AgentConfig::new(CommCondition::BiComm, true), 500, MockScript::kitchen_default());
        let t = gw.transcript();
        assert_eq!(t.count(Purpose::ToMInference), 6);
        assert_eq!(t.count(Purpose::Reflection), 7);
        assert_eq!(t.count(Purpose::CodeAsPolicy), 20);
        assert!(t.count(Purpose::Communication) >= 20);

        let (_, gw) = run(AgentConfig::new(CommCondition::HComm, false), 500, MockScript::kitchen_default());
        assert_eq!(gw.transcript().count(Purpose::ToMInference), 0);
        assert_eq!(gw.transcript().count(Purpose::Communication), 0);
    }

    #[test]
    fn without_tom_no_belief_reaches_any_prompt() {
        let (agent, gw) = run(AgentConfig::new(CommCondition::BiComm, false), 200, MockScript::kitchen_default());
        assert!(agent.belief().is_none());
        assert!(gw.transcript().entries.iter().all(|e| !e.prompt.contains("What you believe about the human")));
    }

    #[test]
    fn beliefs_flow_into_later_prompts() {
        let (agent, gw) = run(AgentConfig::new(CommCondition::BiComm, true), 100, MockScript::kitchen_default());
        let b = agent.belief().expect("belief after tick 77");
        assert_eq!((b.index, b.generated_at_tick), (1, 75));
        let later = gw.transcript().entries.iter().find(|e| e.purpose == Purpose::CodeAsPolicy && e.request_tick == 100);
        assert!(later.is_none_or(|e| e.prompt.contains(&b.text)));
        let at_75 = gw.transcript().entries.iter().find(|e| e.purpose == Purpose::CodeAsPolicy && e.request_tick == 75).unwrap();
        assert!(!at_75.prompt.contains(&b.text), "a belief is not visible before it is delivered");
    }

    #[test]
    fn long_reply_is_retried_then_truncated() {
        let long = "SAY: one two three four five six seven eight nine ten eleven twelve";
        let script = MockScript::new().with_text(Purpose::Communication, long);
        let mut cfg = AgentConfig::new(CommCondition::AComm, false);
        cfg.reflection = false;
        cfg.snippet_interval = 0;
        let (agent, gw) = run(cfg, 8, script);
        let comm: Vec<_> = gw.transcript().entries.iter().filter(|e| e.purpose == Purpose::Communication).collect();
        assert_eq!(comm.len(), 2);
        assert!(comm[1].prompt.contains("Say it shorter"));
        assert_eq!(agent.stats().comm_truncated, 1);
        assert_eq!(agent.stats().messages_sent, 1);
    }

    #[test]
    fn cooldown_delays_without_dropping() {
        let mut agent = Agent::new(AgentConfig::new(CommCondition::BiComm, true), PromptSet::builtin());
        agent.outbox.push_back(("first".into(), MessageTrigger::Periodic));
        agent.outbox.push_back(("second".into(), MessageTrigger::Periodic));
        assert_eq!(agent.take_message(3).unwrap().text, "first");
        assert!(agent.take_message(12).is_none());
        assert_eq!(agent.take_message(13).unwrap().text, "second");
    }
}
