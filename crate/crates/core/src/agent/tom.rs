//! Belief inference about the human teammate.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::comm::CommCondition;
use super::summary::summarize_history;
use crate::history::HistoryRecord;
use crate::llm::{CompletionRequest, CompletionResult, Gateway, GatewayError, Purpose};
use crate::prompts::{render, PromptError, PromptSet};

pub const TOM_INTERVAL: u32 = 75;
pub const NO_PRIOR_BELIEF: &str = "(no prior belief: this is the first inference)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToMFlags {
    pub enabled: bool,
    pub infer_with_send_message: bool,
    pub infer_with_receive_message: bool,
}

impl ToMFlags {
    /// Message sub-prompts follow the directions the condition allows.
    pub fn for_condition(enabled: bool, comm: CommCondition) -> Self {
        Self {
            enabled,
            infer_with_send_message: enabled && comm.agent_may_send(),
            infer_with_receive_message: enabled && comm.human_may_send(),
        }
    }

    pub fn disabled() -> Self {
        Self { enabled: false, infer_with_send_message: false, infer_with_receive_message: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Belief {
    pub index: u32,
    pub text: String,
    pub generated_at_tick: u32,
}

#[derive(Debug, Error)]
pub enum ToMError {
    #[error("belief inference requested while ToM is disabled")]
    Disabled,
    #[error(transparent)]
    Prompt(#[from] PromptError),
    #[error(transparent)]
    Gateway(#[from] GatewayError),
}

pub fn tom_due(tick: u32, interval: u32, warmup: bool) -> bool {
    (tick == 0 && warmup) || (tick > 0 && interval > 0 && tick.is_multiple_of(interval))
}

pub struct ToMInput<'a> {
    pub prompts: &'a PromptSet,
    pub history: &'a [HistoryRecord],
    pub prev: Option<&'a Belief>,
    pub flags: ToMFlags,
    pub tick: u32,
    pub episode_ticks: u32,
    pub budget: usize,
}

/// The inference prompt. Pure in its inputs.
pub fn render_tom_prompt(input: &ToMInput<'_>) -> Result<String, ToMError> {
    if !input.flags.enabled {
        return Err(ToMError::Disabled);
    }
    let p = input.prompts;
    let mut vars = BTreeMap::new();
    vars.insert("rules", p.rules.clone());
    vars.insert("tick", input.tick.to_string());
    vars.insert("episode_ticks", input.episode_ticks.to_string());
    vars.insert("history", summarize_history(input.history, TOM_INTERVAL, input.budget));
    vars.insert("previous_belief", input.prev.map_or_else(|| NO_PRIOR_BELIEF.to_owned(), |b| b.text.clone()));
    vars.insert("send_block", if input.flags.infer_with_send_message { p.tom_send.clone() } else { String::new() });
    vars.insert("receive_block", if input.flags.infer_with_receive_message { p.tom_receive.clone() } else { String::new() });
    Ok(render("tom", &p.tom, &vars)?)
}

/// Belief n+1 from a finished inference, or `None` to keep the previous one.
pub fn apply_tom_result(prev: Option<&Belief>, result: &CompletionResult, request_tick: u32) -> Option<Belief> {
    let text = result.text()?.trim();
    if text.is_empty() {
        return None;
    }
    Some(Belief { index: prev.map_or(0, |b| b.index) + 1, text: text.to_owned(), generated_at_tick: request_tick })
}

/// Synchronous inference through the gateway. On backend failure the
/// previous belief comes back unchanged.
pub fn infer_belief(gateway: &mut Gateway, input: &ToMInput<'_>) -> Result<Option<Belief>, ToMError> {
    let prompt = render_tom_prompt(input)?;
    let result = gateway.complete_blocking(CompletionRequest::new(Purpose::ToMInference, prompt, input.tick))?;
    Ok(apply_tom_result(input.prev, &result, input.tick).or_else(|| input.prev.cloned()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::llm::{MockReply, MockScript};

    fn input<'a>(prompts: &'a PromptSet, prev: Option<&'a Belief>, flags: ToMFlags) -> ToMInput<'a> {
        ToMInput { prompts, history: &[], prev, flags, tick: 75, episode_ticks: 500, budget: 1500 }
    }

    #[test]
    fn schedule_hits_six_ticks() {
        let due: Vec<u32> = (0..500).filter(|t| tom_due(*t, TOM_INTERVAL, false)).collect();
        assert_eq!(due, [75, 150, 225, 300, 375, 450]);
        assert!(!tom_due(74, TOM_INTERVAL, false));
        assert!(tom_due(0, TOM_INTERVAL, true));
    }

    #[test]
    fn first_belief_from_mock() {
        let prompts = PromptSet::builtin();
        let text = "Tendency: chops lettuce.\nConvention: leaves bread on the counter.\nPlan: serve the LettuceBurger.\nCoordination guide: cook beef.";
        let mut gw = Gateway::mock(MockScript::new().with_text(Purpose::ToMInference, text));
        let flags = ToMFlags::for_condition(true, CommCondition::BiComm);
        let b = infer_belief(&mut gw, &input(&prompts, None, flags)).unwrap().unwrap();
        assert_eq!((b.index, b.text.as_str(), b.generated_at_tick), (1, text, 75));
        assert!(gw.transcript().entries[0].prompt.contains(NO_PRIOR_BELIEF));
    }

    #[test]
    fn message_subprompts_follow_the_flags() {
        let prompts = PromptSet::builtin();
        let send = prompts.tom_send.trim();
        let recv = prompts.tom_receive.trim();
        for (cond, has_send, has_recv) in [
            (CommCondition::BiComm, true, true),
            (CommCondition::AComm, true, false),
            (CommCondition::HComm, false, true),
            (CommCondition::NoComm, false, false),
        ] {
            let text = render_tom_prompt(&input(&prompts, None, ToMFlags::for_condition(true, cond))).unwrap();
            assert_eq!(text.contains(send), has_send, "{cond:?}");
            assert_eq!(text.contains(recv), has_recv, "{cond:?}");
        }
    }

    #[test]
    fn failure_keeps_previous_belief() {
        let prompts = PromptSet::builtin();
        let prev = Belief { index: 2, text: "old".into(), generated_at_tick: 150 };
        let mut gw = Gateway::mock(MockScript::new().with(Purpose::ToMInference, vec![MockReply::Timeout]));
        let flags = ToMFlags::for_condition(true, CommCondition::NoComm);
        let b = infer_belief(&mut gw, &input(&prompts, Some(&prev), flags)).unwrap();
        assert_eq!(b, Some(prev));
    }

    #[test]
    fn disabled_is_a_contract_violation() {
        let prompts = PromptSet::builtin();
        let mut gw = Gateway::mock(MockScript::kitchen_default());
        assert!(matches!(infer_belief(&mut gw, &input(&prompts, None, ToMFlags::disabled())), Err(ToMError::Disabled)));
        assert!(gw.transcript().is_empty());
    }

    #[test]
    fn rendering_is_pure() {
        let prompts = PromptSet::builtin();
        let flags = ToMFlags::for_condition(true, CommCondition::BiComm);
        let a = render_tom_prompt(&input(&prompts, None, flags)).unwrap();
        let b = render_tom_prompt(&input(&prompts, None, flags)).unwrap();
        assert_eq!(a, b);
    }
}
