//! Per-tick interaction history and the message types both chefs exchange.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::env::{ControlAction, EnvEvent};

/// Fixed human message catalog, indexed by `template_id - 1`.
pub const HUMAN_TEMPLATES: [&str; 11] = [
    "We need Bread",
    "We need Beef",
    "We need Lettuce",
    "We need Plate",
    "We need LettuceBurger",
    "We need BeefBurger",
    "We need BeefLettuceBurger",
    "Put out the fire!",
    "Take the beef off the pan!",
    "Good Job",
    "Need Improved",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HumanMessage {
    pub tick: u32,
    pub template_id: u8,
    pub text: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("message template {0} is outside 1..=11")]
pub struct UnknownTemplate(pub u8);

impl HumanMessage {
    pub fn new(tick: u32, template_id: u8) -> Result<Self, UnknownTemplate> {
        let text = template_text(template_id).ok_or(UnknownTemplate(template_id))?;
        Ok(Self { tick, template_id, text: text.to_owned() })
    }
}

pub fn template_text(template_id: u8) -> Option<&'static str> {
    HUMAN_TEMPLATES.get(usize::from(template_id).checked_sub(1)?).copied()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MessageTrigger {
    Periodic,
    HumanMessageReply,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentMessage {
    pub tick: u32,
    pub text: String,
    pub trigger: MessageTrigger,
}

/// Everything that happened in one tick, from the state at its start.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistoryRecord {
    pub tick: u32,
    pub state_digest: String,
    pub agent_action: ControlAction,
    pub human_action: ControlAction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agent_message: Option<AgentMessage>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub human_message: Option<HumanMessage>,
    pub reward_delta: i32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub events: Vec<EnvEvent>,
}

impl HistoryRecord {
    /// Prompt lines for this tick: events first, then messages.
    pub fn salient_lines(&self) -> impl Iterator<Item = String> + '_ {
        let events = self.events.iter().map(EnvEvent::describe);
        let agent = self.agent_message.iter().map(move |m| format!("t{} agent says: {}", self.tick, m.text));
        let human = self.human_message.iter().map(move |m| format!("t{} human says: {}", self.tick, m.text));
        events.chain(human).chain(agent)
    }
}

impl fmt::Display for HumanMessage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.template_id, self.text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_has_eleven_templates() {
        assert_eq!(HUMAN_TEMPLATES.len(), 11);
        assert_eq!(HumanMessage::new(3, 3).unwrap().text, "We need Lettuce");
        assert_eq!(HumanMessage::new(0, 0), Err(UnknownTemplate(0)));
        assert_eq!(HumanMessage::new(0, 12), Err(UnknownTemplate(12)));
    }
}
