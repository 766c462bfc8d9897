//! The agent's outgoing messages.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Reply meaning "say nothing this time".
pub const SILENCE_TOKEN: &str = "[SILENT]";
pub const MAX_WORDS: usize = 10;
pub const COMM_INTERVAL: u32 = 25;
/// Minimum ticks between two agent messages.
pub const COMM_COOLDOWN: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CommCondition {
    BiComm,
    HComm,
    AComm,
    NoComm,
}

impl CommCondition {
    pub const ALL: [CommCondition; 4] = [CommCondition::BiComm, CommCondition::HComm, CommCondition::AComm, CommCondition::NoComm];

    pub fn agent_may_send(self) -> bool {
        matches!(self, CommCondition::BiComm | CommCondition::AComm)
    }

    pub fn human_may_send(self) -> bool {
        matches!(self, CommCondition::BiComm | CommCondition::HComm)
    }

    pub fn name(self) -> &'static str {
        match self {
            CommCondition::BiComm => "bi-comm",
            CommCondition::HComm => "h-comm",
            CommCondition::AComm => "a-comm",
            CommCondition::NoComm => "no-comm",
        }
    }
}

impl fmt::Display for CommCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CommCondition {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        CommCondition::ALL
            .into_iter()
            .find(|c| c.name().replace('-', "") == norm)
            .ok_or_else(|| format!("unknown communication condition {s:?}"))
    }
}

pub fn comm_due(tick: u32, pending_human_message: bool, interval: u32) -> bool {
    pending_human_message || (interval > 0 && tick.is_multiple_of(interval))
}

fn words(text: &str) -> impl Iterator<Item = &str> {
    text.split_whitespace().filter(|w| w.chars().any(char::is_alphanumeric))
}

/// Whitespace tokens that still contain something after trimming punctuation.
pub fn word_count(text: &str) -> usize {
    words(text).count()
}

pub fn truncate_words(text: &str, max: usize) -> String {
    let mut kept = 0;
    let mut out = Vec::new();
    for tok in text.split_whitespace() {
        if tok.chars().any(char::is_alphanumeric) {
            if kept == max {
                break;
            }
            kept += 1;
        }
        out.push(tok);
    }
    out.join(" ")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CommReply {
    Silent,
    Message(String),
    TooLong { text: String, words: usize },
}

/// Strips an optional `SAY:` prefix and surrounding quotes.
pub fn interpret_reply(raw: &str) -> CommReply {
    let text = raw.trim();
    if text.is_empty() || text.contains(SILENCE_TOKEN) {
        return CommReply::Silent;
    }
    let text = text.lines().find(|l| !l.trim().is_empty()).unwrap_or(text).trim();
    let text = match text.get(..4) {
        Some(p) if p.eq_ignore_ascii_case("say:") => text[4..].trim(),
        _ => text,
    };
    let text = text.trim_matches(|c| c == '"' || c == '\'').trim();
    if word_count(text) == 0 {
        return CommReply::Silent;
    }
    let n = word_count(text);
    if n > MAX_WORDS {
        CommReply::TooLong { text: text.to_owned(), words: n }
    } else {
        CommReply::Message(text.to_owned())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn condition_directions() {
        let table = [
            (CommCondition::BiComm, true, true),
            (CommCondition::HComm, false, true),
            (CommCondition::AComm, true, false),
            (CommCondition::NoComm, false, false),
        ];
        for (c, agent, human) in table {
            assert_eq!((c.agent_may_send(), c.human_may_send()), (agent, human));
            assert_eq!(c.name().parse::<CommCondition>(), Ok(c));
        }
        assert_eq!("BiComm".parse::<CommCondition>(), Ok(CommCondition::BiComm));
    }

    #[test]
    fn due_on_interval_or_message() {
        assert!(comm_due(50, false, COMM_INTERVAL));
        assert!(comm_due(37, true, COMM_INTERVAL));
        assert!(!comm_due(37, false, COMM_INTERVAL));
    }

    #[test]
    fn replies() {
        assert_eq!(interpret_reply("SAY: I will cook the beef now"), CommReply::Message("I will cook the beef now".into()));
        assert_eq!(word_count("I will cook the beef now"), 6);
        assert_eq!(interpret_reply("  [SILENT] "), CommReply::Silent);
        assert_eq!(interpret_reply("say: \"Plate the beef - quickly!\""), CommReply::Message("Plate the beef - quickly!".into()));
        assert_eq!(word_count("Plate the beef - quickly!"), 4);
        let long = "one two three four five six seven eight nine ten eleven twelve thirteen fourteen";
        assert_eq!(interpret_reply(long), CommReply::TooLong { text: long.into(), words: 14 });
        assert_eq!(truncate_words(long, 10), "one two three four five six seven eight nine ten");
    }
}
