//! Code-as-policy snippets: parsing model output into (condition, macro)
//! pairs plus an optional order priority.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::dsl::Cond;
use super::macros::Verb;
use crate::env::{BurgerKind, GameState, Order};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolicySnippet {
    pub condition_text: String,
    pub condition: Cond,
    pub verb: Verb,
    pub issued_tick: u32,
    pub expires_tick: u32,
}

impl PolicySnippet {
    pub fn new(condition: &str, verb: Verb, issued_tick: u32, lifetime: u32) -> Result<Self, super::dsl::ParseError> {
        Ok(Self {
            condition_text: condition.to_owned(),
            condition: condition.parse()?,
            verb,
            issued_tick,
            expires_tick: issued_tick + lifetime,
        })
    }

    pub fn is_live(&self, tick: u32) -> bool {
        tick < self.expires_tick
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PriorityTarget {
    Order(u32),
    Kind(BurgerKind),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderPriority {
    pub target: PriorityTarget,
    pub issued_tick: u32,
}

impl OrderPriority {
    pub fn matches(&self, order: &Order) -> bool {
        match self.target {
            PriorityTarget::Order(id) => order.id == id,
            PriorityTarget::Kind(k) => order.kind == k,
        }
    }

    /// False once no active order satisfies the directive.
    pub fn is_live(&self, state: &GameState) -> bool {
        state.orders.iter().any(|o| self.matches(o))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SnippetBatch {
    pub snippets: Vec<PolicySnippet>,
    pub priority: Option<OrderPriority>,
    /// Entries dropped because their condition or macro did not parse.
    pub rejected: Vec<String>,
    /// The reply held no JSON document at all.
    pub unparseable: bool,
}

/// Cuts the outermost JSON array or object out of free text (code fences,
/// leading prose and so on).
fn extract_json(text: &str) -> Option<Value> {
    if let Ok(v) = serde_json::from_str(text.trim()) {
        return Some(v);
    }
    let start = text.find(['[', '{'])?;
    let close = if text[start..].starts_with('[') { ']' } else { '}' };
    let end = text.rfind(close)?;
    (end > start).then(|| serde_json::from_str(&text[start..=end]).ok()).flatten()
}

fn parse_priority(v: &Value, tick: u32) -> Option<OrderPriority> {
    let target = match v {
        Value::Number(n) => PriorityTarget::Order(u32::try_from(n.as_u64()?).ok()?),
        Value::String(s) => {
            let s = s.trim().trim_start_matches('#');
            match s.parse::<u32>() {
                Ok(id) => PriorityTarget::Order(id),
                Err(_) => PriorityTarget::Kind(BurgerKind::from_name(s)?),
            }
        }
        _ => return None,
    };
    Some(OrderPriority { target, issued_tick: tick })
}

/// Parses a code-as-policy reply. Never fails: anything unusable is dropped
/// and reported in the batch.
pub fn parse_snippet_reply(text: &str, tick: u32, lifetime: u32) -> SnippetBatch {
    let mut batch = SnippetBatch::default();
    let Some(doc) = extract_json(text) else {
        batch.unparseable = true;
        return batch;
    };
    let (list, priority) = match &doc {
        Value::Array(items) => (items.as_slice(), None),
        Value::Object(map) => (
            map.get("snippets").and_then(Value::as_array).map_or(&[][..], Vec::as_slice),
            map.get("order").or_else(|| map.get("priority")),
        ),
        _ => {
            batch.unparseable = true;
            return batch;
        }
    };
    batch.priority = priority.and_then(|p| parse_priority(p, tick));
    for item in list {
        let cond = item.get("condition").and_then(Value::as_str);
        let verb = item.get("macro").or_else(|| item.get("action")).and_then(Value::as_str);
        let parsed = match (cond, verb) {
            (Some(c), Some(m)) => m
                .parse::<Verb>()
                .ok()
                .and_then(|verb| PolicySnippet::new(c, verb, tick, lifetime).ok()),
            _ => None,
        };
        match parsed {
            Some(s) => batch.snippets.push(s),
            None => batch.rejected.push(item.to_string()),
        }
    }
    batch
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agent::policy::macros::PrepareTarget;

    #[test]
    fn bare_array_gives_one_snippet() {
        let b = parse_snippet_reply(r#"[{"condition": "pan_empty and order(BeefBurger)", "macro": "Prepare(Beef)"}]"#, 50, 25);
        assert_eq!(b.snippets.len(), 1);
        assert_eq!(b.snippets[0].verb, Verb::Prepare(PrepareTarget::Beef));
        assert_eq!((b.snippets[0].issued_tick, b.snippets[0].expires_tick), (50, 75));
        assert!(b.priority.is_none());
    }

    #[test]
    fn invalid_text_gives_nothing() {
        let b = parse_snippet_reply("I think we should cook beef.", 0, 25);
        assert!(b.snippets.is_empty());
        assert!(b.unparseable);
    }

    #[test]
    fn order_directive_alone_sets_priority() {
        let b = parse_snippet_reply(r#"{"snippets": [], "order": "LettuceBurger"}"#, 25, 25);
        assert!(b.snippets.is_empty());
        assert_eq!(b.priority, Some(OrderPriority { target: PriorityTarget::Kind(BurgerKind::LettuceBurger), issued_tick: 25 }));
        let b = parse_snippet_reply(r#"{"order": 4}"#, 25, 25);
        assert_eq!(b.priority.unwrap().target, PriorityTarget::Order(4));
    }

    #[test]
    fn fenced_reply_and_partial_garbage() {
        let text = "Here you go:\n```json\n{\"snippets\": [{\"condition\": \"beef_ready\", \"macro\": \"Assemble(BeefBurger)\"}, {\"condition\": \"pan_exploded\", \"macro\": \"Idle\"}, {\"condition\": \"true\", \"macro\": \"Dance\"}]}\n```";
        let b = parse_snippet_reply(text, 0, 25);
        assert_eq!(b.snippets.len(), 1);
        assert_eq!(b.rejected.len(), 2);
    }
}
