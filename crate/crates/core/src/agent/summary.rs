//! Bounded text rendering of the interaction history for prompts.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::env::{Actor, EventKind};
use crate::history::HistoryRecord;

pub const GAME_START: &str = "The game just started; nothing has happened yet.";

/// Rough token count used for prompt budgeting.
pub fn estimate_tokens(text: &str) -> usize {
    text.chars().count().div_ceil(4)
}

pub fn event_kind_name(kind: &EventKind) -> &'static str {
    match kind {
        EventKind::PickUp { .. } => "pick_up",
        EventKind::PutDown { .. } => "put_down",
        EventKind::StartCook { .. } => "start_cook",
        EventKind::BeefDone { .. } => "beef_done",
        EventKind::BeefOvercooked { .. } => "beef_overcooked",
        EventKind::PanFire { .. } => "pan_fire",
        EventKind::FireExtinguished { .. } => "fire_extinguished",
        EventKind::Chop { .. } => "chop",
        EventKind::Assemble { .. } => "assemble",
        EventKind::ClearPan { .. } => "clear_pan",
        EventKind::Discard { .. } => "discard",
        EventKind::Serve { .. } => "serve",
        EventKind::OrderSpawned { .. } => "order_spawned",
        EventKind::OrderMissed { .. } => "order_missed",
    }
}

fn actor_name(a: Actor) -> &'static str {
    match a {
        Actor::Agent => "agent",
        Actor::Human => "human",
        Actor::World => "kitchen",
    }
}

/// Deterministic history summary: the last `window` ticks line by line,
/// everything older as per-actor event counts, then the current state.
/// Oldest recent lines are dropped first when over `budget` tokens.
pub fn summarize_history(history: &[HistoryRecord], window: u32, budget: usize) -> String {
    let Some(last) = history.last() else {
        return GAME_START.to_owned();
    };
    let start = (last.tick + 1).saturating_sub(window);
    let split = history.partition_point(|r| r.tick < start);
    let (older, recent) = history.split_at(split);

    let mut head = String::new();
    if !older.is_empty() {
        let mut counts: BTreeMap<(Actor, &'static str), usize> = BTreeMap::new();
        let (mut agent_msgs, mut human_msgs, mut reward) = (0, 0, 0);
        for r in older {
            for e in &r.events {
                *counts.entry((e.actor, event_kind_name(&e.kind))).or_default() += 1;
            }
            agent_msgs += usize::from(r.agent_message.is_some());
            human_msgs += usize::from(r.human_message.is_some());
            reward += r.reward_delta;
        }
        let _ = write!(head, "Before tick {start}:");
        for actor in [Actor::Agent, Actor::Human, Actor::World] {
            let parts: Vec<String> =
                counts.iter().filter(|((a, _), _)| *a == actor).map(|((_, k), n)| format!("{n} {k}")).collect();
            if !parts.is_empty() {
                let _ = write!(head, " {} {};", actor_name(actor), parts.join(", "));
            }
        }
        let _ = writeln!(head, " {human_msgs} human messages, {agent_msgs} agent messages, score change {reward:+}.");
    }

    let mut lines: Vec<String> = recent.iter().flat_map(HistoryRecord::salient_lines).collect();
    let tail = format!("Now (tick {}): {}", last.tick, last.state_digest);
    let fixed = estimate_tokens(&head) + estimate_tokens(&tail) + 8;
    let mut dropped = 0;
    while !lines.is_empty() && fixed + lines.iter().map(|l| estimate_tokens(l) + 1).sum::<usize>() > budget {
        lines.remove(0);
        dropped += 1;
    }

    let mut out = head;
    let _ = writeln!(out, "From tick {start}:");
    if dropped > 0 {
        let _ = writeln!(out, "({dropped} earlier lines omitted)");
    }
    if lines.is_empty() && dropped == 0 {
        let _ = writeln!(out, "(no notable events)");
    }
    for l in lines {
        let _ = writeln!(out, "{l}");
    }
    out.push_str(&tail);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{BurgerKind, ControlAction, EnvEvent, ItemId, ServeResult};

    fn record(tick: u32, events: Vec<EnvEvent>) -> HistoryRecord {
        HistoryRecord {
            tick,
            state_digest: format!("state at {tick}"),
            agent_action: ControlAction::Noop,
            human_action: ControlAction::Noop,
            agent_message: None,
            human_message: None,
            reward_delta: events.iter().map(EnvEvent::reward).sum(),
            events,
        }
    }

    fn serve(tick: u32, actor: Actor) -> EnvEvent {
        EnvEvent {
            tick,
            actor,
            kind: EventKind::Serve { item: ItemId(tick), result: ServeResult::Correct(BurgerKind::BeefBurger), order: Some(1), reward: 20 },
        }
    }

    #[test]
    fn empty_history_is_the_start_stanza() {
        assert_eq!(summarize_history(&[], 75, 1000), GAME_START);
    }

    #[test]
    fn recent_serves_are_verbatim_and_old_ones_counted() {
        let history: Vec<HistoryRecord> = (0..150)
            .map(|t| record(t, if t % 20 == 5 { vec![serve(t, if t < 75 { Actor::Human } else { Actor::Agent })] } else { vec![] }))
            .collect();
        let text = summarize_history(&history, 75, 10_000);
        for t in (75..150).filter(|t| t % 20 == 5) {
            assert!(text.contains(&format!("t{t} agent served BeefBurger (+20)")), "missing serve at {t}");
        }
        assert!(text.contains("Before tick 75: human 4 serve;"));
        assert!(text.ends_with("Now (tick 149): state at 149"));
    }

    #[test]
    fn budget_drops_oldest_lines_first() {
        let history: Vec<HistoryRecord> = (0..60).map(|t| record(t, vec![serve(t, Actor::Agent)])).collect();
        let text = summarize_history(&history, 75, 120);
        assert!(estimate_tokens(&text) <= 140);
        assert!(text.contains("t59 agent served"));
        assert!(!text.contains("t0 agent served"));
        assert!(text.contains("earlier lines omitted"));
        assert_eq!(text, summarize_history(&history, 75, 120));
    }
}
