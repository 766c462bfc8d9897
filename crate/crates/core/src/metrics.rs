//! Objective team metrics computed from an episode log: task score,
//! contribution rate over key events, cooperation failures and messages.
//!
//! Key events are credited per delivered burger. Every ingredient and plate
//! is followed by item id from the action that produced it to the plate it
//! ends up on; only events whose plate reached a correct serve count.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::env::{EnvEvent, EventKind, Ingredient, ItemId, ItemTag, Place, Player, ServeResult, TileKind};
use crate::session::EpisodeLog;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum KeyEventKind {
    CookBeef,
    UseBeef,
    PrepareLettuce,
    UseLettuce,
    UseBread,
    UsePlate,
    Serve,
}

impl KeyEventKind {
    pub const ALL: [KeyEventKind; 7] = [
        KeyEventKind::CookBeef,
        KeyEventKind::UseBeef,
        KeyEventKind::PrepareLettuce,
        KeyEventKind::UseLettuce,
        KeyEventKind::UseBread,
        KeyEventKind::UsePlate,
        KeyEventKind::Serve,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyEvent {
    pub kind: KeyEventKind,
    pub actor: Player,
    pub tick: u32,
    /// Item the event produced or acted on; a plate id once attributed.
    pub item: ItemId,
    /// The served plate this event contributed to.
    pub burger_lineage_id: Option<ItemId>,
}

/// Key events in event order. World events and non-key interactions are
/// skipped. A bread picked up at its station is credited when it joins a
/// plate, and lettuce preparation is credited to the final chop.
pub fn classify_key_actions(events: &[EnvEvent]) -> Vec<KeyEvent> {
    events
        .iter()
        .filter_map(|e| {
            let actor = e.actor.player()?;
            let (kind, item) = match e.kind {
                EventKind::StartCook { beef, .. } => (KeyEventKind::CookBeef, beef),
                EventKind::Chop { lettuce, done: true, .. } => (KeyEventKind::PrepareLettuce, lettuce),
                EventKind::PickUp { item, what: ItemTag::Plate, from: Place::Station { kind: TileKind::PlateStation, .. } } => {
                    (KeyEventKind::UsePlate, item)
                }
                EventKind::Assemble { plate, ingredient, .. } => (
                    match ingredient {
                        Ingredient::Beef => KeyEventKind::UseBeef,
                        Ingredient::Lettuce => KeyEventKind::UseLettuce,
                        Ingredient::Bread => KeyEventKind::UseBread,
                    },
                    plate,
                ),
                EventKind::Serve { item, result: ServeResult::Correct(_), .. } => (KeyEventKind::Serve, item),
                _ => return None,
            };
            Some(KeyEvent { kind, actor, tick: e.tick, item, burger_lineage_id: None })
        })
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attribution {
    pub events: Vec<KeyEvent>,
    /// Key events whose items never reached a correct serve.
    pub orphans: usize,
    /// Repeats of a kind already credited within the same lineage.
    pub duplicates: usize,
}

/// Keeps the key events that belong to a correctly served burger and tags
/// them with the served plate's id. Each kind counts once per burger.
pub fn attribute_lineage(events: &[EnvEvent], key_events: &[KeyEvent]) -> Attribution {
    let mut joined: HashMap<ItemId, ItemId> = HashMap::new();
    let mut served: HashMap<ItemId, u32> = HashMap::new();
    for e in events {
        match e.kind {
            EventKind::Assemble { plate, ingredient_item, .. } => {
                joined.insert(ingredient_item, plate);
            }
            EventKind::Serve { item, result: ServeResult::Correct(_), .. } => {
                served.insert(item, e.tick);
            }
            _ => {}
        }
    }
    let mut out = Attribution::default();
    let mut seen: BTreeMap<(ItemId, KeyEventKind), ()> = BTreeMap::new();
    for k in key_events {
        let plate = joined.get(&k.item).copied().unwrap_or(k.item);
        let credited = served.get(&plate).is_some_and(|t| k.tick <= *t);
        if !credited {
            out.orphans += 1;
        } else if seen.insert((plate, k.kind), ()).is_some() {
            out.duplicates += 1;
        } else {
            out.events.push(KeyEvent { burger_lineage_id: Some(plate), ..*k });
        }
    }
    out
}

/// Agent share of credited key events in percent; `None` when nothing was credited.
pub fn contribution_rate(key_events: &[KeyEvent]) -> Option<f64> {
    let agent = key_events.iter().filter(|k| k.actor == Player::Agent).count();
    let total = key_events.len();
    (total > 0).then(|| agent as f64 / total as f64 * 100.0)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureCount {
    pub missed: u32,
    pub wrong_serve: u32,
    pub fires: u32,
    pub total: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MessageCount {
    pub agent: u32,
    pub human: u32,
    pub by_template: BTreeMap<u8, u32>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyEventCount {
    pub agent: u32,
    pub human: u32,
    pub orphans: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub task_score: i32,
    /// Absent when no key event was credited to either chef.
    pub agent_contribution_rate: Option<f64>,
    pub key_events: KeyEventCount,
    pub failure_count: FailureCount,
    pub message_count: MessageCount,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("episode log is truncated: last tick {last_tick:?}, expected {expected} ticks")]
    Truncated { last_tick: Option<u32>, expected: u32 },
    #[error("episode log skips from tick {after} to {next}")]
    TickGap { after: u32, next: u32 },
    #[error("logged rewards sum to {ledger} but the footer says {footer}")]
    ScoreMismatch { ledger: i32, footer: i32 },
}

pub fn compute_report(log: &EpisodeLog) -> Result<MetricsReport, MetricsError> {
    let expected = log.header.game.episode_ticks;
    let last_tick = log.ticks.last().map(|t| t.record.tick);
    for (i, t) in log.ticks.iter().enumerate() {
        if t.record.tick != i as u32 {
            return Err(MetricsError::TickGap { after: i.saturating_sub(1) as u32, next: t.record.tick });
        }
    }
    if log.footer.aborted_at.is_some() || log.ticks.len() != expected as usize {
        return Err(MetricsError::Truncated { last_tick, expected });
    }
    let events: Vec<EnvEvent> = log.history().flat_map(|r| r.events.iter().cloned()).collect();
    let ledger: i32 = log.history().map(|r| r.reward_delta).sum();
    if ledger != log.footer.final_score {
        return Err(MetricsError::ScoreMismatch { ledger, footer: log.footer.final_score });
    }
    Ok(report_from(log.history(), &events, ledger))
}

fn report_from<'a>(history: impl Iterator<Item = &'a crate::history::HistoryRecord>, events: &[EnvEvent], score: i32) -> MetricsReport {
    let mut messages = MessageCount::default();
    for r in history {
        if r.agent_message.is_some() {
            messages.agent += 1;
        }
        if let Some(m) = &r.human_message {
            messages.human += 1;
            *messages.by_template.entry(m.template_id).or_default() += 1;
        }
    }
    let mut failures = FailureCount::default();
    for e in events {
        match e.kind {
            EventKind::OrderMissed { .. } => failures.missed += 1,
            EventKind::Serve { result: ServeResult::Wrong, .. } => failures.wrong_serve += 1,
            EventKind::PanFire { .. } => failures.fires += 1,
            _ => {}
        }
    }
    failures.total = failures.missed + failures.wrong_serve + failures.fires;
    let attributed = attribute_lineage(events, &classify_key_actions(events));
    let count = |p| attributed.events.iter().filter(|k| k.actor == p).count() as u32;
    MetricsReport {
        task_score: score,
        agent_contribution_rate: contribution_rate(&attributed.events),
        key_events: KeyEventCount {
            agent: count(Player::Agent),
            human: count(Player::Human),
            orphans: attributed.orphans as u32,
        },
        failure_count: failures,
        message_count: messages,
    }
}

impl MetricsReport {
    pub const CSV_HEADER: &'static str = "task_score,agent_contribution_rate,agent_key_events,human_key_events,missed,wrong_serve,fires,failures,agent_messages,human_messages";

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One CSV row matching [`Self::CSV_HEADER`]; an absent rate is an empty field.
    pub fn csv_row(&self) -> String {
        let rate = self.agent_contribution_rate.map(|r| format!("{r:.2}")).unwrap_or_default();
        let f = &self.failure_count;
        let mut row = String::new();
        let _ = write!(
            row,
            "{},{rate},{},{},{},{},{},{},{},{}",
            self.task_score,
            self.key_events.agent,
            self.key_events.human,
            f.missed,
            f.wrong_serve,
            f.fires,
            f.total,
            self.message_count.agent,
            self.message_count.human
        );
        row
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{Actor, BurgerKind, Cell, PlateContents};

    fn ev(tick: u32, actor: Actor, kind: EventKind) -> EnvEvent {
        EnvEvent { tick, actor, kind }
    }

    fn plate_station() -> Place {
        Place::Station { cell: Cell::new(12, 6), kind: TileKind::PlateStation }
    }

    fn assemble(tick: u32, actor: Actor, plate: u32, ingredient: Ingredient, item: u32) -> EnvEvent {
        ev(
            tick,
            actor,
            EventKind::Assemble {
                plate: ItemId(plate),
                ingredient,
                ingredient_item: ItemId(item),
                from: Place::Counter { cell: Cell::new(4, 4) },
                plate_held: true,
                contents: PlateContents::EMPTY.with(ingredient),
            },
        )
    }

    fn serve(tick: u32, actor: Actor, plate: u32, result: ServeResult) -> EnvEvent {
        ev(tick, actor, EventKind::Serve { item: ItemId(plate), result, order: None, reward: 0 })
    }

    /// A BeefBurger made by one chef.
    fn solo_beef_burger(actor: Actor) -> Vec<EnvEvent> {
        vec![
            ev(1, actor, EventKind::PickUp { item: ItemId(1), what: ItemTag::Beef, from: Place::Station { cell: Cell::new(0, 4), kind: TileKind::BeefStation } }),
            ev(5, actor, EventKind::StartCook { beef: ItemId(1), pan: Cell::new(5, 0) }),
            ev(25, Actor::World, EventKind::BeefDone { beef: ItemId(1), pan: Cell::new(5, 0) }),
            ev(30, actor, EventKind::PickUp { item: ItemId(2), what: ItemTag::Plate, from: plate_station() }),
            assemble(40, actor, 2, Ingredient::Beef, 1),
            assemble(45, actor, 2, Ingredient::Bread, 3),
            serve(50, actor, 2, ServeResult::Correct(BurgerKind::BeefBurger)),
        ]
    }

    #[test]
    fn empty_events_give_nothing() {
        assert!(classify_key_actions(&[]).is_empty());
        assert_eq!(contribution_rate(&[]), None);
    }

    #[test]
    fn get_beef_and_put_on_pan_is_cook_beef() {
        let k = classify_key_actions(&[ev(5, Actor::Human, EventKind::StartCook { beef: ItemId(1), pan: Cell::new(5, 0) })]);
        assert_eq!(k.len(), 1);
        assert_eq!((k[0].kind, k[0].actor), (KeyEventKind::CookBeef, Player::Human));
    }

    #[test]
    fn solo_beef_burger_has_five_kinds() {
        let events = solo_beef_burger(Actor::Agent);
        let a = attribute_lineage(&events, &classify_key_actions(&events));
        let mut kinds: Vec<_> = a.events.iter().map(|k| k.kind).collect();
        kinds.sort();
        assert_eq!(
            kinds,
            [KeyEventKind::CookBeef, KeyEventKind::UseBeef, KeyEventKind::UseBread, KeyEventKind::UsePlate, KeyEventKind::Serve]
        );
        assert!(a.events.iter().all(|k| k.burger_lineage_id == Some(ItemId(2))));
        assert_eq!(contribution_rate(&a.events), Some(100.0));
    }

    #[test]
    fn unserved_and_wrong_serves_are_orphans() {
        let mut events = solo_beef_burger(Actor::Agent);
        events.pop();
        let a = attribute_lineage(&events, &classify_key_actions(&events));
        assert!(a.events.is_empty());
        assert_eq!(a.orphans, 4);

        events.push(serve(50, Actor::Agent, 2, ServeResult::Wrong));
        let a = attribute_lineage(&events, &classify_key_actions(&events));
        assert!(a.events.is_empty());
    }

    #[test]
    fn two_burgers_two_lineages() {
        let mut events = solo_beef_burger(Actor::Agent);
        events.extend([
            ev(60, Actor::Human, EventKind::PickUp { item: ItemId(10), what: ItemTag::Plate, from: plate_station() }),
            ev(70, Actor::Human, EventKind::Chop { lettuce: ItemId(11), cutboard: Cell::new(6, 8), progress: 3, done: true }),
            assemble(75, Actor::Human, 10, Ingredient::Lettuce, 11),
            assemble(80, Actor::Human, 10, Ingredient::Bread, 12),
            serve(90, Actor::Human, 10, ServeResult::Correct(BurgerKind::LettuceBurger)),
        ]);
        let a = attribute_lineage(&events, &classify_key_actions(&events));
        let of = |id| a.events.iter().filter(|k| k.burger_lineage_id == Some(ItemId(id))).count();
        assert_eq!((of(2), of(10)), (5, 5));
        assert!(a.events.iter().all(|k| (k.burger_lineage_id == Some(ItemId(2))) == (k.actor == Player::Agent)));
        assert_eq!(contribution_rate(&a.events), Some(50.0));
    }

    #[test]
    fn rate_formula() {
        let mk = |actor| KeyEvent { kind: KeyEventKind::Serve, actor, tick: 0, item: ItemId(0), burger_lineage_id: None };
        let ks = [mk(Player::Agent), mk(Player::Agent), mk(Player::Agent), mk(Player::Human), mk(Player::Human)];
        assert_eq!(contribution_rate(&ks), Some(60.0));
    }
}
