//! JSON frames exchanged with a browser client. See `docs/wire-protocol.md`.

use serde::{Deserialize, Serialize};

use crate::agent::CommCondition;
use crate::env::{Cell, ControlAction, CookState, Direction, GameState, Ingredient, Item, ItemKind, Player};
use crate::history::HUMAN_TEMPLATES;
use crate::metrics::MetricsReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WireKey {
    Up,
    Down,
    Left,
    Right,
    Interact,
}

impl From<WireKey> for ControlAction {
    fn from(k: WireKey) -> Self {
        match k {
            WireKey::Up => ControlAction::Up,
            WireKey::Down => ControlAction::Down,
            WireKey::Left => ControlAction::Left,
            WireKey::Right => ControlAction::Right,
            WireKey::Interact => ControlAction::Interact,
        }
    }
}

/// Browser `KeyboardEvent.key` values the client forwards.
pub fn key_from_dom(key: &str) -> Option<WireKey> {
    Some(match key {
        "ArrowUp" => WireKey::Up,
        "ArrowDown" => WireKey::Down,
        "ArrowLeft" => WireKey::Left,
        "ArrowRight" => WireKey::Right,
        " " | "Spacebar" => WireKey::Interact,
        _ => return None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClientFrame {
    Join { session: String },
    Key { action: WireKey },
    Button { template_id: u8 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sender {
    Agent,
    Human,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ServerFrame {
    Welcome {
        session: String,
        comm_condition: CommCondition,
        buttons_enabled: bool,
        templates: Vec<String>,
        episode_ticks: u32,
        tick_rate_hz: f64,
    },
    Countdown {
        seconds_left: u32,
    },
    StateFull {
        state: WireState,
    },
    StateDelta {
        delta: StateDelta,
    },
    Message {
        sender: Sender,
        text: String,
        tick: u32,
    },
    Score {
        tick: u32,
        score: i32,
    },
    OrderUpdate(OrderUpdate),
    GameOver {
        final_score: i32,
        aborted: bool,
        report: Option<MetricsReport>,
    },
    Error {
        code: ErrorCode,
        message: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    BadFrame,
    NotJoined,
    AlreadyJoined,
    SessionBusy,
    MessagesDisabled,
    UnknownTemplate,
    NotRunning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WireIngredient {
    Bread,
    Lettuce,
    Beef,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WireCook {
    Fresh,
    Cooking,
    WellDone,
    Overcooked,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "what", rename_all = "snake_case")]
pub enum WireItem {
    Bread { id: u32 },
    Lettuce { id: u32, chopped: bool },
    Beef { id: u32, cook: WireCook },
    Plate { id: u32, contents: Vec<WireIngredient> },
    SpoiledPlate { id: u32 },
    Extinguisher { id: u32 },
}

impl WireItem {
    fn of(item: &Item, chop_count: u8) -> WireItem {
        let id = item.id.0;
        match item.kind {
            ItemKind::Bread => WireItem::Bread { id },
            ItemKind::Lettuce { chop_progress } => WireItem::Lettuce { id, chopped: chop_progress >= chop_count },
            ItemKind::Beef { cook } => WireItem::Beef {
                id,
                cook: match cook {
                    CookState::Fresh => WireCook::Fresh,
                    CookState::Cooking { .. } => WireCook::Cooking,
                    CookState::WellDone { .. } => WireCook::WellDone,
                    CookState::Overcooked => WireCook::Overcooked,
                },
            },
            ItemKind::Plate { contents } => WireItem::Plate {
                id,
                contents: contents
                    .ingredients()
                    .map(|i| match i {
                        Ingredient::Bread => WireIngredient::Bread,
                        Ingredient::Lettuce => WireIngredient::Lettuce,
                        Ingredient::Beef => WireIngredient::Beef,
                    })
                    .collect(),
            },
            ItemKind::SpoiledPlate => WireItem::SpoiledPlate { id },
            ItemKind::FireExtinguisher => WireItem::Extinguisher { id },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireChef {
    pub player: Player,
    pub cell: Cell,
    pub facing: Direction,
    pub held: Option<WireItem>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WirePan {
    pub cell: Cell,
    pub beef: Option<WireItem>,
    pub on_fire: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireSlot {
    pub cell: Cell,
    pub item: Option<WireItem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireRack {
    pub cell: Cell,
    pub stocked: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireOrder {
    pub id: u32,
    pub burger: String,
    pub created_tick: u32,
    pub deadline_tick: u32,
}

/// Everything a client draws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WireState {
    pub tick: u32,
    pub score: i32,
    /// One string per row in the layout file alphabet.
    pub tiles: Vec<String>,
    pub chefs: Vec<WireChef>,
    pub pans: Vec<WirePan>,
    pub cutboards: Vec<WireSlot>,
    pub counters: Vec<WireSlot>,
    pub extinguishers: Vec<WireRack>,
    pub orders: Vec<WireOrder>,
}

impl WireState {
    pub fn of(s: &GameState) -> WireState {
        let cc = s.config.chop_count;
        let slot = |x: &crate::env::Slot| WireSlot { cell: x.cell, item: x.item.as_ref().map(|i| WireItem::of(i, cc)) };
        WireState {
            tick: s.tick,
            score: s.score,
            tiles: s.layout.to_text().lines().map(str::to_owned).collect(),
            chefs: s
                .chefs
                .iter()
                .map(|c| WireChef { player: c.player, cell: c.position, facing: c.facing, held: c.held.as_ref().map(|i| WireItem::of(i, cc)) })
                .collect(),
            pans: s
                .pans
                .iter()
                .map(|p| WirePan { cell: p.cell, beef: p.beef.as_ref().map(|i| WireItem::of(i, cc)), on_fire: p.on_fire })
                .collect(),
            cutboards: s.cutboards.iter().map(slot).collect(),
            counters: s.counters.iter().map(slot).collect(),
            extinguishers: s.extinguishers.iter().map(|r| WireRack { cell: r.cell, stocked: r.stocked }).collect(),
            orders: s
                .orders
                .iter()
                .map(|o| WireOrder { id: o.id, burger: o.kind.name().to_owned(), created_tick: o.created_tick, deadline_tick: o.deadline_tick })
                .collect(),
        }
    }

    pub fn apply(&mut self, d: &StateDelta) {
        self.tick = d.tick;
        if let Some(s) = d.score {
            self.score = s;
        }
        if let Some(c) = &d.chefs {
            self.chefs.clone_from(c);
        }
        if let Some(p) = &d.pans {
            self.pans.clone_from(p);
        }
        for (list, changed) in [(&mut self.cutboards, &d.cutboards), (&mut self.counters, &d.counters)] {
            for slot in changed {
                if let Some(s) = list.iter_mut().find(|s| s.cell == slot.cell) {
                    s.clone_from(slot);
                }
            }
        }
        if let Some(e) = &d.extinguishers {
            self.extinguishers.clone_from(e);
        }
        if let Some(o) = &d.orders {
            self.orders.clone_from(o);
        }
    }
}

/// Changes since the previous tick. Absent fields are unchanged; slot lists
/// carry only the slots that changed.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct StateDelta {
    pub tick: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub score: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chefs: Option<Vec<WireChef>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pans: Option<Vec<WirePan>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cutboards: Vec<WireSlot>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub counters: Vec<WireSlot>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extinguishers: Option<Vec<WireRack>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orders: Option<Vec<WireOrder>>,
}

impl StateDelta {
    pub fn between(prev: &WireState, next: &WireState) -> StateDelta {
        fn changed<T: PartialEq + Clone>(a: &T, b: &T) -> Option<T> {
            (a != b).then(|| b.clone())
        }
        fn slots(a: &[WireSlot], b: &[WireSlot]) -> Vec<WireSlot> {
            b.iter().filter(|s| !a.contains(s)).cloned().collect()
        }
        StateDelta {
            tick: next.tick,
            score: changed(&prev.score, &next.score),
            chefs: changed(&prev.chefs, &next.chefs),
            pans: changed(&prev.pans, &next.pans),
            cutboards: slots(&prev.cutboards, &next.cutboards),
            counters: slots(&prev.counters, &next.counters),
            extinguishers: changed(&prev.extinguishers, &next.extinguishers),
            orders: changed(&prev.orders, &next.orders),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Progress {
    pub cell: Cell,
    /// 0.0 to 1.0.
    pub progress: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderTimer {
    pub id: u32,
    /// Fraction of the order's lifetime still left, 1.0 down to 0.0.
    pub time_left: f64,
}

/// Progress bars: order countdowns, cooking, chopping and extinguishing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderUpdate {
    pub tick: u32,
    pub orders: Vec<OrderTimer>,
    pub cook: Vec<Progress>,
    pub chop: Vec<Progress>,
    pub extinguish: Vec<Progress>,
}

impl OrderUpdate {
    pub fn of(s: &GameState) -> OrderUpdate {
        let cfg = &s.config;
        let frac = |n: u32, d: u32| if d == 0 { 1.0 } else { (f64::from(n) / f64::from(d)).clamp(0.0, 1.0) };
        OrderUpdate {
            tick: s.tick,
            orders: s
                .orders
                .iter()
                .map(|o| OrderTimer { id: o.id, time_left: frac(o.remaining(s.tick), o.deadline_tick - o.created_tick) })
                .collect(),
            cook: s
                .pans
                .iter()
                .filter_map(|p| match p.cook_state()? {
                    CookState::Cooking { ticks } => Some(Progress { cell: p.cell, progress: frac(ticks, cfg.cook_ticks) }),
                    _ => None,
                })
                .collect(),
            chop: s
                .cutboards
                .iter()
                .filter_map(|b| match b.item?.kind {
                    ItemKind::Lettuce { chop_progress } if chop_progress > 0 && chop_progress < cfg.chop_count => {
                        Some(Progress { cell: b.cell, progress: frac(u32::from(chop_progress), u32::from(cfg.chop_count)) })
                    }
                    _ => None,
                })
                .collect(),
            extinguish: s
                .pans
                .iter()
                .filter(|p| p.on_fire && p.extinguish_progress > 0)
                .map(|p| Progress { cell: p.cell, progress: frac(p.extinguish_progress, cfg.extinguish_ticks) })
                .collect(),
        }
    }
}

/// What a client frame asks the session to do.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClientInput {
    Key(ControlAction),
    Button(u8),
}

/// Validates an in-game frame against the session's condition.
pub fn handle_client_input(frame: &ClientFrame, condition: CommCondition) -> Result<ClientInput, (ErrorCode, String)> {
    match *frame {
        ClientFrame::Key { action } => Ok(ClientInput::Key(action.into())),
        ClientFrame::Button { .. } if !condition.human_may_send() => {
            Err((ErrorCode::MessagesDisabled, format!("messages to the agent are disabled in {condition}")))
        }
        ClientFrame::Button { template_id } if !(1..=HUMAN_TEMPLATES.len() as u8).contains(&template_id) => {
            Err((ErrorCode::UnknownTemplate, format!("template {template_id} is outside 1..={}", HUMAN_TEMPLATES.len())))
        }
        ClientFrame::Button { template_id } => Ok(ClientInput::Button(template_id)),
        ClientFrame::Join { .. } => Err((ErrorCode::AlreadyJoined, "already joined".into())),
    }
}

pub fn welcome(session: &str, condition: CommCondition, episode_ticks: u32, tick_rate_hz: f64) -> ServerFrame {
    ServerFrame::Welcome {
        session: session.to_owned(),
        comm_condition: condition,
        buttons_enabled: condition.human_may_send(),
        templates: HUMAN_TEMPLATES.iter().map(|t| (*t).to_owned()).collect(),
        episode_ticks,
        tick_rate_hz,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{init_game, step_in_place, GameConfig, Layout};

    #[test]
    fn client_frames_are_exact() {
        let f: ClientFrame = serde_json::from_str(r#"{"type":"key","action":"interact"}"#).unwrap();
        assert_eq!(f, ClientFrame::Key { action: WireKey::Interact });
        assert_eq!(serde_json::to_string(&ClientFrame::Button { template_id: 3 }).unwrap(), r#"{"type":"button","template_id":3}"#);
        assert_eq!(serde_json::to_string(&ClientFrame::Join { session: "s1".into() }).unwrap(), r#"{"type":"join","session":"s1"}"#);
        assert!(serde_json::from_str::<ClientFrame>(r#"{"type":"key","action":"jump"}"#).is_err());
        assert_eq!(key_from_dom("ArrowUp"), Some(WireKey::Up));
        assert_eq!(key_from_dom(" "), Some(WireKey::Interact));
    }

    #[test]
    fn buttons_follow_the_condition() {
        let b = ClientFrame::Button { template_id: 3 };
        assert_eq!(handle_client_input(&b, CommCondition::BiComm), Ok(ClientInput::Button(3)));
        assert_eq!(handle_client_input(&b, CommCondition::NoComm).unwrap_err().0, ErrorCode::MessagesDisabled);
        assert_eq!(handle_client_input(&b, CommCondition::AComm).unwrap_err().0, ErrorCode::MessagesDisabled);
        let bad = ClientFrame::Button { template_id: 12 };
        assert_eq!(handle_client_input(&bad, CommCondition::HComm).unwrap_err().0, ErrorCode::UnknownTemplate);
        let up = ClientFrame::Key { action: WireKey::Up };
        assert_eq!(handle_client_input(&up, CommCondition::NoComm), Ok(ClientInput::Key(ControlAction::Up)));
    }

    #[test]
    fn deltas_rebuild_every_state() {
        let mut s = init_game(&Layout::counter_circuit(), &GameConfig::default(), 5);
        let mut view = WireState::of(&s);
        let moves = [ControlAction::Right, ControlAction::Up, ControlAction::Left, ControlAction::Interact, ControlAction::Down];
        for i in 0..200 {
            let prev = WireState::of(&s);
            step_in_place(&mut s, moves[i % 5], moves[(i * 3 + 1) % 5]).unwrap();
            let next = WireState::of(&s);
            let d = StateDelta::between(&prev, &next);
            let d: StateDelta = serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
            view.apply(&d);
            assert_eq!(view, next, "tick {i}");
        }
    }
}
