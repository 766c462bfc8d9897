use serde::{Deserialize, Serialize};

use super::item::{BurgerKind, Ingredient, ItemId, ItemTag, PlateContents};
use super::layout::{Cell, TileKind};
use super::state::Player;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Actor {
    Agent,
    Human,
    World,
}

impl From<Player> for Actor {
    fn from(p: Player) -> Self {
        match p {
            Player::Agent => Actor::Agent,
            Player::Human => Actor::Human,
        }
    }
}

impl Actor {
    pub fn player(self) -> Option<Player> {
        match self {
            Actor::Agent => Some(Player::Agent),
            Actor::Human => Some(Player::Human),
            Actor::World => None,
        }
    }
}

/// Where an item came from or went to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "at", rename_all = "snake_case")]
pub enum Place {
    Station { cell: Cell, kind: TileKind },
    Counter { cell: Cell },
    Cutboard { cell: Cell },
    Pan { cell: Cell },
}

impl Place {
    pub fn cell(self) -> Cell {
        match self {
            Place::Station { cell, .. } | Place::Counter { cell } | Place::Cutboard { cell } | Place::Pan { cell } => cell,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ServeResult {
    Correct(BurgerKind),
    Wrong,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EventKind {
    PickUp {
        item: ItemId,
        what: ItemTag,
        from: Place,
    },
    PutDown {
        item: ItemId,
        what: ItemTag,
        to: Place,
    },
    StartCook {
        beef: ItemId,
        pan: Cell,
    },
    BeefDone {
        beef: ItemId,
        pan: Cell,
    },
    BeefOvercooked {
        beef: ItemId,
        pan: Cell,
    },
    PanFire {
        pan: Cell,
    },
    FireExtinguished {
        pan: Cell,
    },
    Chop {
        lettuce: ItemId,
        cutboard: Cell,
        progress: u8,
        done: bool,
    },
    /// An ingredient joined a plate. `plate_held` tells whether the actor was
    /// carrying the plate (true) or carrying the ingredient onto a plate lying
    /// on a counter (false).
    Assemble {
        plate: ItemId,
        ingredient: Ingredient,
        ingredient_item: ItemId,
        from: Place,
        plate_held: bool,
        contents: PlateContents,
    },
    /// Overcooked beef scraped onto an empty plate.
    ClearPan {
        plate: ItemId,
        beef: ItemId,
        pan: Cell,
    },
    /// A spoiled plate was emptied at an ingredient station.
    Discard {
        plate: ItemId,
        station: Cell,
    },
    Serve {
        item: ItemId,
        result: ServeResult,
        order: Option<u32>,
        reward: i32,
    },
    OrderSpawned {
        order: u32,
        burger: BurgerKind,
        deadline_tick: u32,
    },
    OrderMissed {
        order: u32,
        burger: BurgerKind,
        reward: i32,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvEvent {
    pub tick: u32,
    pub actor: Actor,
    #[serde(flatten)]
    pub kind: EventKind,
}

impl EnvEvent {
    /// Score change carried by this event (only serves and misses score).
    pub fn reward(&self) -> i32 {
        match self.kind {
            EventKind::Serve { reward, .. } | EventKind::OrderMissed { reward, .. } => reward,
            _ => 0,
        }
    }

    /// Short human-readable rendering for prompts and logs.
    pub fn describe(&self) -> String {
        let who = match self.actor {
            Actor::Agent => "agent",
            Actor::Human => "human",
            Actor::World => "world",
        };
        let what = match &self.kind {
            EventKind::PickUp { what, from, .. } => format!("picked up {what:?} from {}", place_name(from)),
            EventKind::PutDown { what, to, .. } => format!("put {what:?} on {}", place_name(to)),
            EventKind::StartCook { pan, .. } => format!("started cooking beef in pan {pan}"),
            EventKind::BeefDone { pan, .. } => format!("beef well done in pan {pan}"),
            EventKind::BeefOvercooked { pan, .. } => format!("beef overcooked in pan {pan}"),
            EventKind::PanFire { pan } => format!("pan {pan} caught fire"),
            EventKind::FireExtinguished { pan } => format!("fire in pan {pan} extinguished"),
            EventKind::Chop { progress, done, .. } => {
                if *done {
                    "finished chopping lettuce".to_string()
                } else {
                    format!("chopped lettuce ({progress})")
                }
            }
            EventKind::Assemble { ingredient, contents, .. } => format!("added {ingredient:?} to plate -> {contents}"),
            EventKind::ClearPan { pan, .. } => format!("removed overcooked beef from pan {pan}"),
            EventKind::Discard { .. } => "discarded spoiled beef".to_string(),
            EventKind::Serve { result, reward, .. } => match result {
                ServeResult::Correct(k) => format!("served {k} ({reward:+})"),
                ServeResult::Wrong => format!("served a wrong dish ({reward:+})"),
            },
            EventKind::OrderSpawned { order, burger, deadline_tick } => {
                format!("new order #{order} {burger} due at tick {deadline_tick}")
            }
            EventKind::OrderMissed { order, burger, reward } => format!("missed order #{order} {burger} ({reward:+})"),
        };
        format!("t{} {who} {what}", self.tick)
    }
}

fn place_name(p: &Place) -> String {
    match p {
        Place::Station { kind, .. } => format!("{kind:?}"),
        Place::Counter { cell } => format!("counter {cell}"),
        Place::Cutboard { cell } => format!("cutboard {cell}"),
        Place::Pan { cell } => format!("pan {cell}"),
    }
}
