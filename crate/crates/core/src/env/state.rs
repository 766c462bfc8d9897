use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::GameConfig;
use super::event::{Actor, EnvEvent, EventKind};
use super::item::{BurgerKind, CookState, Item, ItemId, ItemKind};
use super::layout::{Cell, Direction, Layout, TileKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Player {
    Agent,
    Human,
}

impl Player {
    pub const BOTH: [Player; 2] = [Player::Agent, Player::Human];

    pub fn index(self) -> usize {
        match self {
            Player::Agent => 0,
            Player::Human => 1,
        }
    }

    pub fn other(self) -> Player {
        match self {
            Player::Agent => Player::Human,
            Player::Human => Player::Agent,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Agent => "agent",
            Player::Human => "human",
        })
    }
}

/// One tick of chef input.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ControlAction {
    Up,
    Down,
    Left,
    Right,
    Interact,
    #[default]
    Noop,
}

impl ControlAction {
    pub const ALL: [ControlAction; 6] = [
        ControlAction::Up,
        ControlAction::Down,
        ControlAction::Left,
        ControlAction::Right,
        ControlAction::Interact,
        ControlAction::Noop,
    ];

    pub fn direction(self) -> Option<Direction> {
        match self {
            ControlAction::Up => Some(Direction::Up),
            ControlAction::Down => Some(Direction::Down),
            ControlAction::Left => Some(Direction::Left),
            ControlAction::Right => Some(Direction::Right),
            _ => None,
        }
    }

    pub fn from_direction(d: Direction) -> ControlAction {
        match d {
            Direction::Up => ControlAction::Up,
            Direction::Down => ControlAction::Down,
            Direction::Left => ControlAction::Left,
            Direction::Right => ControlAction::Right,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ControlAction::Up => "up",
            ControlAction::Down => "down",
            ControlAction::Left => "left",
            ControlAction::Right => "right",
            ControlAction::Interact => "interact",
            ControlAction::Noop => "noop",
        }
    }

    pub fn from_name(s: &str) -> Option<ControlAction> {
        ControlAction::ALL.into_iter().find(|a| a.name().eq_ignore_ascii_case(s.trim()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChefState {
    pub player: Player,
    pub position: Cell,
    pub facing: Direction,
    pub held: Option<Item>,
}

impl ChefState {
    pub fn facing_cell(&self) -> Cell {
        self.position.step(self.facing)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Order {
    pub id: u32,
    pub kind: BurgerKind,
    pub created_tick: u32,
    pub deadline_tick: u32,
}

impl Order {
    pub fn remaining(&self, tick: u32) -> u32 {
        self.deadline_tick.saturating_sub(tick)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PanState {
    pub cell: Cell,
    pub beef: Option<Item>,
    pub on_fire: bool,
    pub extinguish_progress: u32,
    /// Tick of the most recent extinguishing interact; progress resets when a
    /// tick passes without one.
    pub last_extinguish_tick: Option<u32>,
}

impl PanState {
    pub fn is_free(&self) -> bool {
        self.beef.is_none() && !self.on_fire
    }

    pub fn cook_state(&self) -> Option<CookState> {
        match self.beef?.kind {
            ItemKind::Beef { cook } => Some(cook),
            _ => None,
        }
    }
}

/// A surface holding at most one item (counter, center counter or cutboard).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Slot {
    pub cell: Cell,
    pub item: Option<Item>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExtinguisherRack {
    pub cell: Cell,
    pub stocked: bool,
}

/// Complete world state at the start of `tick`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameState {
    pub tick: u32,
    pub layout: Layout,
    pub config: GameConfig,
    pub chefs: [ChefState; 2],
    pub pans: Vec<PanState>,
    pub cutboards: Vec<Slot>,
    pub counters: Vec<Slot>,
    pub extinguishers: Vec<ExtinguisherRack>,
    pub orders: Vec<Order>,
    /// Ticks at which replacement orders are due.
    pub pending_spawns: Vec<u32>,
    /// Index of the next scripted order not yet spawned.
    pub scripted_cursor: usize,
    pub next_order_id: u32,
    pub next_item_id: u32,
    pub score: i32,
    pub rng: ChaCha8Rng,
}

impl GameState {
    pub fn chef(&self, p: Player) -> &ChefState {
        &self.chefs[p.index()]
    }

    pub fn chef_mut(&mut self, p: Player) -> &mut ChefState {
        &mut self.chefs[p.index()]
    }

    pub fn is_finished(&self) -> bool {
        self.tick >= self.config.episode_ticks
    }

    pub fn pan(&self, cell: Cell) -> Option<&PanState> {
        self.pans.iter().find(|p| p.cell == cell)
    }

    pub fn cutboard(&self, cell: Cell) -> Option<&Slot> {
        self.cutboards.iter().find(|s| s.cell == cell)
    }

    pub fn counter(&self, cell: Cell) -> Option<&Slot> {
        self.counters.iter().find(|s| s.cell == cell)
    }

    pub fn rack(&self, cell: Cell) -> Option<&ExtinguisherRack> {
        self.extinguishers.iter().find(|r| r.cell == cell)
    }

    pub fn is_chopped(&self, item: &Item) -> bool {
        matches!(item.kind, ItemKind::Lettuce { chop_progress } if chop_progress >= self.config.chop_count)
    }

    pub fn active_orders_of(&self, kind: BurgerKind) -> impl Iterator<Item = &Order> {
        self.orders.iter().filter(move |o| o.kind == kind)
    }

    pub(crate) fn fresh_item(&mut self, kind: ItemKind) -> Item {
        let id = ItemId(self.next_item_id);
        self.next_item_id += 1;
        Item { id, kind }
    }

    pub(crate) fn spawn_order(&mut self, kind: BurgerKind, lifetime: u32, events: &mut Vec<EnvEvent>) {
        let order = Order {
            id: self.next_order_id,
            kind,
            created_tick: self.tick,
            deadline_tick: self.tick + lifetime,
        };
        self.next_order_id += 1;
        events.push(EnvEvent {
            tick: self.tick,
            actor: Actor::World,
            kind: EventKind::OrderSpawned { order: order.id, burger: kind, deadline_tick: order.deadline_tick },
        });
        self.orders.push(order);
    }

    pub(crate) fn random_burger(&mut self) -> BurgerKind {
        BurgerKind::ALL[self.rng.random_range(0..BurgerKind::ALL.len())]
    }

    /// Every item currently in the world, with where it is.
    pub fn items(&self) -> impl Iterator<Item = (&Item, ItemLocation)> {
        let held = self.chefs.iter().filter_map(|c| c.held.as_ref().map(|i| (i, ItemLocation::Held(c.player))));
        let counters = self.counters.iter().filter_map(|s| s.item.as_ref().map(|i| (i, ItemLocation::Counter(s.cell))));
        let boards = self.cutboards.iter().filter_map(|s| s.item.as_ref().map(|i| (i, ItemLocation::Cutboard(s.cell))));
        let pans = self.pans.iter().filter_map(|p| p.beef.as_ref().map(|i| (i, ItemLocation::Pan(p.cell))));
        held.chain(counters).chain(boards).chain(pans)
    }

    pub fn find_item(&self, id: ItemId) -> Option<(&Item, ItemLocation)> {
        self.items().find(|(i, _)| i.id == id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ItemLocation {
    Held(Player),
    Counter(Cell),
    Cutboard(Cell),
    Pan(Cell),
}

/// Builds the tick-0 state. Identical inputs give identical states.
pub fn init_game(layout: &Layout, config: &GameConfig, seed: u64) -> GameState {
    let [agent_spawn, human_spawn] = layout.spawn_points();
    let slots = |kind: TileKind| layout.cells_of(kind).map(|cell| Slot { cell, item: None }).collect::<Vec<_>>();
    let mut counters = slots(TileKind::Counter);
    counters.extend(slots(TileKind::CenterCounter));
    counters.sort_by_key(|s| (s.cell.y, s.cell.x));

    let mut state = GameState {
        tick: 0,
        layout: layout.clone(),
        config: config.clone(),
        chefs: [
            ChefState { player: Player::Agent, position: agent_spawn, facing: Direction::Down, held: None },
            ChefState { player: Player::Human, position: human_spawn, facing: Direction::Up, held: None },
        ],
        pans: layout
            .cells_of(TileKind::PanStation)
            .map(|cell| PanState { cell, beef: None, on_fire: false, extinguish_progress: 0, last_extinguish_tick: None })
            .collect(),
        cutboards: slots(TileKind::CutboardStation),
        counters,
        extinguishers: layout
            .cells_of(TileKind::ExtinguisherStation)
            .map(|cell| ExtinguisherRack { cell, stocked: true })
            .collect(),
        orders: Vec::new(),
        pending_spawns: Vec::new(),
        scripted_cursor: 0,
        next_order_id: 1,
        next_item_id: 1,
        score: 0,
        rng: ChaCha8Rng::seed_from_u64(seed),
    };

    // Tick-0 orders; the events are not part of any step and are dropped.
    let mut events = Vec::new();
    if config.orders.scripted.is_empty() {
        for _ in 0..config.orders.initial_orders {
            let kind = state.random_burger();
            state.spawn_order(kind, config.orders.lifetime, &mut events);
        }
    } else {
        super::step::spawn_scripted(&mut state, &mut events);
    }
    state
}
