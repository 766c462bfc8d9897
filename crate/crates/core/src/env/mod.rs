//! Deterministic two-chef kitchen environment.

mod config;
mod digest;
mod event;
mod item;
mod layout;
mod snapshot;
mod state;
mod step;

pub use config::{ConfigError, GameConfig, OrderPolicy, ScriptedOrder};
pub use digest::{describe_item, describe_state};
pub use event::{Actor, EnvEvent, EventKind, Place, ServeResult};
pub use item::{
    BurgerKind, CookState, Ingredient, Item, ItemId, ItemKind, ItemTag, PlateContents, MISSED_ORDER_PENALTY,
    WRONG_SERVE_PENALTY,
};
pub use layout::{Cell, Direction, Layout, LayoutError, TileKind, COUNTER_CIRCUIT};
pub use snapshot::{restore, snapshot, state_hash, SnapshotError};
pub use state::{
    init_game, ChefState, ControlAction, ExtinguisherRack, GameState, ItemLocation, Order, PanState, Player, Slot,
};
pub use step::{advance_world, interact_outcome, step, step_in_place, StepError, StepOutcome};
