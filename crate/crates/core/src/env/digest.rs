use std::fmt::Write;

use super::item::{CookState, Item, ItemKind};
use super::state::GameState;

/// Compact one-line rendering of the state used in history records and prompts.
pub fn describe_state(state: &GameState) -> String {
    let mut out = String::with_capacity(256);
    for chef in &state.chefs {
        let _ = write!(
            out,
            "{}@{}{:?} holds {}; ",
            chef.player,
            chef.position,
            chef.facing,
            chef.held.as_ref().map_or_else(|| "nothing".to_string(), |i| describe_item(state, i))
        );
    }
    for pan in &state.pans {
        let what = match (pan.on_fire, pan.cook_state()) {
            (true, _) => format!("ON FIRE (extinguish {}/{})", pan.extinguish_progress, state.config.extinguish_ticks),
            (false, None) => "empty".to_string(),
            (false, Some(c)) => cook_text(state, c),
        };
        let _ = write!(out, "pan{} {what}; ", pan.cell);
    }
    for board in &state.cutboards {
        let what = board.item.as_ref().map_or_else(|| "empty".to_string(), |i| describe_item(state, i));
        let _ = write!(out, "cutboard{} {what}; ", board.cell);
    }
    let loose: Vec<String> = state
        .counters
        .iter()
        .filter_map(|s| s.item.as_ref().map(|i| format!("{}{}", describe_item(state, i), s.cell)))
        .collect();
    if !loose.is_empty() {
        let _ = write!(out, "counters: {}; ", loose.join(", "));
    }
    let orders: Vec<String> =
        state.orders.iter().map(|o| format!("#{} {} ({} left)", o.id, o.kind, o.remaining(state.tick))).collect();
    let _ = write!(out, "orders: [{}]; score {}", orders.join(", "), state.score);
    out
}

pub fn describe_item(state: &GameState, item: &Item) -> String {
    match item.kind {
        ItemKind::Bread => "bread".into(),
        ItemKind::Lettuce { chop_progress } if chop_progress >= state.config.chop_count => "chopped lettuce".into(),
        ItemKind::Lettuce { chop_progress } => format!("lettuce {chop_progress}/{}", state.config.chop_count),
        ItemKind::Beef { cook } => format!("beef {}", cook_text(state, cook)),
        ItemKind::Plate { contents } => match contents.burger() {
            Some(k) => format!("plate {contents} = {k}"),
            None => format!("plate {contents}"),
        },
        ItemKind::SpoiledPlate => "plate with burnt beef".into(),
        ItemKind::FireExtinguisher => "fire extinguisher".into(),
    }
}

fn cook_text(state: &GameState, cook: CookState) -> String {
    match cook {
        CookState::Fresh => "raw".into(),
        CookState::Cooking { ticks } => format!("cooking {ticks}/{}", state.config.cook_ticks),
        CookState::WellDone { ticks_since_done } => {
            format!("well done ({} ticks to fire)", state.config.fire_delay_ticks.saturating_sub(ticks_since_done))
        }
        CookState::Overcooked => "overcooked".into(),
    }
}
