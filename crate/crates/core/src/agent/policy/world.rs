//! Read-only queries over a [`GameState`] shared by the rule policy and the
//! executor.

use crate::env::{BurgerKind, Cell, CookState, GameState, Item, ItemKind, Order, PlateContents, Player, TileKind};

use super::snippets::OrderPriority;

pub fn burning_pans(s: &GameState) -> impl Iterator<Item = Cell> + '_ {
    s.pans.iter().filter(|p| p.on_fire).map(|p| p.cell)
}

pub fn free_pans(s: &GameState) -> impl Iterator<Item = Cell> + '_ {
    s.pans.iter().filter(|p| p.is_free()).map(|p| p.cell)
}

pub fn pans_in(s: &GameState, pred: impl Fn(CookState) -> bool) -> Vec<Cell> {
    s.pans.iter().filter(|p| !p.on_fire && p.cook_state().is_some_and(&pred)).map(|p| p.cell).collect()
}

pub fn well_done_pans(s: &GameState) -> Vec<Cell> {
    pans_in(s, |c| matches!(c, CookState::WellDone { .. }))
}

pub fn cooking_pans(s: &GameState) -> Vec<Cell> {
    pans_in(s, |c| matches!(c, CookState::Cooking { .. }))
}

pub fn overcooked_pans(s: &GameState) -> Vec<Cell> {
    pans_in(s, |c| c == CookState::Overcooked)
}

pub fn free_cutboards(s: &GameState) -> impl Iterator<Item = Cell> + '_ {
    s.cutboards.iter().filter(|b| b.item.is_none()).map(|b| b.cell)
}

pub fn free_counters(s: &GameState) -> impl Iterator<Item = Cell> + '_ {
    s.counters.iter().filter(|c| c.item.is_none()).map(|c| c.cell)
}

pub fn free_center_counters(s: &GameState) -> impl Iterator<Item = Cell> + '_ {
    s.counters
        .iter()
        .filter(|c| c.item.is_none() && s.layout.tile(c.cell) == Some(TileKind::CenterCounter))
        .map(|c| c.cell)
}

/// Counter cells holding an item that satisfies `pred`.
pub fn counters_with<'a>(s: &'a GameState, pred: impl Fn(&Item) -> bool + 'a) -> impl Iterator<Item = (Cell, Item)> + 'a {
    s.counters.iter().filter_map(move |c| c.item.filter(|i| pred(i)).map(|i| (c.cell, i)))
}

/// Cutboards holding lettuce, with whether it is chopped.
pub fn boards_with_lettuce(s: &GameState) -> impl Iterator<Item = (Cell, Item, bool)> + '_ {
    s.cutboards.iter().filter_map(|b| b.item.map(|i| (b.cell, i, s.is_chopped(&i))))
}

pub fn station(s: &GameState, kind: TileKind) -> Vec<Cell> {
    s.layout.cells_of(kind).collect()
}

pub fn ingredient_stations(s: &GameState) -> Vec<Cell> {
    s.layout.all_cells().filter(|c| s.layout.tile(*c).is_some_and(TileKind::is_ingredient_station)).collect()
}

pub fn is_chopping(s: &GameState, who: Player, board: Cell) -> bool {
    let c = s.chef(who);
    c.held.is_none() && c.facing_cell() == board
}

/// Active orders, priority directive first, then by deadline and id.
pub fn ranked_orders<'a>(s: &'a GameState, priority: Option<&OrderPriority>) -> Vec<&'a Order> {
    let mut v: Vec<&Order> = s.orders.iter().collect();
    v.sort_by_key(|o| (!priority.is_some_and(|p| p.matches(o)), o.deadline_tick, o.id));
    v
}

/// Best-ranked order kind whose recipe contains `contents`.
pub fn best_kind_for(s: &GameState, priority: Option<&OrderPriority>, contents: PlateContents) -> Option<BurgerKind> {
    ranked_orders(s, priority).into_iter().map(|o| o.kind).find(|k| contents.is_subset_of(k.recipe()))
}

pub fn is_usable_lettuce(s: &GameState, item: &Item) -> bool {
    matches!(item.kind, ItemKind::Lettuce { .. }) && s.is_chopped(item)
}
