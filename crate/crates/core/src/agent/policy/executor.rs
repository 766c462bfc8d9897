//! Turns a macro action into one control action per tick.
//!
//! Every tick the executor re-derives a single goal from the macro and the
//! live state: interact with some cell, wait next to some cell, or stop.
//! Nothing about the plan is cached except the id of the item the macro is
//! working on, so a teammate moving things around simply changes the next
//! goal.

use serde::{Deserialize, Serialize};

use super::macros::{MacroAction, PassTarget, PrepareTarget, Verb};
use super::path::{plan_path, press};
use super::world;
use crate::env::{
    BurgerKind, Cell, ControlAction, CookState, Direction, GameState, Ingredient, Item, ItemId, ItemKind, ItemLocation, PlateContents,
    Player, TileKind,
};

/// Ticks spent waiting on a blocking chef before trying to step aside.
const SIDESTEP_AFTER: u32 = 3;
/// Refused moves in a row before stepping aside; the agent yields first.
const STALL_YIELD_AGENT: u32 = 2;
const STALL_YIELD_HUMAN: u32 = 5;
/// Ticks spent blocked before the macro is given up.
const ABANDON_BLOCKED_AFTER: u32 = 20;
/// Hard cap on any single macro.
const ABANDON_AFTER: u32 = 150;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExecStatus {
    InProgress,
    Completed,
    Abandoned(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Goal {
    Interact(Cell),
    /// Stand facing the cell and wait.
    WaitAt(Cell),
    Done,
    Abandon(&'static str),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Executor {
    pub tracked: Option<ItemId>,
    pub blocked: u32,
    pub ticks: u32,
    /// Cell the last press should have moved us into.
    #[serde(default)]
    pub expected: Option<Cell>,
    #[serde(default)]
    pub stalled: u32,
}

impl Executor {
    pub fn reset(&mut self) {
        *self = Executor::default();
    }

    /// One control action for `macro_action`, plus whether the macro is still running.
    pub fn step(&mut self, state: &GameState, me: Player, macro_action: &MacroAction) -> (ControlAction, ExecStatus) {
        self.ticks += 1;
        if self.ticks > ABANDON_AFTER {
            return (ControlAction::Noop, ExecStatus::Abandoned("took too long"));
        }
        let goal = match macro_action.verb {
            Verb::Idle => return (ControlAction::Noop, ExecStatus::Completed),
            Verb::Prepare(PrepareTarget::Beef) => self.prepare_beef(state, me),
            Verb::Prepare(PrepareTarget::Lettuce) => self.prepare_lettuce(state, me),
            Verb::Prepare(PrepareTarget::Bread) => prepare_bread(state, me),
            Verb::PassOn(t) => self.pass_on(state, me, t),
            Verb::Assemble(k) => self.assemble(state, me, k),
            Verb::Serve(k) => self.serve(state, me, k),
            Verb::PutoutFire => putout_fire(state, me),
        };
        match goal {
            Goal::Done => (ControlAction::Noop, ExecStatus::Completed),
            Goal::Abandon(why) => (ControlAction::Noop, ExecStatus::Abandoned(why)),
            Goal::Interact(cell) => self.approach(state, me, cell, true),
            Goal::WaitAt(cell) => self.approach(state, me, cell, false),
        }
    }

    fn approach(&mut self, s: &GameState, me: Player, target: Cell, interact: bool) -> (ControlAction, ExecStatus) {
        let chef = s.chef(me);
        let other = s.chef(me.other()).position;
        let contested = self.expected.take().filter(|c| *c != chef.position);
        match contested {
            Some(_) => self.stalled += 1,
            None => self.stalled = 0,
        }
        let limit = if me == Player::Agent { STALL_YIELD_AGENT } else { STALL_YIELD_HUMAN };
        if self.stalled > limit {
            if let Some(d) = sidestep(s, me, contested) {
                self.stalled = 0;
                return (ControlAction::from_direction(d), ExecStatus::InProgress);
            }
        }
        // The human side walks straight at the agent until a move is refused,
        // so the two never mirror each other's detours.
        let occupied: &[Cell] = if me == Player::Agent || self.stalled > 0 { &[other] } else { &[] };
        match plan_path(&s.layout, occupied, chef.position, chef.facing, target) {
            Ok(path) => {
                self.blocked = 0;
                let action = match path.first() {
                    Some(d) => {
                        let (to, _) = press(&s.layout, &[], chef.position, *d);
                        if to != chef.position {
                            self.expected = Some(to);
                        }
                        ControlAction::from_direction(*d)
                    }
                    None if interact => ControlAction::Interact,
                    None => ControlAction::Noop,
                };
                (action, ExecStatus::InProgress)
            }
            Err(_) => {
                self.blocked += 1;
                if self.blocked > ABANDON_BLOCKED_AFTER {
                    return (ControlAction::Noop, ExecStatus::Abandoned("path blocked"));
                }
                if self.blocked > SIDESTEP_AFTER {
                    if let Some(d) = sidestep(s, me, None) {
                        return (ControlAction::from_direction(d), ExecStatus::InProgress);
                    }
                }
                (ControlAction::Noop, ExecStatus::InProgress)
            }
        }
    }

    fn prepare_beef(&mut self, s: &GameState, me: Player) -> Goal {
        if let Some(id) = self.tracked {
            if matches!(s.find_item(id), Some((_, ItemLocation::Pan(_)))) {
                return Goal::Done;
            }
        }
        match s.chef(me).held {
            Some(item @ Item { kind: ItemKind::Beef { .. }, .. }) => {
                self.tracked = Some(item.id);
                match nearest(s, me, world::free_pans(s)) {
                    Some(pan) => Goal::Interact(pan),
                    // Cooked beef needs plating before it burns.
                    None if !world::well_done_pans(s).is_empty() => park_or_abandon(s, me, "pans busy"),
                    None => wait_near(s, me, s.pans.iter().map(|p| p.cell)),
                }
            }
            Some(_) => clear_hands(s, me),
            None => {
                let mut sources = world::station(s, TileKind::BeefStation);
                sources.extend(world::counters_with(s, |i| i.kind == ItemKind::Beef { cook: CookState::Fresh }).map(|(c, _)| c));
                nearest_goal(s, me, sources)
            }
        }
    }

    fn prepare_lettuce(&mut self, s: &GameState, me: Player) -> Goal {
        if let Some(id) = self.tracked {
            match s.find_item(id) {
                Some((item, _)) if s.is_chopped(item) => return Goal::Done,
                None => return Goal::Abandon("lettuce vanished"),
                _ => {}
            }
        }
        match s.chef(me).held {
            Some(item @ Item { kind: ItemKind::Lettuce { .. }, .. }) if !s.is_chopped(&item) => {
                self.tracked = Some(item.id);
                match nearest(s, me, world::free_cutboards(s)) {
                    Some(board) => Goal::Interact(board),
                    // Boards hold lettuce nobody is chopping: set ours aside and chop that.
                    None if unattended_raw_lettuce(s, me).is_some() => {
                        self.tracked = None;
                        put_down(s, me)
                    }
                    None => wait_near(s, me, s.cutboards.iter().map(|b| b.cell)),
                }
            }
            Some(_) => clear_hands(s, me),
            None => {
                let boards: Vec<(Cell, Item)> = world::boards_with_lettuce(s)
                    .filter(|(cell, _, chopped)| !chopped && !world::is_chopping(s, me.other(), *cell))
                    .map(|(c, i, _)| (c, i))
                    .collect();
                let pick = boards
                    .iter()
                    .find(|(_, i)| Some(i.id) == self.tracked)
                    .or_else(|| nearest(s, me, boards.iter().map(|(c, _)| *c)).and_then(|c| boards.iter().find(|b| b.0 == c)));
                match pick {
                    Some((cell, item)) => {
                        self.tracked = Some(item.id);
                        Goal::Interact(*cell)
                    }
                    None => {
                        let mut sources = world::station(s, TileKind::LettuceStation);
                        sources.extend(world::counters_with(s, |i| matches!(i.kind, ItemKind::Lettuce { .. }) && !s.is_chopped(i)).map(|(c, _)| c));
                        nearest_goal(s, me, sources)
                    }
                }
            }
        }
    }

    fn pass_on(&mut self, s: &GameState, me: Player, what: PassTarget) -> Goal {
        if let Some(id) = self.tracked {
            match s.find_item(id) {
                Some((_, ItemLocation::Counter(c))) if s.layout.tile(c) == Some(TileKind::CenterCounter) => return Goal::Done,
                Some((_, ItemLocation::Held(p))) if p == me => {}
                _ => return Goal::Abandon("passed item vanished"),
            }
        }
        let held = s.chef(me).held;
        let wanted = |i: &Item| match what {
            PassTarget::Plate => matches!(i.kind, ItemKind::Plate { .. }),
            PassTarget::Bread => i.kind == ItemKind::Bread,
        };
        match held {
            Some(item) if wanted(&item) => {
                self.tracked = Some(item.id);
                let human = s.chef(me.other()).position;
                let mut spots: Vec<Cell> = world::free_center_counters(s).collect();
                spots.sort_by_key(|c| (c.manhattan(human), c.x, c.y));
                let Some(best) = spots.first().map(|c| c.manhattan(human)) else {
                    return Goal::Abandon("center counter full");
                };
                nearest_goal(s, me, spots.into_iter().filter(|c| c.manhattan(human) == best).collect())
            }
            Some(_) => clear_hands(s, me),
            None => {
                let kind = match what {
                    PassTarget::Plate => TileKind::PlateStation,
                    PassTarget::Bread => TileKind::BreadStation,
                };
                nearest_goal(s, me, world::station(s, kind))
            }
        }
    }

    fn serve(&mut self, s: &GameState, me: Player, kind: BurgerKind) -> Goal {
        let held = s.chef(me).held;
        if let Some(id) = self.tracked {
            if held.is_none_or(|h| h.id != id) && s.find_item(id).is_none() {
                return Goal::Done;
            }
        }
        match held {
            Some(item) if item.plate_contents().and_then(PlateContents::burger) == Some(kind) => {
                self.tracked = Some(item.id);
                nearest_goal(s, me, world::station(s, TileKind::ServeSpot))
            }
            Some(_) => Goal::Abandon("holding something else"),
            None => {
                let on_counter: Vec<Cell> =
                    world::counters_with(s, |i| i.plate_contents().and_then(PlateContents::burger) == Some(kind))
                        .map(|(c, _)| c)
                        .collect();
                if on_counter.is_empty() {
                    Goal::Abandon("nothing to serve")
                } else {
                    nearest_goal(s, me, on_counter)
                }
            }
        }
    }

    fn assemble(&mut self, s: &GameState, me: Player, kind: BurgerKind) -> Goal {
        let recipe = kind.recipe();
        let held = s.chef(me).held;
        let counter_plates: Vec<(Cell, Item)> =
            world::counters_with(s, |i| i.plate_contents().is_some_and(|c| c.is_subset_of(recipe) && c != recipe)).collect();

        let Some(item) = held else {
            // Empty hands: chop first if the plate will need lettuce nobody is chopping.
            let plate = counter_plates
                .iter()
                .find(|(_, i)| Some(i.id) == self.tracked)
                .or_else(|| nearest(s, me, counter_plates.iter().map(|(c, _)| *c)).and_then(|c| counter_plates.iter().find(|p| p.0 == c)))
                .copied();
            let have = plate.and_then(|(_, i)| i.plate_contents()).unwrap_or_default();
            if recipe.lettuce && !have.lettuce && !chopped_lettuce_available(s) {
                if let Some(board) = unattended_raw_lettuce(s, me) {
                    return Goal::Interact(board);
                }
            }
            return match plate {
                Some((cell, p)) => {
                    self.tracked = Some(p.id);
                    Goal::Interact(cell)
                }
                None => nearest_goal(s, me, world::station(s, TileKind::PlateStation)),
            };
        };

        let contents = match item.kind {
            ItemKind::Plate { contents } => contents,
            ItemKind::Bread => return add_to_counter_plate(s, me, &counter_plates, Ingredient::Bread),
            ItemKind::Lettuce { .. } if s.is_chopped(&item) => {
                return add_to_counter_plate(s, me, &counter_plates, Ingredient::Lettuce)
            }
            _ => return clear_hands(s, me),
        };
        self.tracked = Some(item.id);
        if contents == recipe {
            return Goal::Done;
        }
        if !contents.is_subset_of(recipe) {
            return Goal::Abandon("plate does not fit the recipe");
        }
        let need = |i: Ingredient| recipe.has(i) && !contents.has(i);

        if need(Ingredient::Beef) {
            if let Some(pan) = nearest(s, me, world::well_done_pans(s).into_iter()) {
                return Goal::Interact(pan);
            }
        }
        let mut sources = Vec::new();
        if need(Ingredient::Lettuce) {
            sources.extend(world::boards_with_lettuce(s).filter(|(_, _, chopped)| *chopped).map(|(c, _, _)| c));
            sources.extend(world::counters_with(s, |i| world::is_usable_lettuce(s, i)).map(|(c, _)| c));
        }
        if need(Ingredient::Bread) {
            sources.extend(world::station(s, TileKind::BreadStation));
            sources.extend(world::counters_with(s, |i| i.kind == ItemKind::Bread).map(|(c, _)| c));
        }
        if let Some(src) = nearest(s, me, sources.into_iter()) {
            return Goal::Interact(src);
        }

        // Nothing usable yet: wait for it, or park the plate to go chop.
        if need(Ingredient::Lettuce) && !chopped_lettuce_available(s) && unattended_raw_lettuce(s, me).is_some() {
            return put_down(s, me);
        }
        if need(Ingredient::Beef) {
            let cooking = world::cooking_pans(s);
            if !cooking.is_empty() {
                return wait_near(s, me, cooking.into_iter());
            }
            if !beef_anywhere(s) {
                return park_or_abandon(s, me, "no beef on the way");
            }
        }
        if need(Ingredient::Lettuce) && !lettuce_anywhere(s) {
            return park_or_abandon(s, me, "no lettuce on the way");
        }
        Goal::WaitAt(s.chef(me).facing_cell())
    }
}

fn prepare_bread(s: &GameState, me: Player) -> Goal {
    match s.chef(me).held {
        Some(Item { kind: ItemKind::Bread, .. }) => Goal::Done,
        Some(_) => clear_hands(s, me),
        None => nearest_goal(s, me, world::station(s, TileKind::BreadStation)),
    }
}

fn putout_fire(s: &GameState, me: Player) -> Goal {
    let held = s.chef(me).held;
    let burning: Vec<Cell> = world::burning_pans(s).collect();
    if !burning.is_empty() {
        return match held {
            Some(Item { kind: ItemKind::FireExtinguisher, .. }) => nearest_goal(s, me, burning),
            Some(_) => clear_hands(s, me),
            None => {
                let stocked: Vec<Cell> = s.extinguishers.iter().filter(|r| r.stocked).map(|r| r.cell).collect();
                if stocked.is_empty() {
                    Goal::Done
                } else {
                    nearest_goal(s, me, stocked)
                }
            }
        };
    }
    let overcooked = world::overcooked_pans(s);
    match held {
        Some(Item { kind: ItemKind::FireExtinguisher, .. }) => {
            nearest_goal(s, me, s.extinguishers.iter().filter(|r| !r.stocked).map(|r| r.cell).collect())
        }
        Some(Item { kind: ItemKind::SpoiledPlate, .. }) => nearest_goal(s, me, world::ingredient_stations(s)),
        Some(Item { kind: ItemKind::Plate { contents }, .. }) if contents.is_empty() && !overcooked.is_empty() => {
            nearest_goal(s, me, overcooked)
        }
        Some(_) if !overcooked.is_empty() => clear_hands(s, me),
        None if !overcooked.is_empty() => nearest_goal(s, me, world::station(s, TileKind::PlateStation)),
        _ => Goal::Done,
    }
}

fn chopped_lettuce_available(s: &GameState) -> bool {
    s.items().any(|(i, loc)| s.is_chopped(i) && !matches!(loc, ItemLocation::Held(_)))
}

/// Beef in a pan or in someone's hands; raw beef left on a counter does not count.
fn beef_anywhere(s: &GameState) -> bool {
    s.items().any(|(i, loc)| {
        matches!(i.kind, ItemKind::Beef { cook } if cook != CookState::Overcooked) && !matches!(loc, ItemLocation::Counter(_))
    })
}

fn lettuce_anywhere(s: &GameState) -> bool {
    s.items()
        .any(|(i, loc)| matches!(i.kind, ItemKind::Lettuce { .. }) && (s.is_chopped(i) || !matches!(loc, ItemLocation::Counter(_))))
}

fn unattended_raw_lettuce(s: &GameState, me: Player) -> Option<Cell> {
    let boards: Vec<Cell> = world::boards_with_lettuce(s)
        .filter(|(c, _, chopped)| !chopped && !world::is_chopping(s, me.other(), *c))
        .map(|(c, _, _)| c)
        .collect();
    nearest(s, me, boards.into_iter())
}

/// Held ingredient goes onto a counter plate that lacks it, else down anywhere.
fn add_to_counter_plate(s: &GameState, me: Player, plates: &[(Cell, Item)], ing: Ingredient) -> Goal {
    let fits = plates.iter().filter(|(_, p)| p.plate_contents().is_some_and(|c| !c.has(ing))).map(|(c, _)| *c);
    match nearest(s, me, fits) {
        Some(c) => Goal::Interact(c),
        None => put_down(s, me),
    }
}

/// Gets rid of whatever is held so a macro can start from empty hands.
fn clear_hands(s: &GameState, me: Player) -> Goal {
    match s.chef(me).held.map(|i| i.kind) {
        Some(ItemKind::FireExtinguisher) => {
            nearest_goal(s, me, s.extinguishers.iter().filter(|r| !r.stocked).map(|r| r.cell).collect())
        }
        Some(ItemKind::SpoiledPlate) => nearest_goal(s, me, world::ingredient_stations(s)),
        Some(_) => put_down(s, me),
        None => Goal::Done,
    }
}

/// A started plate waits on a counter while its missing part is made.
fn park_or_abandon(s: &GameState, me: Player, why: &'static str) -> Goal {
    match put_down(s, me) {
        Goal::Abandon(_) => Goal::Abandon(why),
        g => g,
    }
}

fn put_down(s: &GameState, me: Player) -> Goal {
    match nearest(s, me, world::free_counters(s)) {
        Some(c) => Goal::Interact(c),
        None => Goal::Abandon("no free counter"),
    }
}

fn nearest_goal(s: &GameState, me: Player, cells: Vec<Cell>) -> Goal {
    match nearest(s, me, cells.iter().copied()) {
        Some(c) => Goal::Interact(c),
        None if cells.is_empty() => Goal::Abandon("no such station"),
        // Reachable only once the other chef moves.
        None => Goal::WaitAt(cells[0]),
    }
}

fn wait_near(s: &GameState, me: Player, cells: impl Iterator<Item = Cell>) -> Goal {
    match nearest(s, me, cells) {
        Some(c) => Goal::WaitAt(c),
        None => Goal::WaitAt(s.chef(me).facing_cell()),
    }
}

/// Candidate with the shortest press path, first listed on ties.
pub fn nearest(s: &GameState, me: Player, cells: impl Iterator<Item = Cell>) -> Option<Cell> {
    let chef = s.chef(me);
    let other = s.chef(me.other()).position;
    let mut best: Option<(usize, Cell)> = None;
    for c in cells {
        // A lower bound lets most candidates skip the search.
        let bound = c.manhattan(chef.position).saturating_sub(1) as usize;
        if best.is_some_and(|(b, _)| bound >= b) {
            continue;
        }
        if let Ok(p) = plan_path(&s.layout, &[other], chef.position, chef.facing, c) {
            if best.is_none_or(|(b, _)| p.len() < b) {
                best = Some((p.len(), c));
            }
        }
    }
    best.map(|(_, c)| c)
}

/// A free neighbouring cell to step into, preferring one that leaves the
/// other chef's immediate way.
fn sidestep(s: &GameState, me: Player, avoid: Option<Cell>) -> Option<Direction> {
    let pos = s.chef(me).position;
    let other = s.chef(me.other()).position;
    let moves = |d: &Direction| {
        let (to, _) = press(&s.layout, &[other], pos, *d);
        (to != pos && Some(to) != avoid).then_some(to)
    };
    Direction::ALL
        .into_iter()
        .filter_map(|d| moves(&d).map(|to| (d, to)))
        .max_by_key(|(_, to)| to.manhattan(other))
        .map(|(d, _)| d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agent::policy::macros::MacroSource;
    use crate::env::{init_game, step_in_place, EventKind, GameConfig, Layout, OrderPolicy, ScriptedOrder};

    fn state(orders: &[BurgerKind]) -> GameState {
        let cfg = GameConfig {
            orders: OrderPolicy {
                scripted: orders.iter().map(|k| ScriptedOrder { tick: 0, kind: *k, lifetime: 400 }).collect(),
                ..OrderPolicy::default()
            },
            ..GameConfig::default()
        };
        init_game(&Layout::counter_circuit(), &cfg, 5)
    }

    /// Runs the agent on one macro with the human idle; returns actions and events.
    fn run(s: &mut GameState, verb: Verb, max: u32) -> (Vec<ControlAction>, Vec<crate::env::EnvEvent>, ExecStatus) {
        let m = MacroAction::new(verb, s.tick, MacroSource::Fsm);
        let mut ex = Executor::default();
        let mut actions = Vec::new();
        let mut events = Vec::new();
        for _ in 0..max {
            let (a, status) = ex.step(s, Player::Agent, &m);
            if status != ExecStatus::InProgress {
                return (actions, events, status);
            }
            actions.push(a);
            events.extend(step_in_place(s, a, ControlAction::Noop).unwrap());
        }
        (actions, events, ExecStatus::InProgress)
    }

    #[test]
    fn prepare_lettuce_from_scratch() {
        let mut s = state(&[BurgerKind::LettuceBurger]);
        let (actions, events, status) = run(&mut s, Verb::Prepare(PrepareTarget::Lettuce), 200);
        assert_eq!(status, ExecStatus::Completed);
        let interacts = actions.iter().filter(|a| **a == ControlAction::Interact).count();
        // Take from the station, place on the board, three chops.
        assert_eq!(interacts, 2 + s.config.chop_count as usize);
        let kinds: Vec<&EventKind> = events.iter().filter(|e| e.actor == crate::env::Actor::Agent).map(|e| &e.kind).collect();
        assert!(matches!(kinds[0], EventKind::PickUp { .. }));
        assert!(matches!(kinds[1], EventKind::PutDown { .. }));
        assert!(matches!(kinds.last().unwrap(), EventKind::Chop { done: true, .. }));
    }

    #[test]
    fn serve_when_adjacent_is_a_single_interact() {
        let mut s = state(&[BurgerKind::BeefBurger]);
        s.chefs[0].position = Cell::new(11, 3);
        s.chefs[0].facing = Direction::Right;
        s.chefs[0].held = Some(Item { id: ItemId(900), kind: ItemKind::Plate { contents: BurgerKind::BeefBurger.recipe() } });
        let m = MacroAction::new(Verb::Serve(BurgerKind::BeefBurger), 0, MacroSource::Fsm);
        let mut ex = Executor::default();
        assert_eq!(ex.step(&s, Player::Agent, &m), (ControlAction::Interact, ExecStatus::InProgress));
        step_in_place(&mut s, ControlAction::Interact, ControlAction::Noop).unwrap();
        assert_eq!(ex.step(&s, Player::Agent, &m).1, ExecStatus::Completed);
        assert_eq!(s.score, 20);
    }

    #[test]
    fn pass_on_plate_uses_the_center_cell_nearest_the_human() {
        let mut s = state(&[]);
        let (_, events, status) = run(&mut s, Verb::PassOn(PassTarget::Plate), 100);
        assert_eq!(status, ExecStatus::Completed);
        let human = s.chef(Player::Human).position;
        let placed = events
            .iter()
            .find_map(|e| match e.kind {
                EventKind::PutDown { to, .. } => Some(to.cell()),
                _ => None,
            })
            .unwrap();
        let best = s.layout.cells_of(TileKind::CenterCounter).map(|c| c.manhattan(human)).min().unwrap();
        assert_eq!(placed.manhattan(human), best);
    }

    #[test]
    fn assemble_beef_burger_end_to_end() {
        let mut s = state(&[BurgerKind::BeefBurger]);
        let (_, _, st) = run(&mut s, Verb::Prepare(PrepareTarget::Beef), 100);
        assert_eq!(st, ExecStatus::Completed);
        let (_, _, st) = run(&mut s, Verb::Assemble(BurgerKind::BeefBurger), 150);
        assert_eq!(st, ExecStatus::Completed);
        let (_, _, st) = run(&mut s, Verb::Serve(BurgerKind::BeefBurger), 100);
        assert_eq!(st, ExecStatus::Completed);
        assert_eq!(s.score, 20);
        assert!(s.pans.iter().all(|p| !p.on_fire));
    }

    #[test]
    fn putout_fire_extinguishes_clears_and_returns() {
        let mut s = state(&[]);
        s.pans[0].beef = Some(Item { id: ItemId(500), kind: ItemKind::Beef { cook: crate::env::CookState::Overcooked } });
        s.pans[0].on_fire = true;
        let (_, events, st) = run(&mut s, Verb::PutoutFire, 300);
        assert_eq!(st, ExecStatus::Completed);
        assert!(events.iter().any(|e| matches!(e.kind, EventKind::FireExtinguished { .. })));
        assert!(events.iter().any(|e| matches!(e.kind, EventKind::ClearPan { .. })));
        assert!(events.iter().any(|e| matches!(e.kind, EventKind::Discard { .. })));
        assert!(s.pans[0].is_free());
        assert!(s.extinguishers.iter().all(|r| r.stocked));
    }

    #[test]
    fn serve_abandons_with_nothing_to_serve() {
        let mut s = state(&[BurgerKind::BeefBurger]);
        let (_, _, st) = run(&mut s, Verb::Serve(BurgerKind::BeefBurger), 5);
        assert!(matches!(st, ExecStatus::Abandoned(_)));
    }
}
