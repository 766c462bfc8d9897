//! The transition function.
//!
//! A tick resolves in a fixed order: movement for both chefs, the agent's
//! interact, the human's interact, then world timers (cooking, fire, order
//! deadlines and spawning). The tick counter advances last.

use thiserror::Error;

use super::event::{Actor, EnvEvent, EventKind, Place, ServeResult};
use super::item::{CookState, Ingredient, Item, ItemKind, MISSED_ORDER_PENALTY, WRONG_SERVE_PENALTY};
use super::layout::{Cell, TileKind};
use super::state::{ControlAction, GameState, Player};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StepError {
    #[error("episode already finished at tick {0}")]
    Finished(u32),
}

#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub state: GameState,
    pub events: Vec<EnvEvent>,
    pub reward_delta: i32,
}

/// Pure transition: returns the next state without touching the input.
pub fn step(state: &GameState, agent: ControlAction, human: ControlAction) -> Result<StepOutcome, StepError> {
    let mut next = state.clone();
    let events = step_in_place(&mut next, agent, human)?;
    let reward_delta = next.score - state.score;
    Ok(StepOutcome { state: next, events, reward_delta })
}

/// In-place variant of [`step`] used by the session loop.
pub fn step_in_place(state: &mut GameState, agent: ControlAction, human: ControlAction) -> Result<Vec<EnvEvent>, StepError> {
    if state.is_finished() {
        return Err(StepError::Finished(state.tick));
    }
    resolve_movement(state, [agent, human]);
    let mut events = Vec::new();
    for (player, action) in [(Player::Agent, agent), (Player::Human, human)] {
        if action == ControlAction::Interact {
            events.extend(interact_outcome(state, player));
        }
    }
    events.extend(advance_world(state));
    state.tick += 1;
    Ok(events)
}

fn resolve_movement(state: &mut GameState, actions: [ControlAction; 2]) {
    let mut targets: [Option<Cell>; 2] = [None, None];
    for (i, action) in actions.iter().enumerate() {
        if let Some(dir) = action.direction() {
            let chef = &mut state.chefs[i];
            chef.facing = dir;
            let to = chef.position.step(dir);
            if state.layout.is_floor(to) {
                targets[i] = Some(to);
            }
        }
    }
    let pos = [state.chefs[0].position, state.chefs[1].position];
    let mut blocked = [false; 2];
    if let (Some(a), Some(b)) = (targets[0], targets[1]) {
        if a == b || (a == pos[1] && b == pos[0]) {
            blocked = [true, true];
        }
    }
    for i in 0..2 {
        let j = 1 - i;
        if let Some(t) = targets[i] {
            // Moving into a cell the other chef keeps occupying.
            if t == pos[j] && (targets[j].is_none() || blocked[j]) {
                blocked[i] = true;
            }
        }
    }
    // A chef blocked above may in turn block one following it.
    for i in 0..2 {
        let j = 1 - i;
        if let Some(t) = targets[i] {
            if t == pos[j] && blocked[j] {
                blocked[i] = true;
            }
        }
    }
    for i in 0..2 {
        if let (Some(t), false) = (targets[i], blocked[i]) {
            state.chefs[i].position = t;
        }
    }
}

/// Applies one chef's interact with whatever it faces.
pub fn interact_outcome(state: &mut GameState, player: Player) -> Vec<EnvEvent> {
    let mut out = Vec::new();
    let chef = state.chef(player);
    let target = chef.facing_cell();
    let Some(tile) = state.layout.tile(target) else {
        return out;
    };
    let held = chef.held;
    let tick = state.tick;
    let actor = Actor::from(player);
    let mut emit = |kind: EventKind| out.push(EnvEvent { tick, actor, kind });

    match tile {
        TileKind::Floor => {}
        TileKind::Counter | TileKind::CenterCounter => {
            let place = Place::Counter { cell: target };
            let slot_idx = state.counters.iter().position(|s| s.cell == target).expect("counter slot");
            let on_counter = state.counters[slot_idx].item;
            match (held, on_counter) {
                (None, Some(item)) => {
                    state.counters[slot_idx].item = None;
                    state.chef_mut(player).held = Some(item);
                    emit(EventKind::PickUp { item: item.id, what: item.tag(), from: place });
                }
                (Some(item), None) => {
                    state.counters[slot_idx].item = Some(item);
                    state.chef_mut(player).held = None;
                    emit(EventKind::PutDown { item: item.id, what: item.tag(), to: place });
                }
                (Some(h), Some(c)) => {
                    // Held plate takes the counter ingredient, or the held
                    // ingredient goes onto the counter plate.
                    if let Some((plate, ingredient)) = combine(state, &h, &c) {
                        let plate_held = plate.id == h.id;
                        let ing_item = if plate_held { c } else { h };
                        let contents = plate.plate_contents().expect("plate").with(ingredient);
                        let merged = Item { id: plate.id, kind: ItemKind::Plate { contents } };
                        if plate_held {
                            state.chef_mut(player).held = Some(merged);
                            state.counters[slot_idx].item = None;
                        } else {
                            state.chef_mut(player).held = None;
                            state.counters[slot_idx].item = Some(merged);
                        }
                        emit(EventKind::Assemble {
                            plate: plate.id,
                            ingredient,
                            ingredient_item: ing_item.id,
                            from: place,
                            plate_held,
                            contents,
                        });
                    }
                }
                (None, None) => {}
            }
        }
        TileKind::BreadStation | TileKind::BeefStation | TileKind::LettuceStation => {
            let place = Place::Station { cell: target, kind: tile };
            match held {
                None => {
                    let kind = match tile {
                        TileKind::BreadStation => ItemKind::Bread,
                        TileKind::BeefStation => ItemKind::Beef { cook: CookState::Fresh },
                        _ => ItemKind::Lettuce { chop_progress: 0 },
                    };
                    let item = state.fresh_item(kind);
                    state.chef_mut(player).held = Some(item);
                    emit(EventKind::PickUp { item: item.id, what: item.tag(), from: place });
                }
                Some(Item { id, kind: ItemKind::SpoiledPlate }) => {
                    state.chef_mut(player).held = Some(Item { id, kind: ItemKind::Plate { contents: Default::default() } });
                    emit(EventKind::Discard { plate: id, station: target });
                }
                Some(Item { id, kind: ItemKind::Plate { contents } }) if tile == TileKind::BreadStation && !contents.bread => {
                    let bread = state.fresh_item(ItemKind::Bread);
                    let contents = contents.with(Ingredient::Bread);
                    state.chef_mut(player).held = Some(Item { id, kind: ItemKind::Plate { contents } });
                    emit(EventKind::Assemble {
                        plate: id,
                        ingredient: Ingredient::Bread,
                        ingredient_item: bread.id,
                        from: place,
                        plate_held: true,
                        contents,
                    });
                }
                _ => {}
            }
        }
        TileKind::PlateStation => {
            if held.is_none() {
                let plate = state.fresh_item(ItemKind::Plate { contents: Default::default() });
                state.chef_mut(player).held = Some(plate);
                emit(EventKind::PickUp {
                    item: plate.id,
                    what: plate.tag(),
                    from: Place::Station { cell: target, kind: tile },
                });
            }
        }
        TileKind::ExtinguisherStation => {
            let rack = state.extinguishers.iter().position(|r| r.cell == target).expect("rack");
            let place = Place::Station { cell: target, kind: tile };
            match held {
                None if state.extinguishers[rack].stocked => {
                    state.extinguishers[rack].stocked = false;
                    let ext = state.fresh_item(ItemKind::FireExtinguisher);
                    state.chef_mut(player).held = Some(ext);
                    emit(EventKind::PickUp { item: ext.id, what: ext.tag(), from: place });
                }
                Some(item @ Item { kind: ItemKind::FireExtinguisher, .. }) if !state.extinguishers[rack].stocked => {
                    state.extinguishers[rack].stocked = true;
                    state.chef_mut(player).held = None;
                    emit(EventKind::PutDown { item: item.id, what: item.tag(), to: place });
                }
                _ => {}
            }
        }
        TileKind::ServeSpot => {
            let Some(item) = held.filter(|i| i.kind != ItemKind::FireExtinguisher) else {
                return out;
            };
            state.chef_mut(player).held = None;
            let burger = item.plate_contents().and_then(|c| c.burger());
            let order = burger.and_then(|k| {
                state
                    .orders
                    .iter()
                    .filter(|o| o.kind == k)
                    .min_by_key(|o| (o.deadline_tick, o.id))
                    .map(|o| o.id)
            });
            match (burger, order) {
                (Some(kind), Some(order_id)) => {
                    state.orders.retain(|o| o.id != order_id);
                    state.score += kind.reward();
                    schedule_replacement(state);
                    emit(EventKind::Serve {
                        item: item.id,
                        result: ServeResult::Correct(kind),
                        order: Some(order_id),
                        reward: kind.reward(),
                    });
                }
                _ => {
                    state.score += WRONG_SERVE_PENALTY;
                    emit(EventKind::Serve { item: item.id, result: ServeResult::Wrong, order: None, reward: WRONG_SERVE_PENALTY });
                }
            }
        }
        TileKind::PanStation => {
            let idx = state.pans.iter().position(|p| p.cell == target).expect("pan");
            let pan = state.pans[idx].clone();
            let place = Place::Pan { cell: target };
            match held {
                Some(Item { kind: ItemKind::FireExtinguisher, .. }) if pan.on_fire => {
                    if pan.last_extinguish_tick != Some(tick) {
                        let p = &mut state.pans[idx];
                        p.extinguish_progress += 1;
                        p.last_extinguish_tick = Some(tick);
                        if p.extinguish_progress >= state.config.extinguish_ticks {
                            p.on_fire = false;
                            p.extinguish_progress = 0;
                            p.last_extinguish_tick = None;
                            emit(EventKind::FireExtinguished { pan: target });
                        }
                    }
                }
                Some(Item { id, kind: ItemKind::Beef { cook: CookState::Fresh } }) if pan.is_free() => {
                    state.pans[idx].beef = Some(Item { id, kind: ItemKind::Beef { cook: CookState::Cooking { ticks: 0 } } });
                    state.chef_mut(player).held = None;
                    emit(EventKind::StartCook { beef: id, pan: target });
                }
                Some(Item { id, kind: ItemKind::Plate { contents } }) if !pan.on_fire => match pan.cook_state() {
                    Some(CookState::WellDone { .. }) if !contents.beef => {
                        let beef = pan.beef.expect("beef");
                        let contents = contents.with(Ingredient::Beef);
                        state.pans[idx].beef = None;
                        state.chef_mut(player).held = Some(Item { id, kind: ItemKind::Plate { contents } });
                        emit(EventKind::Assemble {
                            plate: id,
                            ingredient: Ingredient::Beef,
                            ingredient_item: beef.id,
                            from: place,
                            plate_held: true,
                            contents,
                        });
                    }
                    Some(CookState::Overcooked) if contents.is_empty() => {
                        let beef = pan.beef.expect("beef");
                        state.pans[idx].beef = None;
                        state.chef_mut(player).held = Some(Item { id, kind: ItemKind::SpoiledPlate });
                        emit(EventKind::ClearPan { plate: id, beef: beef.id, pan: target });
                    }
                    _ => {}
                },
                _ => {}
            }
        }
        TileKind::CutboardStation => {
            let idx = state.cutboards.iter().position(|s| s.cell == target).expect("cutboard");
            let place = Place::Cutboard { cell: target };
            let on_board = state.cutboards[idx].item;
            match (held, on_board) {
                (Some(item @ Item { kind: ItemKind::Lettuce { .. }, .. }), None) if !state.is_chopped(&item) => {
                    state.cutboards[idx].item = Some(item);
                    state.chef_mut(player).held = None;
                    emit(EventKind::PutDown { item: item.id, what: item.tag(), to: place });
                }
                (None, Some(Item { id, kind: ItemKind::Lettuce { chop_progress } })) => {
                    if chop_progress < state.config.chop_count {
                        let progress = chop_progress + 1;
                        state.cutboards[idx].item = Some(Item { id, kind: ItemKind::Lettuce { chop_progress: progress } });
                        emit(EventKind::Chop {
                            lettuce: id,
                            cutboard: target,
                            progress,
                            done: progress == state.config.chop_count,
                        });
                    } else {
                        let item = on_board.expect("lettuce");
                        state.cutboards[idx].item = None;
                        state.chef_mut(player).held = Some(item);
                        emit(EventKind::PickUp { item: id, what: item.tag(), from: place });
                    }
                }
                (Some(Item { id, kind: ItemKind::Plate { contents } }), Some(lettuce))
                    if state.is_chopped(&lettuce) && !contents.lettuce =>
                {
                    let contents = contents.with(Ingredient::Lettuce);
                    state.cutboards[idx].item = None;
                    state.chef_mut(player).held = Some(Item { id, kind: ItemKind::Plate { contents } });
                    emit(EventKind::Assemble {
                        plate: id,
                        ingredient: Ingredient::Lettuce,
                        ingredient_item: lettuce.id,
                        from: place,
                        plate_held: true,
                        contents,
                    });
                }
                _ => {}
            }
        }
    }
    out
}

/// If exactly one of `a`, `b` is a plate and the other a usable ingredient the
/// plate still lacks, returns the plate and that ingredient.
fn combine(state: &GameState, a: &Item, b: &Item) -> Option<(Item, Ingredient)> {
    let usable = |item: &Item| match item.kind {
        ItemKind::Bread => Some(Ingredient::Bread),
        ItemKind::Lettuce { .. } if state.is_chopped(item) => Some(Ingredient::Lettuce),
        ItemKind::Beef { cook: CookState::WellDone { .. } } => Some(Ingredient::Beef),
        _ => None,
    };
    let (plate, other) = match (a.plate_contents(), b.plate_contents()) {
        (Some(_), None) => (a, b),
        (None, Some(_)) => (b, a),
        _ => return None,
    };
    let ingredient = usable(other)?;
    let contents = plate.plate_contents()?;
    (!contents.has(ingredient)).then_some((*plate, ingredient))
}

fn schedule_replacement(state: &mut GameState) {
    if state.config.orders.scripted.is_empty() {
        let due = state.tick + state.config.orders.replacement_gap;
        state.pending_spawns.push(due);
    }
}

pub(crate) fn spawn_scripted(state: &mut GameState, events: &mut Vec<EnvEvent>) {
    while let Some(o) = state.config.orders.scripted.get(state.scripted_cursor).cloned() {
        if o.tick > state.tick {
            break;
        }
        state.scripted_cursor += 1;
        state.spawn_order(o.kind, o.lifetime, events);
    }
}

/// World timers for the current tick: cooking, fire, order deadlines and
/// order arrivals. Called once per tick by [`step`].
pub fn advance_world(state: &mut GameState) -> Vec<EnvEvent> {
    let tick = state.tick;
    let mut events = Vec::new();
    let world = |kind| EnvEvent { tick, actor: Actor::World, kind };
    let cook_ticks = state.config.cook_ticks;
    let fire_delay = state.config.fire_delay_ticks;

    for pan in &mut state.pans {
        if pan.on_fire {
            if pan.last_extinguish_tick != Some(tick) {
                pan.extinguish_progress = 0;
            }
            continue;
        }
        let Some(beef) = pan.beef.as_mut() else { continue };
        let ItemKind::Beef { cook } = &mut beef.kind else { continue };
        match *cook {
            CookState::Cooking { ticks } => {
                let ticks = ticks + 1;
                if ticks >= cook_ticks {
                    *cook = CookState::WellDone { ticks_since_done: 0 };
                    events.push(world(EventKind::BeefDone { beef: beef.id, pan: pan.cell }));
                } else {
                    *cook = CookState::Cooking { ticks };
                }
            }
            CookState::WellDone { ticks_since_done } => {
                let t = ticks_since_done + 1;
                if t >= fire_delay {
                    *cook = CookState::Overcooked;
                    pan.on_fire = true;
                    pan.extinguish_progress = 0;
                    pan.last_extinguish_tick = None;
                    events.push(world(EventKind::BeefOvercooked { beef: beef.id, pan: pan.cell }));
                    events.push(world(EventKind::PanFire { pan: pan.cell }));
                } else {
                    *cook = CookState::WellDone { ticks_since_done: t };
                }
            }
            CookState::Fresh | CookState::Overcooked => {}
        }
    }

    let (missed, kept): (Vec<_>, Vec<_>) = std::mem::take(&mut state.orders).into_iter().partition(|o| o.deadline_tick <= tick);
    state.orders = kept;
    for order in missed {
        state.score += MISSED_ORDER_PENALTY;
        events.push(world(EventKind::OrderMissed { order: order.id, burger: order.kind, reward: MISSED_ORDER_PENALTY }));
        schedule_replacement(state);
    }

    let policy = state.config.orders.clone();
    if !policy.scripted.is_empty() {
        spawn_scripted(state, &mut events);
        return events;
    }
    let due: Vec<u32> = state.pending_spawns.iter().copied().filter(|t| *t <= tick).collect();
    state.pending_spawns.retain(|t| *t > tick);
    for _ in due {
        if (state.orders.len() as u32) < policy.max_active {
            let kind = state.random_burger();
            state.spawn_order(kind, policy.lifetime, &mut events);
        }
    }
    let outstanding = state.orders.len() as u32 + state.pending_spawns.len() as u32;
    if policy.arrival_interval > 0 && tick > 0 && tick.is_multiple_of(policy.arrival_interval) && outstanding < policy.max_active {
        let kind = state.random_burger();
        state.spawn_order(kind, policy.lifetime, &mut events);
    }
    let outstanding = state.orders.len() as u32 + state.pending_spawns.len() as u32;
    for _ in outstanding..policy.min_active {
        state.pending_spawns.push(tick + policy.replacement_gap.max(1));
    }
    events
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{init_game, BurgerKind, Direction, GameConfig, Layout, Order, PlateContents};

    const PAN: Cell = Cell::new(5, 0);
    const SERVE: Cell = Cell::new(12, 3);
    const BOARD: Cell = Cell::new(6, 8);
    const CENTER: Cell = Cell::new(4, 4);

    fn quiet_config() -> GameConfig {
        let mut cfg = GameConfig::default();
        cfg.orders.initial_orders = 0;
        cfg.orders.min_active = 0;
        cfg.orders.arrival_interval = 0;
        cfg
    }

    fn kitchen() -> GameState {
        init_game(&Layout::counter_circuit(), &quiet_config(), 7)
    }

    fn place(state: &mut GameState, p: Player, at: Cell, facing: Direction, held: Option<ItemKind>) {
        let item = held.map(|k| state.fresh_item(k));
        let chef = state.chef_mut(p);
        chef.position = at;
        chef.facing = facing;
        chef.held = item;
    }

    fn add_order(state: &mut GameState, kind: BurgerKind, deadline: u32) {
        let id = state.next_order_id;
        state.next_order_id += 1;
        state.orders.push(Order { id, kind, created_tick: state.tick, deadline_tick: deadline });
    }

    fn plate(bread: bool, lettuce: bool, beef: bool) -> ItemKind {
        ItemKind::Plate { contents: PlateContents { bread, lettuce, beef } }
    }

    #[test]
    fn correct_serve_scores_the_burger() {
        let mut s = kitchen();
        add_order(&mut s, BurgerKind::BeefBurger, 200);
        place(&mut s, Player::Human, SERVE.step(Direction::Left), Direction::Right, Some(plate(true, false, true)));
        let out = step(&s, ControlAction::Noop, ControlAction::Interact).unwrap();
        assert_eq!(out.reward_delta, 20);
        assert!(out.events.iter().any(|e| matches!(
            e.kind,
            EventKind::Serve { result: ServeResult::Correct(BurgerKind::BeefBurger), reward: 20, .. }
        ) && e.actor == Actor::Human));
        assert!(out.state.orders.is_empty());
    }

    #[test]
    fn wrong_serve_and_unmatched_kind_are_penalised() {
        let mut s = kitchen();
        add_order(&mut s, BurgerKind::BeefBurger, 200);
        place(&mut s, Player::Human, SERVE.step(Direction::Left), Direction::Right, Some(plate(true, false, false)));
        let out = step(&s, ControlAction::Noop, ControlAction::Interact).unwrap();
        assert_eq!(out.reward_delta, -10);
        assert!(out.events.iter().any(|e| matches!(e.kind, EventKind::Serve { result: ServeResult::Wrong, .. })));
        assert_eq!(out.state.orders.len(), 1);

        // A complete burger nobody ordered is also wrong.
        place(&mut s, Player::Human, SERVE.step(Direction::Left), Direction::Right, Some(plate(true, true, false)));
        assert_eq!(step(&s, ControlAction::Noop, ControlAction::Interact).unwrap().reward_delta, -10);
    }

    #[test]
    fn serve_fulfils_earliest_deadline_first() {
        let mut s = kitchen();
        add_order(&mut s, BurgerKind::LettuceBurger, 300);
        add_order(&mut s, BurgerKind::LettuceBurger, 120);
        place(&mut s, Player::Agent, SERVE.step(Direction::Left), Direction::Right, Some(plate(true, true, false)));
        let out = step(&s, ControlAction::Interact, ControlAction::Noop).unwrap();
        assert_eq!(out.state.orders.len(), 1);
        assert_eq!(out.state.orders[0].deadline_tick, 300);
    }

    #[test]
    fn quiescent_noop_only_advances_the_clock() {
        let s = kitchen();
        let out = step(&s, ControlAction::Noop, ControlAction::Noop).unwrap();
        assert_eq!(out.reward_delta, 0);
        assert!(out.events.is_empty());
        let mut expected = s.clone();
        expected.tick += 1;
        assert_eq!(out.state, expected);
    }

    #[test]
    fn missed_deadline_costs_ten() {
        let mut s = kitchen();
        add_order(&mut s, BurgerKind::LettuceBurger, 1);
        let out = step(&s, ControlAction::Noop, ControlAction::Noop).unwrap();
        assert_eq!(out.reward_delta, 0);
        let out = step(&out.state, ControlAction::Noop, ControlAction::Noop).unwrap();
        assert_eq!(out.reward_delta, -10);
        assert!(matches!(out.events[0].kind, EventKind::OrderMissed { reward: -10, .. }));
    }

    #[test]
    fn fresh_beef_into_empty_pan_starts_cooking() {
        let mut s = kitchen();
        place(&mut s, Player::Agent, PAN.step(Direction::Down), Direction::Up, Some(ItemKind::Beef { cook: CookState::Fresh }));
        let out = step(&s, ControlAction::Interact, ControlAction::Noop).unwrap();
        assert!(matches!(out.events[0].kind, EventKind::StartCook { pan: PAN, .. }));
        assert!(out.state.pan(PAN).unwrap().beef.is_some());
        assert!(out.state.chef(Player::Agent).held.is_none());
    }

    #[test]
    fn bread_plate_picks_up_chopped_lettuce_from_counter() {
        let mut s = kitchen();
        let lettuce = s.fresh_item(ItemKind::Lettuce { chop_progress: 3 });
        s.counters.iter_mut().find(|c| c.cell == CENTER).unwrap().item = Some(lettuce);
        place(&mut s, Player::Agent, CENTER.step(Direction::Up), Direction::Down, Some(plate(true, false, false)));
        let out = step(&s, ControlAction::Interact, ControlAction::Noop).unwrap();
        match &out.events[0].kind {
            EventKind::Assemble { ingredient, plate_held, contents, ingredient_item, .. } => {
                assert_eq!(*ingredient, Ingredient::Lettuce);
                assert!(*plate_held);
                assert_eq!(*contents, PlateContents { bread: true, lettuce: true, beef: false });
                assert_eq!(*ingredient_item, lettuce.id);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(out.state.counter(CENTER).unwrap().item.is_none());
    }

    #[test]
    fn raw_lettuce_cannot_go_on_a_plate() {
        let mut s = kitchen();
        let lettuce = s.fresh_item(ItemKind::Lettuce { chop_progress: 1 });
        s.counters.iter_mut().find(|c| c.cell == CENTER).unwrap().item = Some(lettuce);
        place(&mut s, Player::Agent, CENTER.step(Direction::Up), Direction::Down, Some(plate(true, false, false)));
        assert!(step(&s, ControlAction::Interact, ControlAction::Noop).unwrap().events.is_empty());
    }

    #[test]
    fn empty_hands_at_empty_counter_do_nothing() {
        let mut s = kitchen();
        place(&mut s, Player::Agent, CENTER.step(Direction::Up), Direction::Down, None);
        let mut probe = s.clone();
        assert!(interact_outcome(&mut probe, Player::Agent).is_empty());
        assert_eq!(probe, s);
    }

    #[test]
    fn chopping_takes_the_configured_number_of_interacts() {
        let mut s = kitchen();
        place(&mut s, Player::Human, BOARD.step(Direction::Up), Direction::Down, Some(ItemKind::Lettuce { chop_progress: 0 }));
        let mut out = step(&s, ControlAction::Noop, ControlAction::Interact).unwrap();
        let mut chops = Vec::new();
        for _ in 0..3 {
            out = step(&out.state, ControlAction::Noop, ControlAction::Interact).unwrap();
            chops.extend(out.events.iter().filter_map(|e| match e.kind {
                EventKind::Chop { progress, done, .. } => Some((progress, done)),
                _ => None,
            }));
        }
        assert_eq!(chops, [(1, false), (2, false), (3, true)]);
        // Next interact picks the chopped lettuce up.
        out = step(&out.state, ControlAction::Noop, ControlAction::Interact).unwrap();
        assert!(out.state.chef(Player::Human).held.is_some());
    }

    #[test]
    fn empty_pan_is_silent_for_a_hundred_ticks() {
        let mut s = kitchen();
        for _ in 0..100 {
            let out = step(&s, ControlAction::Noop, ControlAction::Noop).unwrap();
            assert!(out.events.is_empty());
            s = out.state;
        }
    }

    #[test]
    fn unattended_well_done_beef_catches_fire_then_can_be_extinguished_and_cleared() {
        let cfg = quiet_config();
        let mut s = kitchen();
        place(&mut s, Player::Agent, PAN.step(Direction::Down), Direction::Up, Some(ItemKind::Beef { cook: CookState::Fresh }));
        let mut events = Vec::new();
        let mut out = step(&s, ControlAction::Interact, ControlAction::Noop).unwrap();
        events.extend(out.events.clone());
        let mut fire_tick = None;
        while fire_tick.is_none() {
            out = step(&out.state, ControlAction::Noop, ControlAction::Noop).unwrap();
            if out.events.iter().any(|e| matches!(e.kind, EventKind::PanFire { .. })) {
                fire_tick = Some(out.events[0].tick);
            }
            events.extend(out.events.clone());
        }
        let done_tick = events.iter().find(|e| matches!(e.kind, EventKind::BeefDone { .. })).unwrap().tick;
        assert_eq!(done_tick, cfg.cook_ticks - 1);
        assert_eq!(fire_tick.unwrap() - done_tick, cfg.fire_delay_ticks);

        // Extinguish: continuous interacts with the extinguisher.
        let mut st = out.state;
        place(&mut st, Player::Agent, PAN.step(Direction::Down), Direction::Up, Some(ItemKind::FireExtinguisher));
        let mut extinguished_after = None;
        for i in 1..=cfg.extinguish_ticks {
            let o = step(&st, ControlAction::Interact, ControlAction::Noop).unwrap();
            if o.events.iter().any(|e| matches!(e.kind, EventKind::FireExtinguished { .. })) {
                extinguished_after = Some(i);
            }
            st = o.state;
        }
        assert_eq!(extinguished_after, Some(cfg.extinguish_ticks));
        let pan = st.pan(PAN).unwrap();
        assert!(!pan.on_fire);
        assert_eq!(pan.cook_state(), Some(CookState::Overcooked));

        // The overcooked beef leaves on an empty plate; the pan cooks again.
        place(&mut st, Player::Agent, PAN.step(Direction::Down), Direction::Up, Some(plate(false, false, false)));
        let o = step(&st, ControlAction::Interact, ControlAction::Noop).unwrap();
        assert!(matches!(o.events[0].kind, EventKind::ClearPan { .. }));
        assert_eq!(o.state.chef(Player::Agent).held.unwrap().kind, ItemKind::SpoiledPlate);
        let mut st = o.state;
        place(&mut st, Player::Agent, PAN.step(Direction::Down), Direction::Up, Some(ItemKind::Beef { cook: CookState::Fresh }));
        let o = step(&st, ControlAction::Interact, ControlAction::Noop).unwrap();
        assert!(matches!(o.events[0].kind, EventKind::StartCook { .. }));
    }

    #[test]
    fn interrupted_extinguishing_restarts() {
        let mut s = kitchen();
        let beef = s.fresh_item(ItemKind::Beef { cook: CookState::Overcooked });
        let pan = s.pans.iter_mut().find(|p| p.cell == PAN).unwrap();
        pan.beef = Some(beef);
        pan.on_fire = true;
        place(&mut s, Player::Agent, PAN.step(Direction::Down), Direction::Up, Some(ItemKind::FireExtinguisher));
        for _ in 0..5 {
            s = step(&s, ControlAction::Interact, ControlAction::Noop).unwrap().state;
        }
        assert_eq!(s.pan(PAN).unwrap().extinguish_progress, 5);
        s = step(&s, ControlAction::Noop, ControlAction::Noop).unwrap().state;
        assert_eq!(s.pan(PAN).unwrap().extinguish_progress, 0);
    }

    #[test]
    fn simultaneous_moves_into_one_cell_block_both() {
        let mut s = kitchen();
        place(&mut s, Player::Agent, Cell::new(5, 2), Direction::Up, None);
        place(&mut s, Player::Human, Cell::new(7, 2), Direction::Up, None);
        let out = step(&s, ControlAction::Right, ControlAction::Left).unwrap();
        assert_eq!(out.state.chef(Player::Agent).position, Cell::new(5, 2));
        assert_eq!(out.state.chef(Player::Human).position, Cell::new(7, 2));
        assert_eq!(out.state.chef(Player::Agent).facing, Direction::Right);

        // Swapping is blocked; following a leaving chef is allowed.
        place(&mut s, Player::Human, Cell::new(6, 2), Direction::Up, None);
        let out = step(&s, ControlAction::Right, ControlAction::Left).unwrap();
        assert_eq!(out.state.chef(Player::Agent).position, Cell::new(5, 2));
        let out = step(&s, ControlAction::Right, ControlAction::Right).unwrap();
        assert_eq!(out.state.chef(Player::Agent).position, Cell::new(6, 2));
        assert_eq!(out.state.chef(Player::Human).position, Cell::new(7, 2));
    }

    #[test]
    fn blocked_move_only_turns() {
        let mut s = kitchen();
        place(&mut s, Player::Agent, Cell::new(1, 1), Direction::Down, None);
        let out = step(&s, ControlAction::Left, ControlAction::Noop).unwrap();
        assert_eq!(out.state.chef(Player::Agent).position, Cell::new(1, 1));
        assert_eq!(out.state.chef(Player::Agent).facing, Direction::Left);
    }

    #[test]
    fn stepping_a_finished_episode_is_rejected() {
        let mut s = kitchen();
        s.tick = 500;
        assert_eq!(step(&s, ControlAction::Noop, ControlAction::Noop).unwrap_err(), StepError::Finished(500));
    }

    #[test]
    fn agent_interact_resolves_first_on_shared_object() {
        // Both chefs face the same counter holding bread; the agent gets it.
        let mut s = kitchen();
        let bread = s.fresh_item(ItemKind::Bread);
        let cell = Cell::new(6, 4);
        s.counters.iter_mut().find(|c| c.cell == cell).unwrap().item = Some(bread);
        place(&mut s, Player::Agent, cell.step(Direction::Up), Direction::Down, None);
        place(&mut s, Player::Human, cell.step(Direction::Down), Direction::Up, None);
        let out = step(&s, ControlAction::Interact, ControlAction::Interact).unwrap();
        assert_eq!(out.state.chef(Player::Agent).held.map(|i| i.id), Some(bread.id));
        assert!(out.state.chef(Player::Human).held.is_none());
    }

    #[test]
    fn random_orders_keep_at_least_the_minimum_outstanding() {
        let mut s = init_game(&Layout::counter_circuit(), &GameConfig::default(), 3);
        for _ in 0..500 {
            s = step(&s, ControlAction::Noop, ControlAction::Noop).unwrap().state;
            let outstanding = s.orders.len() + s.pending_spawns.len();
            assert!(outstanding >= 2, "tick {}", s.tick);
            assert!(s.orders.len() <= 4);
        }
    }
}
