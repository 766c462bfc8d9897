//! Rule-based base policy.
//!
//! Rules are tried top to bottom and the first that applies picks the macro:
//!
//! 1. a pan is burning and the extinguisher is free (or in hand): `PutoutFire`
//! 2. overcooked beef blocks a pan: `PutoutFire` (it scrapes and bins it)
//! 3. the chef holds something: finish what that item is for
//! 4. a finished burger that matches an order sits on a counter: serve it
//! 5. well-done beef is waiting in a pan: assemble a beef burger with it
//! 6. lettuce sits half-chopped on a board nobody is working: chop it
//! 7. walk the active orders (priority directive first, then deadline) and
//!    cover each recipe from existing supply; the first shortfall that can
//!    be prepared is prepared, otherwise the first order whose ingredients
//!    are covered is assembled
//! 8. `Idle`
//!
//! The operating context follows the chosen verb and records when it was
//! entered.

use serde::{Deserialize, Serialize};

use super::macros::{PassTarget, PrepareTarget, Verb};
use super::snippets::OrderPriority;
use super::world;
use crate::env::{BurgerKind, GameState, ItemKind, PlateContents, Player};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FsmContext {
    Idle,
    FetchingIngredient,
    Cooking,
    Assembling,
    Delivering,
    Firefighting,
    Repositioning,
}

impl FsmContext {
    pub fn of(verb: Verb) -> FsmContext {
        match verb {
            Verb::Prepare(PrepareTarget::Beef) => FsmContext::Cooking,
            Verb::Prepare(_) => FsmContext::FetchingIngredient,
            Verb::Assemble(_) => FsmContext::Assembling,
            Verb::Serve(_) => FsmContext::Delivering,
            Verb::PassOn(_) => FsmContext::Repositioning,
            Verb::PutoutFire => FsmContext::Firefighting,
            Verb::Idle => FsmContext::Idle,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FsmState {
    pub current: FsmContext,
    pub entered_tick: u32,
}

impl Default for FsmState {
    fn default() -> Self {
        Self { current: FsmContext::Idle, entered_tick: 0 }
    }
}

impl FsmState {
    pub fn enter(self, verb: Verb, tick: u32) -> FsmState {
        let next = FsmContext::of(verb);
        if next == self.current {
            self
        } else {
            FsmState { current: next, entered_tick: tick }
        }
    }
}

pub fn fsm_decide(state: &GameState, fsm: FsmState, priority: Option<&OrderPriority>, me: Player) -> (Verb, FsmState) {
    let verb = decide(state, priority, me);
    (verb, fsm.enter(verb, state.tick))
}

fn decide(s: &GameState, priority: Option<&OrderPriority>, me: Player) -> Verb {
    let other = s.chef(me.other());
    let held = s.chef(me).held;
    let other_has_extinguisher = other.held.is_some_and(|i| i.kind == ItemKind::FireExtinguisher);
    let i_have_extinguisher = held.is_some_and(|i| i.kind == ItemKind::FireExtinguisher);
    let rack_stocked = s.extinguishers.iter().any(|r| r.stocked);

    if world::burning_pans(s).next().is_some() && (i_have_extinguisher || (!other_has_extinguisher && rack_stocked)) {
        return Verb::PutoutFire;
    }
    let other_clearing = other.held.is_some_and(|i| i.kind == ItemKind::SpoiledPlate) || other_has_extinguisher;
    if !world::overcooked_pans(s).is_empty() && !other_clearing {
        return Verb::PutoutFire;
    }

    if let Some(item) = held {
        match item.kind {
            ItemKind::FireExtinguisher | ItemKind::SpoiledPlate => return Verb::PutoutFire,
            ItemKind::Beef { .. } if world::free_pans(s).next().is_some() || world::well_done_pans(s).is_empty() => {
                return Verb::Prepare(PrepareTarget::Beef)
            }
            ItemKind::Beef { .. } => {}
            ItemKind::Lettuce { .. } if !s.is_chopped(&item) => return Verb::Prepare(PrepareTarget::Lettuce),
            ItemKind::Lettuce { .. } => {
                let with = PlateContents::EMPTY.with(crate::env::Ingredient::Lettuce);
                return Verb::Assemble(world::best_kind_for(s, priority, with).unwrap_or(BurgerKind::LettuceBurger));
            }
            ItemKind::Bread => {
                return match world::best_kind_for(s, priority, PlateContents::EMPTY) {
                    Some(k) => Verb::Assemble(k),
                    None => Verb::PassOn(PassTarget::Bread),
                };
            }
            ItemKind::Plate { contents } => {
                if let Some(k) = contents.burger().filter(|k| s.orders.iter().any(|o| o.kind == *k)) {
                    return Verb::Serve(k);
                }
                return match world::best_kind_for(s, priority, contents) {
                    Some(k) if contents != k.recipe() => Verb::Assemble(k),
                    _ => Verb::PassOn(PassTarget::Plate),
                };
            }
        }
    }

    // A finished burger on a counter goes out, unless the other chef is closer and free.
    let me_at = s.chef(me).position;
    let finished = world::counters_with(s, |i| {
        i.plate_contents().and_then(PlateContents::burger).is_some_and(|k| s.orders.iter().any(|o| o.kind == k))
    })
    .min_by_key(|(c, _)| c.manhattan(me_at));
    if let Some((cell, item)) = finished {
        let other_closer = other.held.is_none() && cell.manhattan(other.position) < cell.manhattan(me_at);
        if !other_closer {
            if let Some(k) = item.plate_contents().and_then(PlateContents::burger) {
                return Verb::Serve(k);
            }
        }
    }

    // Beef waiting in a pan, unless the other chef already carries a plate for it.
    let ready = world::well_done_pans(s).len();
    let other_plating =
        usize::from(other.held.and_then(|i| i.plate_contents()).is_some_and(|c| !c.beef));
    if ready > other_plating {
        let with_beef = PlateContents::EMPTY.with(crate::env::Ingredient::Beef);
        return Verb::Assemble(world::best_kind_for(s, priority, with_beef).unwrap_or(BurgerKind::BeefBurger));
    }

    if world::boards_with_lettuce(s).any(|(cell, _, chopped)| !chopped && !world::is_chopping(s, me.other(), cell)) {
        return Verb::Prepare(PrepareTarget::Lettuce);
    }

    allocate(s, priority, me).unwrap_or(Verb::Idle)
}

/// Rule 7: greedy supply allocation across ranked orders.
fn allocate(s: &GameState, priority: Option<&OrderPriority>, me: Player) -> Option<Verb> {
    // Raw ingredients lying on counters are not supply until someone picks them up.
    let on_counter = |loc: &crate::env::ItemLocation| matches!(loc, crate::env::ItemLocation::Counter(_));
    let mut beef = s
        .items()
        .filter(|(i, loc)| {
            matches!(i.kind, ItemKind::Beef { cook } if cook != crate::env::CookState::Overcooked) && !on_counter(loc)
        })
        .count();
    let mut lettuce = s
        .items()
        .filter(|(i, loc)| matches!(i.kind, ItemKind::Lettuce { .. }) && (s.is_chopped(i) || !on_counter(loc)))
        .count();
    // Plates (with who carries them), largest first so the best plate is claimed.
    let mut plates: Vec<(PlateContents, Option<Player>)> = s
        .items()
        .filter_map(|(i, loc)| {
            let holder = match loc {
                crate::env::ItemLocation::Held(p) => Some(p),
                _ => None,
            };
            i.plate_contents().map(|c| (c, holder))
        })
        .collect();
    plates.sort_by_key(|(c, _)| std::cmp::Reverse(c.count()));
    let pan_free = world::free_pans(s).next().is_some();
    let board_free = world::free_cutboards(s).next().is_some();

    let mut assemble = None;
    for order in world::ranked_orders(s, priority) {
        let recipe = order.kind.recipe();
        let claimed = plates.iter().position(|(c, _)| c.is_subset_of(recipe)).map(|i| plates.remove(i));
        let have = claimed.map_or(PlateContents::EMPTY, |(c, _)| c);
        let mut covered = true;
        if recipe.beef && !have.beef {
            if beef > 0 {
                beef -= 1;
            } else if pan_free {
                return Some(Verb::Prepare(PrepareTarget::Beef));
            } else {
                covered = false;
            }
        }
        if recipe.lettuce && !have.lettuce {
            if lettuce > 0 {
                lettuce -= 1;
            } else if board_free {
                return Some(Verb::Prepare(PrepareTarget::Lettuce));
            } else {
                covered = false;
            }
        }
        let other_assembling = claimed.is_some_and(|(_, holder)| holder == Some(me.other()));
        if covered && !other_assembling && assemble.is_none() {
            assemble = Some(Verb::Assemble(order.kind));
        }
    }
    assemble
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{init_game, GameConfig, Item, ItemId, Layout, OrderPolicy, ScriptedOrder};

    fn state(orders: &[BurgerKind]) -> GameState {
        let cfg = GameConfig {
            orders: OrderPolicy {
                scripted: orders.iter().map(|k| ScriptedOrder { tick: 0, kind: *k, lifetime: 200 }).collect(),
                ..OrderPolicy::default()
            },
            ..GameConfig::default()
        };
        init_game(&Layout::counter_circuit(), &cfg, 3)
    }

    fn decide0(s: &GameState) -> Verb {
        fsm_decide(s, FsmState::default(), None, Player::Agent).0
    }

    #[test]
    fn fire_comes_first() {
        let mut s = state(&[BurgerKind::BeefBurger]);
        s.pans[0].on_fire = true;
        s.pans[0].beef = Some(Item { id: ItemId(99), kind: ItemKind::Beef { cook: crate::env::CookState::Overcooked } });
        assert_eq!(decide0(&s), Verb::PutoutFire);
        let (_, fsm) = fsm_decide(&s, FsmState::default(), None, Player::Agent);
        assert_eq!(fsm.current, FsmContext::Firefighting);
    }

    #[test]
    fn fresh_beef_order_starts_cooking() {
        let s = state(&[BurgerKind::BeefBurger]);
        assert_eq!(decide0(&s), Verb::Prepare(PrepareTarget::Beef));
    }

    #[test]
    fn nothing_to_do_is_idle() {
        let mut s = state(&[]);
        s.orders.clear();
        assert_eq!(decide0(&s), Verb::Idle);
    }

    #[test]
    fn lettuce_order_without_beef_chops() {
        let s = state(&[BurgerKind::LettuceBurger]);
        assert_eq!(decide0(&s), Verb::Prepare(PrepareTarget::Lettuce));
    }

    #[test]
    fn cooking_beef_covers_the_order_so_assemble() {
        let mut s = state(&[BurgerKind::BeefBurger]);
        s.pans[0].beef = Some(Item { id: ItemId(50), kind: ItemKind::Beef { cook: crate::env::CookState::Cooking { ticks: 3 } } });
        assert_eq!(decide0(&s), Verb::Assemble(BurgerKind::BeefBurger));
    }

    #[test]
    fn held_burger_matching_an_order_is_served() {
        let mut s = state(&[BurgerKind::LettuceBurger]);
        let contents = BurgerKind::LettuceBurger.recipe();
        s.chefs[0].held = Some(Item { id: ItemId(70), kind: ItemKind::Plate { contents } });
        assert_eq!(decide0(&s), Verb::Serve(BurgerKind::LettuceBurger));
    }

    #[test]
    fn burger_left_on_a_counter_is_served() {
        let mut s = state(&[BurgerKind::BeefBurger]);
        let contents = BurgerKind::BeefBurger.recipe();
        let slot = s.counters.iter_mut().find(|c| c.cell == crate::env::Cell::new(4, 0)).unwrap();
        slot.item = Some(Item { id: ItemId(71), kind: ItemKind::Plate { contents } });
        assert_eq!(decide0(&s), Verb::Serve(BurgerKind::BeefBurger));
    }

    #[test]
    fn priority_directive_reorders() {
        let s = state(&[BurgerKind::LettuceBurger, BurgerKind::BeefBurger]);
        assert_eq!(decide0(&s), Verb::Prepare(PrepareTarget::Lettuce));
        let p = OrderPriority { target: super::super::snippets::PriorityTarget::Kind(BurgerKind::BeefBurger), issued_tick: 0 };
        assert_eq!(fsm_decide(&s, FsmState::default(), Some(&p), Player::Agent).0, Verb::Prepare(PrepareTarget::Beef));
    }

    #[test]
    fn same_state_same_decision() {
        let s = state(&[BurgerKind::BeefLettuceBurger, BurgerKind::LettuceBurger]);
        assert_eq!(decide0(&s), decide0(&s.clone()));
    }
}
