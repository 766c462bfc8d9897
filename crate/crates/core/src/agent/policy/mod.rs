//! Macro-level decision making and its execution.
//!
//! Each tick [`Controller::act`] settles on one macro action (from a policy
//! snippet, a human-message handler or the rule-based FSM) and asks the
//! [`Executor`] for the single control action that advances it.

pub mod dsl;
pub mod executor;
pub mod fsm;
pub mod macros;
pub mod path;
pub mod reflect;
pub mod snippets;
pub mod world;

use serde::{Deserialize, Serialize};

pub use dsl::Cond;
pub use executor::{ExecStatus, Executor};
pub use fsm::{fsm_decide, FsmContext, FsmState};
pub use macros::{MacroAction, MacroSource, PassTarget, PrepareTarget, Verb};
pub use path::{plan_path, PathError};
pub use reflect::BehaviorGuideline;
pub use snippets::{parse_snippet_reply, OrderPriority, PolicySnippet, PriorityTarget, SnippetBatch};

use crate::env::{BurgerKind, ControlAction, GameState, PlateContents, Player};
use crate::history::HumanMessage;

/// First live snippet (issue order) whose condition holds, removed from the
/// list; otherwise the FSM's choice.
pub fn select_macro(
    state: &GameState,
    fsm: FsmState,
    snippets: &mut Vec<PolicySnippet>,
    priority: Option<&OrderPriority>,
    me: Player,
) -> (MacroAction, FsmState, Option<u32>) {
    snippets.retain(|s| s.is_live(state.tick));
    if let Some(i) = snippets.iter().position(|s| s.condition.eval(state)) {
        let s = snippets.remove(i);
        return (MacroAction::new(s.verb, state.tick, MacroSource::Snippet), fsm, Some(s.expires_tick));
    }
    let (verb, fsm) = fsm_decide(state, fsm, priority, me);
    (MacroAction::new(verb, state.tick, MacroSource::Fsm), fsm, None)
}

/// Macro requested by a human message, if the template asks for one.
pub fn handle_human_message(state: &GameState, msg: &HumanMessage, priority: Option<&OrderPriority>) -> Option<Verb> {
    Some(match msg.template_id {
        1 => Verb::PassOn(PassTarget::Bread),
        2 => Verb::Prepare(PrepareTarget::Beef),
        3 => Verb::Prepare(PrepareTarget::Lettuce),
        4 => Verb::PassOn(PassTarget::Plate),
        5 => Verb::Assemble(BurgerKind::LettuceBurger),
        6 => Verb::Assemble(BurgerKind::BeefBurger),
        7 => Verb::Assemble(BurgerKind::BeefLettuceBurger),
        8 => Verb::PutoutFire,
        9 => {
            let with_beef = PlateContents::EMPTY.with(crate::env::Ingredient::Beef);
            Verb::Assemble(world::best_kind_for(state, priority, with_beef).unwrap_or(BurgerKind::BeefBurger))
        }
        _ => return None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActiveMacro {
    pub action: MacroAction,
    /// Snippet macros stop at their snippet's expiry.
    pub expires_tick: Option<u32>,
}

/// Per-chef decision state: snippets, priority, FSM context and the running macro.
#[derive(Debug, Clone)]
pub struct Controller {
    pub me: Player,
    pub fsm: FsmState,
    pub snippets: Vec<PolicySnippet>,
    pub priority: Option<OrderPriority>,
    pub current: Option<ActiveMacro>,
    executor: Executor,
}

impl Controller {
    pub fn new(me: Player) -> Self {
        Self { me, fsm: FsmState::default(), snippets: Vec::new(), priority: None, current: None, executor: Executor::default() }
    }

    pub fn add_snippets(&mut self, batch: SnippetBatch) {
        self.snippets.extend(batch.snippets);
        if batch.priority.is_some() {
            self.priority = batch.priority;
        }
    }

    /// Starts a handler macro, replacing whatever ran before.
    pub fn on_human_message(&mut self, state: &GameState, msg: &HumanMessage) {
        if let Some(verb) = handle_human_message(state, msg, self.priority.as_ref()) {
            self.start(MacroAction::new(verb, state.tick, MacroSource::HumanMessageHandler), None);
        }
    }

    fn start(&mut self, action: MacroAction, expires_tick: Option<u32>) {
        self.current = Some(ActiveMacro { action, expires_tick });
        self.executor.reset();
    }

    fn choose(&mut self, state: &GameState) {
        let tick = state.tick;
        self.snippets.retain(|s| s.is_live(tick));
        if self.priority.is_some_and(|p| !p.is_live(state)) {
            self.priority = None;
        }
        let fire = world::burning_pans(state).next().is_some();
        if let Some(cur) = self.current {
            let keep = match cur.action.source {
                MacroSource::Snippet => cur.expires_tick.is_none_or(|t| tick < t),
                MacroSource::HumanMessageHandler => !fire || cur.action.verb == Verb::PutoutFire,
                MacroSource::Fsm => false,
            };
            if keep {
                return;
            }
            if cur.action.source != MacroSource::Fsm {
                self.current = None;
            }
        }
        let (action, fsm, expires) = select_macro(state, self.fsm, &mut self.snippets, self.priority.as_ref(), self.me);
        self.fsm = fsm;
        let same = self.current.is_some_and(|c| c.action.source == MacroSource::Fsm && c.action.verb == action.verb);
        if !same {
            self.start(action, expires);
        }
    }

    /// Exactly one control action for this tick.
    pub fn act(&mut self, state: &GameState) -> ControlAction {
        // A macro that finishes before acting hands over within the same tick.
        for _ in 0..3 {
            self.choose(state);
            let Some(cur) = self.current else { break };
            let (action, status) = self.executor.step(state, self.me, &cur.action);
            match status {
                ExecStatus::InProgress => return action,
                ExecStatus::Completed if cur.action.verb == Verb::Idle => {
                    self.current = None;
                    return action;
                }
                ExecStatus::Completed | ExecStatus::Abandoned(_) => {
                    log::trace!("{} macro {} ended: {status:?}", self.me, cur.action.verb);
                    self.current = None;
                }
            }
        }
        ControlAction::Noop
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{init_game, GameConfig, Item, ItemId, ItemKind, Layout, OrderPolicy, ScriptedOrder};

    fn state(orders: &[BurgerKind]) -> GameState {
        let cfg = GameConfig {
            orders: OrderPolicy {
                scripted: orders.iter().map(|k| ScriptedOrder { tick: 0, kind: *k, lifetime: 60 }).collect(),
                ..OrderPolicy::default()
            },
            ..GameConfig::default()
        };
        init_game(&Layout::counter_circuit(), &cfg, 9)
    }

    fn snippet(cond: &str, verb: Verb, tick: u32) -> PolicySnippet {
        PolicySnippet::new(cond, verb, tick, 25).unwrap()
    }

    #[test]
    fn satisfied_snippet_overrides_the_fsm() {
        let s = state(&[BurgerKind::BeefBurger]);
        let fsm_choice = fsm_decide(&s, FsmState::default(), None, Player::Agent).0;
        let mut snippets = vec![snippet("order(BeefBurger)", Verb::PassOn(PassTarget::Plate), 0)];
        let (m, _, exp) = select_macro(&s, FsmState::default(), &mut snippets, None, Player::Agent);
        assert_ne!(fsm_choice, m.verb);
        assert_eq!(m.verb, Verb::PassOn(PassTarget::Plate));
        assert_eq!(m.source, MacroSource::Snippet);
        assert_eq!(exp, Some(25));
        assert!(snippets.is_empty(), "a chosen snippet fires once");
    }

    #[test]
    fn expired_snippet_never_fires() {
        let mut s = state(&[BurgerKind::BeefBurger]);
        s.tick = 25;
        let mut snippets = vec![snippet("true", Verb::PutoutFire, 0)];
        let (m, _, _) = select_macro(&s, FsmState::default(), &mut snippets, None, Player::Agent);
        assert_eq!(m.source, MacroSource::Fsm);
        assert!(snippets.is_empty());
    }

    #[test]
    fn earlier_snippet_wins_ties() {
        let s = state(&[BurgerKind::BeefBurger]);
        let mut snippets = vec![snippet("true", Verb::Prepare(PrepareTarget::Bread), 0), snippet("true", Verb::Idle, 0)];
        let (m, _, _) = select_macro(&s, FsmState::default(), &mut snippets, None, Player::Agent);
        assert_eq!(m.verb, Verb::Prepare(PrepareTarget::Bread));
        assert_eq!(snippets.len(), 1);
    }

    #[test]
    fn vanished_order_condition_is_false() {
        let mut s = state(&[BurgerKind::LettuceBurger]);
        s.orders.clear();
        let mut snippets = vec![snippet("order_id(1) or order(LettuceBurger)", Verb::PutoutFire, 0)];
        let (m, _, _) = select_macro(&s, FsmState::default(), &mut snippets, None, Player::Agent);
        assert_eq!(m.source, MacroSource::Fsm);
        assert_eq!(snippets.len(), 1, "unsatisfied snippets stay queued");
    }

    #[test]
    fn snippet_macro_stops_at_expiry() {
        let mut s = state(&[BurgerKind::BeefBurger]);
        let mut c = Controller::new(Player::Agent);
        c.snippets.push(snippet("true", Verb::Prepare(PrepareTarget::Lettuce), 0));
        c.act(&s);
        assert_eq!(c.current.unwrap().action.source, MacroSource::Snippet);
        s.tick = 25;
        c.act(&s);
        assert_eq!(c.current.unwrap().action.source, MacroSource::Fsm);
    }

    #[test]
    fn fire_preempts_handler_macros() {
        let mut s = state(&[BurgerKind::BeefBurger]);
        let mut c = Controller::new(Player::Agent);
        c.on_human_message(&s, &HumanMessage::new(0, 1).unwrap());
        c.act(&s);
        assert_eq!(c.current.unwrap().action.verb, Verb::PassOn(PassTarget::Bread));
        s.pans[0].on_fire = true;
        s.pans[0].beef = Some(Item { id: ItemId(77), kind: ItemKind::Beef { cook: crate::env::CookState::Overcooked } });
        c.act(&s);
        assert_eq!(c.current.unwrap().action.verb, Verb::PutoutFire);
    }

    #[test]
    fn handler_mapping() {
        let s = state(&[BurgerKind::BeefLettuceBurger]);
        let verb = |id| handle_human_message(&s, &HumanMessage::new(0, id).unwrap(), None);
        assert_eq!(verb(2), Some(Verb::Prepare(PrepareTarget::Beef)));
        assert_eq!(verb(8), Some(Verb::PutoutFire));
        assert_eq!(verb(9), Some(Verb::Assemble(BurgerKind::BeefLettuceBurger)));
        assert_eq!(verb(10), None);
        assert_eq!(verb(11), None);
    }
}
