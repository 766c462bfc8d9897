//! Writes tick-exact [`Script`]s from per-chef task lists.
//!
//! Each chef gets a queue of tasks ("use the pan at (5,0)", "wait until
//! tick 40"). The author plays the game forward, routing each chef with the
//! path planner, and records the control actions it pressed. The result is
//! an ordinary script that replays the same episode.
//!
//! ```
//! use coop_kitchen::env::{BurgerKind, Cell, GameConfig, Layout, Player, ScriptedOrder};
//! use coop_kitchen::session::author::ScriptAuthor;
//!
//! let mut cfg = GameConfig::default();
//! cfg.orders.scripted = vec![ScriptedOrder { tick: 0, kind: BurgerKind::BeefBurger, lifetime: 600 }];
//! let mut a = ScriptAuthor::new(&Layout::counter_circuit(), &cfg, 1);
//! a.chef(Player::Human).use_cell(Cell::new(0, 4)).use_cell(Cell::new(5, 0));
//! let script = a.run().unwrap();
//! assert!(!script.human.actions.is_empty());
//! ```

use std::collections::VecDeque;

use thiserror::Error;

use super::script::Script;
use crate::agent::policy::path::{plan_path, press};
use crate::env::{init_game, step_in_place, Cell, ControlAction, GameConfig, GameState, Layout, Player, StepError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Task {
    /// Walk next to the cell, face it and interact until `times`
    /// interacts have had an effect. Interacts that change nothing (a pan
    /// still cooking, say) are repeated.
    Use { cell: Cell, times: u32 },
    WaitUntil(u32),
    /// A message this tick: template id for the human, text for the agent.
    Say(String),
}

#[derive(Debug, Error)]
pub enum AuthorError {
    #[error("{who} cannot reach {cell:?} (stuck since tick {since})")]
    Stuck { who: Player, cell: Cell, since: u32 },
    #[error("episode ended with tasks left for {0}")]
    OutOfTime(Player),
    #[error(transparent)]
    Step(#[from] StepError),
}

/// Ticks a chef may stand still (blocked, or interacting to no effect)
/// before authoring fails.
const STUCK_LIMIT: u32 = 60;

pub struct ScriptAuthor {
    state: GameState,
    seed: u64,
    tasks: [VecDeque<Task>; 2],
    waiting: [Option<u32>; 2],
    interacting: [bool; 2],
    script: Script,
}

pub struct ChefPlan<'a> {
    queue: &'a mut VecDeque<Task>,
}

impl ChefPlan<'_> {
    pub fn use_cell(self, cell: Cell) -> Self {
        self.use_times(cell, 1)
    }

    pub fn use_times(self, cell: Cell, times: u32) -> Self {
        self.queue.push_back(Task::Use { cell, times });
        self
    }

    pub fn wait_until(self, tick: u32) -> Self {
        self.queue.push_back(Task::WaitUntil(tick));
        self
    }

    pub fn say(self, what: impl Into<String>) -> Self {
        self.queue.push_back(Task::Say(what.into()));
        self
    }
}

fn slot(p: Player) -> usize {
    match p {
        Player::Agent => 0,
        Player::Human => 1,
    }
}

impl ScriptAuthor {
    pub fn new(layout: &Layout, config: &GameConfig, seed: u64) -> Self {
        let script = Script { seed: Some(seed), orders: config.orders.scripted.clone(), ..Script::default() };
        Self { state: init_game(layout, config, seed), seed, tasks: Default::default(), waiting: [None; 2], interacting: [false; 2], script }
    }

    pub fn chef(&mut self, p: Player) -> ChefPlan<'_> {
        ChefPlan { queue: &mut self.tasks[slot(p)] }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Game state after the last authored tick.
    pub fn state(&self) -> &GameState {
        &self.state
    }

    /// Plays both task lists to the end and returns the script.
    pub fn run(mut self) -> Result<Script, AuthorError> {
        while self.tasks.iter().any(|q| !q.is_empty()) {
            if self.state.tick >= self.state.config.episode_ticks {
                let who = if self.tasks[0].is_empty() { Player::Human } else { Player::Agent };
                return Err(AuthorError::OutOfTime(who));
            }
            // The human moves first; the agent then routes around both
            // the human and the cell the human is about to enter.
            let human = self.next_action(Player::Human, None)?;
            let h = self.state.chef(Player::Human);
            let human_next = human.direction().map(|d| press(&self.state.layout, &[], h.position, d).0);
            let agent = self.next_action(Player::Agent, human_next)?;
            let tick = self.state.tick;
            for (p, a) in [(Player::Agent, agent), (Player::Human, human)] {
                if a != ControlAction::Noop {
                    let chef = if p == Player::Agent { &mut self.script.agent } else { &mut self.script.human };
                    chef.actions.insert(tick, a);
                }
            }
            let events = step_in_place(&mut self.state, agent, human)?;
            for p in Player::BOTH {
                let i = slot(p);
                if std::mem::take(&mut self.interacting[i]) && events.iter().any(|e| e.actor.player() == Some(p)) {
                    self.waiting[i] = None;
                    if let Some(Task::Use { times, .. }) = self.tasks[i].front_mut() {
                        *times -= 1;
                        if *times == 0 {
                            self.tasks[i].pop_front();
                        }
                    }
                }
            }
        }
        Ok(self.script)
    }

    fn next_action(&mut self, me: Player, also_avoid: Option<Cell>) -> Result<ControlAction, AuthorError> {
        let tick = self.state.tick;
        let i = slot(me);
        loop {
            let Some(task) = self.tasks[i].front_mut() else { return Ok(ControlAction::Noop) };
            match task {
                Task::Use { times: 0, .. } => {
                    self.tasks[i].pop_front();
                }
                Task::WaitUntil(t) if tick < *t => return Ok(ControlAction::Noop),
                Task::WaitUntil(_) => {
                    self.tasks[i].pop_front();
                }
                Task::Say(text) => {
                    let chef = if me == Player::Agent { &mut self.script.agent } else { &mut self.script.human };
                    chef.says.insert(tick, std::mem::take(text));
                    self.tasks[i].pop_front();
                }
                Task::Use { cell, .. } => {
                    let cell = *cell;
                    let chef = self.state.chef(me);
                    let mut occupied = vec![self.state.chef(me.other()).position];
                    occupied.extend(also_avoid);
                    let path = plan_path(&self.state.layout, &occupied, chef.position, chef.facing, cell);
                    let action = match path.as_deref() {
                        Ok([d, ..]) => {
                            self.waiting[i] = None;
                            ControlAction::from_direction(*d)
                        }
                        Ok([]) => {
                            self.interacting[i] = true;
                            ControlAction::Interact
                        }
                        Err(_) => ControlAction::Noop,
                    };
                    if action.direction().is_none() {
                        let since = *self.waiting[i].get_or_insert(tick);
                        if tick - since > STUCK_LIMIT {
                            return Err(AuthorError::Stuck { who: me, cell, since });
                        }
                    }
                    return Ok(action);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::ItemKind;

    #[test]
    fn authored_script_replays_to_the_same_state() {
        let layout = Layout::counter_circuit();
        let cfg = GameConfig::default();
        let mut a = ScriptAuthor::new(&layout, &cfg, 3);
        a.chef(Player::Agent).use_cell(Cell::new(12, 6));
        a.chef(Player::Human).wait_until(4).say("1").use_cell(Cell::new(0, 2));
        let script = a.run().unwrap();
        assert_eq!(script.human.says.get(&4).map(String::as_str), Some("1"));

        let mut s = init_game(&layout, &cfg, 3);
        let end = script.agent.actions.keys().chain(script.human.actions.keys()).max().copied().unwrap();
        for t in 0..=end {
            step_in_place(&mut s, script.agent.action(t), script.human.action(t)).unwrap();
        }
        assert!(matches!(s.chef(Player::Agent).held.map(|i| i.kind), Some(ItemKind::Plate { .. })));
        assert_eq!(s.chef(Player::Human).held.map(|i| i.kind), Some(ItemKind::Bread));
    }
}
