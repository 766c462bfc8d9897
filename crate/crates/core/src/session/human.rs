//! Sources of the human chef's input, one [`HumanInput`] per tick.

use std::collections::VecDeque;
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::episode::EpisodeLog;
use super::script::ChefScript;
use crate::agent::policy::Controller;
use crate::env::{ControlAction, GameState, Player};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HumanInput {
    pub action: ControlAction,
    /// Template id of a button pressed this tick.
    pub message: Option<u8>,
}

pub trait HumanSource {
    fn input(&mut self, state: &GameState) -> HumanInput;

    /// True once a remote player has left; the session then stops.
    fn disconnected(&self) -> bool {
        false
    }
}

/// Replays the human part of a [`ChefScript`].
#[derive(Debug, Clone)]
pub struct ScriptedHuman {
    script: ChefScript,
}

impl ScriptedHuman {
    pub fn new(script: ChefScript) -> Self {
        Self { script }
    }
}

impl HumanSource for ScriptedHuman {
    fn input(&mut self, state: &GameState) -> HumanInput {
        HumanInput {
            action: self.script.action(state.tick),
            message: self.script.says.get(&state.tick).and_then(|s| s.parse().ok()),
        }
    }
}

/// The fixed rule-based teammate: FSM only, no snippets, no messages.
#[derive(Debug, Clone)]
pub struct TeammateHuman {
    controller: Controller,
}

impl Default for TeammateHuman {
    fn default() -> Self {
        Self { controller: Controller::new(Player::Human) }
    }
}

impl HumanSource for TeammateHuman {
    fn input(&mut self, state: &GameState) -> HumanInput {
        HumanInput { action: self.controller.act(state), message: None }
    }
}

/// The teammate with seeded noise: random key presses and button clicks.
#[derive(Debug, Clone)]
pub struct NoisyTeammate {
    inner: TeammateHuman,
    rng: ChaCha8Rng,
    noise: f64,
    message_rate: f64,
}

impl NoisyTeammate {
    pub fn new(seed: u64, noise: f64, message_rate: f64) -> Self {
        Self { inner: TeammateHuman::default(), rng: ChaCha8Rng::seed_from_u64(seed), noise, message_rate }
    }
}

impl HumanSource for NoisyTeammate {
    fn input(&mut self, state: &GameState) -> HumanInput {
        let mut input = self.inner.input(state);
        if self.rng.random_bool(self.noise) {
            input.action = ControlAction::ALL[self.rng.random_range(0..ControlAction::ALL.len())];
        }
        if self.rng.random_bool(self.message_rate) {
            input.message = Some(self.rng.random_range(1..=11));
        }
        input
    }
}

/// Feeds back the human inputs recorded in a log.
#[derive(Debug, Clone)]
pub struct LoggedHuman {
    inputs: Vec<HumanInput>,
}

impl LoggedHuman {
    pub fn new(log: &EpisodeLog) -> Self {
        let inputs = log
            .history()
            .map(|r| HumanInput { action: r.human_action, message: r.human_message.as_ref().map(|m| m.template_id) })
            .collect();
        Self { inputs }
    }
}

impl HumanSource for LoggedHuman {
    fn input(&mut self, state: &GameState) -> HumanInput {
        self.inputs.get(state.tick as usize).copied().unwrap_or_default()
    }
}

#[derive(Debug, Default)]
struct Latch {
    action: Option<ControlAction>,
    messages: VecDeque<u8>,
    disconnected: bool,
}

/// Input written by a network client between ticks. The last key since the
/// previous tick wins; button presses queue and are taken one per tick.
#[derive(Debug, Clone, Default)]
pub struct WireHuman {
    latch: Arc<Mutex<Latch>>,
}

impl WireHuman {
    pub fn key(&self, action: ControlAction) {
        self.latch.lock().expect("latch").action = Some(action);
    }

    pub fn button(&self, template_id: u8) {
        self.latch.lock().expect("latch").messages.push_back(template_id);
    }

    pub fn disconnect(&self) {
        self.latch.lock().expect("latch").disconnected = true;
    }
}

impl HumanSource for WireHuman {
    fn input(&mut self, _state: &GameState) -> HumanInput {
        let mut l = self.latch.lock().expect("latch");
        HumanInput { action: l.action.take().unwrap_or_default(), message: l.messages.pop_front() }
    }

    fn disconnected(&self) -> bool {
        self.latch.lock().expect("latch").disconnected
    }
}
