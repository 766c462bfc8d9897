#![allow(dead_code)]

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use coop_kitchen::agent::CommCondition;
use coop_kitchen::env::{ControlAction, EnvEvent};
use coop_kitchen::session::{run_with, AgentSide, ChefScript, EpisodeLog, Script, ScriptedHuman, SessionConfig};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn load_script(name: &str) -> Script {
    Script::parse(&fixture_text(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Both chefs driven by the script; the agent side never calls a model.
pub fn play_script(script: &Script) -> EpisodeLog {
    let mut cfg = SessionConfig::new(CommCondition::BiComm, false, script.seed.unwrap_or(0));
    cfg.game.orders.scripted = script.orders.clone();
    let agent = AgentSide::Script(script.agent.clone());
    run_with(&cfg, agent, &mut ScriptedHuman::new(script.human.clone())).expect("scripted session").0
}

pub fn events(log: &EpisodeLog) -> Vec<EnvEvent> {
    log.history().flat_map(|r| r.events.iter().cloned()).collect()
}

/// A random human: mostly moves and interacts, now and then a button.
pub fn random_human_script(seed: u64, ticks: u32) -> ChefScript {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut script = ChefScript::default();
    for t in 0..ticks {
        let a = ControlAction::ALL[rng.random_range(0..ControlAction::ALL.len())];
        if a != ControlAction::Noop {
            script.actions.insert(t, a);
        }
        if rng.random_bool(0.03) {
            script.says.insert(t, rng.random_range(1..=11u8).to_string());
        }
    }
    script
}
