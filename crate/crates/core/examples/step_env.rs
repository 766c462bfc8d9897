//! Step the kitchen by hand and print what happened.

use coop_kitchen::env::{describe_state, init_game, step, ControlAction, GameConfig, Layout};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let layout = Layout::counter_circuit();
    let mut state = init_game(&layout, &GameConfig::default(), 7);
    print!("{}", layout.to_text());

    // Agent walks left to the bread crate and grabs a bun; human idles.
    let plan = [ControlAction::Down, ControlAction::Left, ControlAction::Left, ControlAction::Left, ControlAction::Interact];
    for a in plan {
        let out = step(&state, a, ControlAction::Noop)?;
        for e in &out.events {
            println!("t{:<3} {:?} {:?}", e.tick, e.actor, e.kind);
        }
        state = out.state;
    }
    println!("\n{}", describe_state(&state));
    Ok(())
}
