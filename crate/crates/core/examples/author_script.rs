//! Write a tick-exact script from a task list, then play it back.

use coop_kitchen::env::{BurgerKind, Cell, GameConfig, Layout, Player, ScriptedOrder};
use coop_kitchen::session::author::ScriptAuthor;
use coop_kitchen::session::{run_with, AgentSide, ScriptedHuman, SessionConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut game = GameConfig::default();
    game.orders.scripted = vec![ScriptedOrder { tick: 0, kind: BurgerKind::BeefBurger, lifetime: 400 }];

    let (bread, beef, pan, plates, serve) = (Cell::new(0, 2), Cell::new(0, 4), Cell::new(5, 0), Cell::new(12, 6), Cell::new(12, 5));
    let counter = Cell::new(6, 4);
    let mut a = ScriptAuthor::new(&Layout::counter_circuit(), &game, 42);
    // Human drops a bun on the middle counter; the agent cooks, plates and serves.
    // A use that has no effect yet (beef still cooking) is retried.
    a.chef(Player::Human).use_cell(bread).use_cell(counter).say("6");
    a.chef(Player::Agent).use_cell(beef).use_cell(pan).say("Beef is on the pan").use_cell(plates);
    a.chef(Player::Agent).wait_until(24).use_cell(counter).use_cell(pan).use_cell(serve);
    let script = a.run()?;
    print!("{}", script.to_text().lines().take(12).map(|l| format!("{l}\n")).collect::<String>());
    println!("...");

    let mut cfg = SessionConfig::new(coop_kitchen::agent::CommCondition::BiComm, false, 42);
    cfg.game = game;
    let (log, _) = run_with(&cfg, AgentSide::Script(script.agent.clone()), &mut ScriptedHuman::new(script.human.clone()))?;
    println!("final score {}", log.footer.final_score);
    Ok(())
}
