//! A script written by hand: both chefs are driven, no model calls.

use coop_kitchen::session::{run_with, AgentSide, Script, ScriptedHuman, SessionConfig};

const SCRIPT: &str = "
seed 3
order 0 LettuceBurger 300
0 human left x2        # toward the lettuce side
2 human down
5 human say 3
0 agent right x4
4 agent say Grabbing plates
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let script = Script::parse(SCRIPT)?;
    let mut cfg = SessionConfig { seed: script.seed.unwrap(), ..SessionConfig::default() };
    cfg.game.orders.scripted = script.orders.clone();
    let (log, _) = run_with(&cfg, AgentSide::Script(script.agent.clone()), &mut ScriptedHuman::new(script.human.clone()))?;
    for r in log.history().filter(|r| r.agent_message.is_some() || r.human_message.is_some()) {
        println!("t{} {:?} {:?}", r.tick, r.human_message.as_ref().map(|m| &m.text), r.agent_message.as_ref().map(|m| &m.text));
    }
    println!("missed orders cost {}", log.footer.final_score);
    println!("canonical form:\n{}", script.to_text());
    Ok(())
}
