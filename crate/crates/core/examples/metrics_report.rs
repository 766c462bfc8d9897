//! Metrics for a scripted episode: score, contribution rate, failures and
//! message counts.
//!
//! Run with a script path or it uses the bundled ledger fixture.

use coop_kitchen::agent::CommCondition;
use coop_kitchen::metrics::{compute_report, MetricsReport};
use coop_kitchen::session::{run_with, AgentSide, Script, ScriptedHuman, SessionConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/reward_ledger.script").to_owned());
    let script = Script::parse(&std::fs::read_to_string(&path)?)?;

    let mut cfg = SessionConfig::new(CommCondition::BiComm, false, script.seed.unwrap_or(0));
    cfg.game.orders.scripted = script.orders.clone();
    let (log, _) = run_with(&cfg, AgentSide::Script(script.agent.clone()), &mut ScriptedHuman::new(script.human.clone()))?;

    let report = compute_report(&log)?;
    println!("{}", report.to_json());
    println!("{}\n{}", MetricsReport::CSV_HEADER, report.csv_row());
    Ok(())
}
