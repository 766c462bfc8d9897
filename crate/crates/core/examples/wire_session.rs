//! The frames a browser would receive, without a socket.

use coop_kitchen::agent::CommCondition;
use coop_kitchen::env::ControlAction;
use coop_kitchen::session::server::{run_wire_session, Pace};
use coop_kitchen::session::wire::ServerFrame;
use coop_kitchen::session::{SessionConfig, WireHuman};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = SessionConfig::new(CommCondition::BiComm, false, 9);
    cfg.game.episode_ticks = 6;
    let human = WireHuman::default();
    human.key(ControlAction::Up);
    human.button(10);

    run_wire_session("demo", &cfg, human, Pace::Headless, |f| {
        let json = serde_json::to_string(&f).unwrap();
        match f {
            ServerFrame::StateFull { .. } => println!("{}...", &json[..120]),
            _ => println!("{json}"),
        }
    })?;
    Ok(())
}
