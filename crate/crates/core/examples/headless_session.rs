//! Drive a session tick by tick from your own loop.

use coop_kitchen::agent::CommCondition;
use coop_kitchen::env::ControlAction;
use coop_kitchen::session::{HumanInput, Session, SessionConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = SessionConfig::new(CommCondition::BiComm, true, 5);
    let mut session = Session::new(&cfg)?;

    while !session.is_finished() {
        let t = session.state().tick;
        // A human who paces left and right and asks for beef now and then.
        let action = if t % 8 < 4 { ControlAction::Left } else { ControlAction::Right };
        let message = (t % 120 == 30).then_some(2);
        let rec = &session.tick(HumanInput { action, message })?.record;
        if let Some(m) = &rec.agent_message {
            println!("t{:<3} agent: {}", rec.tick, m.text);
        }
        if rec.reward_delta != 0 {
            println!("t{:<3} score {:+}", rec.tick, rec.reward_delta);
        }
    }
    let rejected = session.rejections();
    let log = session.finish();
    println!("final {}  ({} human messages refused)", log.footer.final_score, rejected.human_messages);
    Ok(())
}
