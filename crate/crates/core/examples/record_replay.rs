//! Record every model completion of an episode, then rerun the agent from
//! the transcript alone and compare log hashes.

use coop_kitchen::agent::CommCondition;
use coop_kitchen::llm::{Purpose, Transcript};
use coop_kitchen::prompts::PromptSet;
use coop_kitchen::session::{rerun_with_transcript, run_with, verify_log, AgentSide, NoisyTeammate, SessionConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("kitchen-record-replay");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("transcript.jsonl");
    let _ = std::fs::remove_file(&path);

    let mut cfg = SessionConfig::new(CommCondition::BiComm, true, 21);
    cfg.transcript = Some(path.clone());
    let agent = AgentSide::llm(cfg.agent_config(), PromptSet::builtin(), cfg.build_gateway()?);
    let (log, _) = run_with(&cfg, agent, &mut NoisyTeammate::new(21, 0.1, 0.03))?;

    let transcript = Transcript::load(&path)?;
    for p in Purpose::ALL {
        println!("{p:<14} {}", transcript.count(p));
    }

    let check = verify_log(&log)?;
    println!("state hashes: {} ticks ok = {}", check.ticks_verified, check.ok());

    let rerun = rerun_with_transcript(&log, transcript)?;
    println!("original {}\nrerun    {}", log.content_hash(), rerun.content_hash());
    assert_eq!(rerun.content_hash(), log.content_hash());
    Ok(())
}
