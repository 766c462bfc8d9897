//! Requests go in at one tick and come back at a later one. The mock
//! backend answers from a fixed script.

use coop_kitchen::llm::{CompletionRequest, Gateway, MockReply, MockScript, Purpose};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let script = MockScript::new()
        .with_text(Purpose::Communication, "I'll take the beef.")
        .with(Purpose::CodeAsPolicy, vec![MockReply::text("[]"), MockReply::text("not json")]);
    let mut gw = Gateway::mock_with_latency(script, 3);

    gw.submit(CompletionRequest::new(Purpose::Communication, "say something", 10))?;
    gw.submit(CompletionRequest::new(Purpose::CodeAsPolicy, "write snippets", 10))?;
    // One in flight per purpose.
    assert!(gw.submit(CompletionRequest::new(Purpose::CodeAsPolicy, "again", 11)).is_err());

    for tick in 10..15 {
        for d in gw.poll(tick)? {
            println!("t{tick}: {} asked at t{} -> {:?}", d.purpose, d.request_tick, d.result.text());
        }
    }
    println!("{} completions recorded", gw.transcript().len());
    Ok(())
}
