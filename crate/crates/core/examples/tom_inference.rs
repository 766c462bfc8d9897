//! One belief update about the human, rendered and answered by the mock.

use coop_kitchen::agent::tom::{infer_belief, render_tom_prompt, ToMInput};
use coop_kitchen::agent::{CommCondition, ToMFlags};
use coop_kitchen::llm::{Gateway, MockScript, Purpose};
use coop_kitchen::prompts::PromptSet;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let prompts = PromptSet::builtin();
    let flags = ToMFlags::for_condition(true, CommCondition::HComm);
    let input = ToMInput { prompts: &prompts, history: &[], prev: None, flags, tick: 75, episode_ticks: 500, budget: 1500 };

    let prompt = render_tom_prompt(&input)?;
    println!("prompt is {} chars; ends with:\n...{}\n", prompt.len(), &prompt[prompt.len().saturating_sub(300)..]);

    let reply = "Tendency: chops lettuce first.\nConvention: leaves buns on the middle counter.\nPlan: a LettuceBurger.\nCoordination guide: cook beef and plate it.";
    let mut gw = Gateway::mock(MockScript::new().with_text(Purpose::ToMInference, reply));
    let belief = infer_belief(&mut gw, &input)?.expect("mock answers");
    println!("belief #{} at t{}:\n{}", belief.index, belief.generated_at_tick, belief.text);
    Ok(())
}
