//! Turn a model reply into condition/macro pairs and check them against a
//! live state.

use coop_kitchen::agent::policy::{parse_snippet_reply, Cond};
use coop_kitchen::env::{init_game, GameConfig, Layout};

const REPLY: &str = r#"Sure! Here you go:
```json
{"order": "BeefBurger",
 "snippets": [
   {"condition": "pan_empty and agent_holding(nothing)", "macro": "prepare(beef)"},
   {"condition": "beef_ready", "macro": "assemble(BeefBurger)"},
   {"condition": "agent_holding(beef) or", "macro": "serve(BeefBurger)"},
   {"condition": "tick > 10", "macro": "dance"}
 ]}
```"#;

fn main() {
    let state = init_game(&Layout::counter_circuit(), &GameConfig::default(), 3);
    let batch = parse_snippet_reply(REPLY, 0, 150);
    println!("priority: {:?}", batch.priority.map(|p| p.target));
    for s in &batch.snippets {
        println!("{:<40} -> {:?}  (now {})", s.condition_text, s.verb, s.condition.eval(&state));
    }
    for r in &batch.rejected {
        println!("rejected: {r}");
    }

    let c: Cond = "not (orders >= 3) and (tick < 100 or human_holding(plate))".parse().unwrap();
    println!("\ncanonical: {c}");
}
