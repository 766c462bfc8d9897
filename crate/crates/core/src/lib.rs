//! Two-chef burger kitchen for real-time human-AI teaming experiments.
//!
//! * [`env`]: deterministic tick-based kitchen engine
//! * [`llm`]: completion gateway with live, replay and mock backends
//! * [`agent`]: belief inference, policy snippets, reflection and messages
//! * [`metrics`]: task score, contribution rate, failure and message counts
//! * [`session`]: sessions, scripts, validation games, replay and the WebSocket server

pub mod agent;
pub mod env;
pub mod history;
pub mod llm;
pub mod metrics;
pub mod prompts;
pub mod session;
