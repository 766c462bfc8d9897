//! Text-completion gateway with live, replay and scripted-mock backends.
//!
//! Requests are submitted at a tick and delivered at a later tick boundary via
//! [`Gateway::poll`]. With the mock and replay backends delivery ticks are a
//! pure function of the request stream, which keeps whole episodes
//! deterministic; with the live backend the delivery tick is whatever tick
//! first observes the finished HTTP call, and the transcript records it so a
//! replay reproduces the same timing.

mod gateway;
mod live;
mod mock;
mod transcript;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use gateway::{Delivery, Gateway, GatewayError};
pub use live::LiveConfig;
pub use mock::{MockReply, MockScript, WhenExhausted};
pub use transcript::{Transcript, TranscriptEntry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Purpose {
    ToMInference,
    CodeAsPolicy,
    Reflection,
    Communication,
}

impl Purpose {
    pub const ALL: [Purpose; 4] = [Purpose::ToMInference, Purpose::CodeAsPolicy, Purpose::Reflection, Purpose::Communication];

    /// Sampling temperature used when a module does not override it.
    pub fn default_temperature(self) -> f32 {
        match self {
            Purpose::CodeAsPolicy => 0.0,
            Purpose::Communication => 0.7,
            Purpose::ToMInference | Purpose::Reflection => 0.2,
        }
    }

    pub fn default_max_tokens(self) -> u32 {
        match self {
            Purpose::Communication => 60,
            Purpose::CodeAsPolicy => 400,
            Purpose::ToMInference | Purpose::Reflection => 500,
        }
    }
}

impl fmt::Display for Purpose {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompletionRequest {
    pub purpose: Purpose,
    pub prompt: String,
    pub max_tokens: u32,
    pub temperature: f32,
    pub request_tick: u32,
}

impl CompletionRequest {
    pub fn new(purpose: Purpose, prompt: impl Into<String>, request_tick: u32) -> Self {
        Self {
            purpose,
            prompt: prompt.into(),
            max_tokens: purpose.default_max_tokens(),
            temperature: purpose.default_temperature(),
            request_tick,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BackendKind {
    Live,
    Replay,
    Mock,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[serde(tag = "error", rename_all = "snake_case")]
pub enum CompletionError {
    #[error("request timed out after {after_ms} ms")]
    Timeout { after_ms: u64 },
    #[error("transcript exhausted at index {index}")]
    TranscriptExhausted { index: usize },
    #[error("http error: {message}")]
    Http { message: String },
    #[error("malformed backend response: {message}")]
    Malformed { message: String },
    #[error("scripted failure: {message}")]
    Scripted { message: String },
}

/// Outcome of one request: exactly one of text or error.
#[derive(Debug, Clone, PartialEq)]
pub struct CompletionResult {
    pub outcome: Result<String, CompletionError>,
    pub latency_ms: u64,
    pub backend: BackendKind,
}

impl CompletionResult {
    pub fn text(&self) -> Option<&str> {
        self.outcome.as_deref().ok()
    }

    pub fn error(&self) -> Option<&CompletionError> {
        self.outcome.as_ref().err()
    }
}
