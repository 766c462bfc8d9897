use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{BackendKind, CompletionError, CompletionRequest, CompletionResult};

/// OpenAI-compatible chat-completions endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LiveConfig {
    /// Base URL without the trailing `/chat/completions`.
    pub base_url: String,
    pub model: String,
    /// Name of the environment variable holding the bearer token.
    pub api_key_env: String,
    pub timeout_ms: u64,
}

impl Default for LiveConfig {
    fn default() -> Self {
        Self {
            base_url: "https://api.openai.com/v1".into(),
            model: "gpt-4o".into(),
            api_key_env: "OPENAI_API_KEY".into(),
            timeout_ms: 10_000,
        }
    }
}

impl LiveConfig {
    fn endpoint(&self) -> String {
        format!("{}/chat/completions", self.base_url.trim_end_matches('/'))
    }
}

/// Runs one request to completion on the calling thread.
pub(crate) fn complete(cfg: &LiveConfig, req: &CompletionRequest) -> CompletionResult {
    let start = Instant::now();
    let outcome = call(cfg, req);
    CompletionResult { outcome, latency_ms: start.elapsed().as_millis() as u64, backend: BackendKind::Live }
}

fn call(cfg: &LiveConfig, req: &CompletionRequest) -> Result<String, CompletionError> {
    let http = |e: reqwest::Error| {
        if e.is_timeout() {
            CompletionError::Timeout { after_ms: cfg.timeout_ms }
        } else {
            CompletionError::Http { message: e.to_string() }
        }
    };
    let client = reqwest::blocking::Client::builder()
        .timeout(Duration::from_millis(cfg.timeout_ms))
        .build()
        .map_err(http)?;
    let body = json!({
        "model": cfg.model,
        "messages": [{"role": "user", "content": req.prompt}],
        "max_tokens": req.max_tokens,
        "temperature": req.temperature,
    });
    let mut builder = client.post(cfg.endpoint()).json(&body);
    if let Ok(key) = std::env::var(&cfg.api_key_env) {
        builder = builder.bearer_auth(key);
    }
    let resp = builder.send().map_err(http)?;
    let status = resp.status();
    if !status.is_success() {
        let text = resp.text().unwrap_or_default();
        return Err(CompletionError::Http { message: format!("status {status}: {}", text.chars().take(200).collect::<String>()) });
    }
    let v: Value = resp.json().map_err(|e| {
        if e.is_timeout() {
            CompletionError::Timeout { after_ms: cfg.timeout_ms }
        } else {
            CompletionError::Malformed { message: e.to_string() }
        }
    })?;
    v.pointer("/choices/0/message/content")
        .and_then(Value::as_str)
        .map(str::to_owned)
        .ok_or_else(|| CompletionError::Malformed { message: "missing choices[0].message.content".into() })
}
