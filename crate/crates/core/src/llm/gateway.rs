use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::sync::mpsc;
use std::thread;

use thiserror::Error;

use super::live::{self, LiveConfig};
use super::mock::MockScript;
use super::transcript::{Transcript, TranscriptEntry};
use super::{BackendKind, CompletionRequest, CompletionResult, Purpose};

#[derive(Debug, Error)]
pub enum GatewayError {
    #[error("a {0} request is already in flight")]
    Busy(Purpose),
    #[error("failed to record transcript: {0}")]
    Record(#[from] io::Error),
}

/// A finished request handed back at a tick boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct Delivery {
    pub purpose: Purpose,
    pub request_tick: u32,
    pub delivered_tick: u32,
    pub result: CompletionResult,
}

enum Backend {
    Mock { script: MockScript, latency_ticks: u32 },
    Replay { source: Transcript },
    Live { config: LiveConfig },
}

enum Ready {
    At { tick: u32, result: CompletionResult },
    Channel(mpsc::Receiver<CompletionResult>),
}

struct Pending {
    request: CompletionRequest,
    index: usize,
    seq: u32,
    ready: Ready,
}

/// Routes completion requests to one backend, at most one in flight per purpose.
pub struct Gateway {
    backend: Backend,
    pending: BTreeMap<Purpose, Pending>,
    seq: BTreeMap<Purpose, u32>,
    next_index: usize,
    transcript: Transcript,
    recorder: Option<BufWriter<File>>,
}

impl Gateway {
    fn with_backend(backend: Backend) -> Self {
        Self {
            backend,
            pending: BTreeMap::new(),
            seq: BTreeMap::new(),
            next_index: 0,
            transcript: Transcript::default(),
            recorder: None,
        }
    }

    /// Replies arrive two ticks after the request.
    pub fn mock(script: MockScript) -> Self {
        Self::mock_with_latency(script, 2)
    }

    pub fn mock_with_latency(script: MockScript, latency_ticks: u32) -> Self {
        Self::with_backend(Backend::Mock { script, latency_ticks: latency_ticks.max(1) })
    }

    pub fn replay(source: Transcript) -> Self {
        Self::with_backend(Backend::Replay { source })
    }

    pub fn live(config: LiveConfig) -> Self {
        Self::with_backend(Backend::Live { config })
    }

    /// Streams every delivered entry to `path` as JSON lines.
    pub fn with_recorder(mut self, path: &Path) -> io::Result<Self> {
        self.recorder = Some(BufWriter::new(File::create(path)?));
        Ok(self)
    }

    pub fn backend_kind(&self) -> BackendKind {
        match self.backend {
            Backend::Mock { .. } => BackendKind::Mock,
            Backend::Replay { .. } => BackendKind::Replay,
            Backend::Live { .. } => BackendKind::Live,
        }
    }

    pub fn is_pending(&self, purpose: Purpose) -> bool {
        self.pending.contains_key(&purpose)
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    pub fn into_transcript(self) -> Transcript {
        self.transcript
    }

    fn next_ids(&mut self, purpose: Purpose) -> (usize, u32) {
        let index = self.next_index;
        self.next_index += 1;
        let seq = self.seq.entry(purpose).or_insert(0);
        let s = *seq;
        *seq += 1;
        (index, s)
    }

    pub fn submit(&mut self, request: CompletionRequest) -> Result<(), GatewayError> {
        if self.is_pending(request.purpose) {
            return Err(GatewayError::Busy(request.purpose));
        }
        let (index, seq) = self.next_ids(request.purpose);
        let ready = match &mut self.backend {
            Backend::Mock { script, latency_ticks } => Ready::At {
                tick: request.request_tick + *latency_ticks,
                result: CompletionResult { outcome: script.next(request.purpose), latency_ms: 0, backend: BackendKind::Mock },
            },
            Backend::Replay { source } => {
                let (tick, result) = replay_lookup(source, &request, index, seq);
                Ready::At { tick, result }
            }
            Backend::Live { config } => {
                let (tx, rx) = mpsc::channel();
                let cfg = config.clone();
                let req = request.clone();
                thread::spawn(move || {
                    let _ = tx.send(live::complete(&cfg, &req));
                });
                Ready::Channel(rx)
            }
        };
        self.pending.insert(request.purpose, Pending { request, index, seq, ready });
        Ok(())
    }

    /// Collects every request finished by `tick`, in purpose order.
    pub fn poll(&mut self, tick: u32) -> Result<Vec<Delivery>, GatewayError> {
        let mut done = Vec::new();
        for (purpose, p) in self.pending.iter_mut() {
            if let Ready::Channel(rx) = &p.ready {
                let result = match rx.try_recv() {
                    Ok(r) => r,
                    Err(mpsc::TryRecvError::Empty) => continue,
                    Err(mpsc::TryRecvError::Disconnected) => CompletionResult {
                        outcome: Err(super::CompletionError::Http { message: "worker thread exited".into() }),
                        latency_ms: 0,
                        backend: BackendKind::Live,
                    },
                };
                p.ready = Ready::At { tick, result };
            }
            if let Ready::At { tick: due, .. } = p.ready {
                if due <= tick {
                    done.push(*purpose);
                }
            }
        }
        let mut out = Vec::new();
        for purpose in done {
            let p = self.pending.remove(&purpose).expect("pending entry");
            let result = match p.ready {
                Ready::At { result, .. } => result,
                Ready::Channel(_) => unreachable!("channel results are buffered before delivery"),
            };
            out.push(self.finish(p.request, p.index, p.seq, tick, result)?);
        }
        Ok(out)
    }

    /// Runs a request to completion immediately, bypassing the tick queue.
    pub fn complete_blocking(&mut self, request: CompletionRequest) -> Result<CompletionResult, GatewayError> {
        let (index, seq) = self.next_ids(request.purpose);
        let result = match &mut self.backend {
            Backend::Mock { script, .. } => {
                CompletionResult { outcome: script.next(request.purpose), latency_ms: 0, backend: BackendKind::Mock }
            }
            Backend::Replay { source } => replay_lookup(source, &request, index, seq).1,
            Backend::Live { config } => live::complete(config, &request),
        };
        let tick = request.request_tick;
        Ok(self.finish(request, index, seq, tick, result)?.result)
    }

    fn finish(
        &mut self,
        request: CompletionRequest,
        index: usize,
        seq: u32,
        delivered_tick: u32,
        result: CompletionResult,
    ) -> Result<Delivery, GatewayError> {
        let entry = TranscriptEntry {
            index,
            purpose: request.purpose,
            seq,
            request_tick: request.request_tick,
            delivered_tick,
            backend: result.backend,
            latency_ms: result.latency_ms,
            prompt: request.prompt,
            text: result.outcome.as_ref().ok().cloned(),
            error: result.outcome.as_ref().err().cloned(),
        };
        if let Some(w) = &mut self.recorder {
            serde_json::to_writer(&mut *w, &entry).map_err(io::Error::from)?;
            w.write_all(b"\n")?;
            w.flush()?;
        }
        self.transcript.entries.push(entry);
        Ok(Delivery { purpose: request.purpose, request_tick: request.request_tick, delivered_tick, result })
    }
}

fn replay_lookup(source: &Transcript, request: &CompletionRequest, index: usize, seq: u32) -> (u32, CompletionResult) {
    match source.lookup(request.purpose, seq) {
        Some(e) => {
            if e.prompt != request.prompt {
                log::warn!("replayed {} request {} has a different prompt than the recording", request.purpose, seq);
            }
            let gap = e.delivered_tick.saturating_sub(e.request_tick).max(1);
            (request.request_tick + gap, e.result(BackendKind::Replay))
        }
        None => (
            request.request_tick + 1,
            CompletionResult {
                outcome: Err(super::CompletionError::TranscriptExhausted { index }),
                latency_ms: 0,
                backend: BackendKind::Replay,
            },
        ),
    }
}
