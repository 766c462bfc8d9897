use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{BackendKind, CompletionError, CompletionResult, Purpose};

/// One request/response pair, in delivery order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    /// Global issue order of the request within the session.
    pub index: usize,
    pub purpose: Purpose,
    /// Issue order among requests of the same purpose.
    pub seq: u32,
    pub request_tick: u32,
    pub delivered_tick: u32,
    pub backend: BackendKind,
    pub latency_ms: u64,
    pub prompt: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<CompletionError>,
}

impl TranscriptEntry {
    pub fn result(&self, backend: BackendKind) -> CompletionResult {
        let outcome = match (&self.text, &self.error) {
            (Some(t), _) => Ok(t.clone()),
            (None, Some(e)) => Err(e.clone()),
            (None, None) => Err(CompletionError::Malformed { message: format!("transcript entry {} has neither text nor error", self.index) }),
        };
        CompletionResult { outcome, latency_ms: self.latency_ms, backend }
    }
}

/// Ordered list of entries; stored as JSON lines.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Transcript {
    pub entries: Vec<TranscriptEntry>,
}

impl Transcript {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn count(&self, purpose: Purpose) -> usize {
        self.entries.iter().filter(|e| e.purpose == purpose).count()
    }

    /// Entry for the `seq`-th request of `purpose`.
    pub fn lookup(&self, purpose: Purpose, seq: u32) -> Option<&TranscriptEntry> {
        self.entries.iter().find(|e| e.purpose == purpose && e.seq == seq)
    }

    pub fn save(&self, path: &Path) -> io::Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        for e in &self.entries {
            serde_json::to_writer(&mut w, e)?;
            w.write_all(b"\n")?;
        }
        w.flush()
    }

    pub fn load(path: &Path) -> io::Result<Transcript> {
        let reader = BufReader::new(File::open(path)?);
        let mut entries = Vec::new();
        for (n, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let entry = serde_json::from_str(&line)
                .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, format!("line {}: {e}", n + 1)))?;
            entries.push(entry);
        }
        Ok(Transcript { entries })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jsonl_round_trip() {
        let t = Transcript {
            entries: vec![
                TranscriptEntry {
                    index: 0,
                    purpose: Purpose::Communication,
                    seq: 0,
                    request_tick: 0,
                    delivered_tick: 2,
                    backend: BackendKind::Mock,
                    latency_ms: 0,
                    prompt: "p".into(),
                    text: Some("SAY: hi".into()),
                    error: None,
                },
                TranscriptEntry {
                    index: 1,
                    purpose: Purpose::ToMInference,
                    seq: 0,
                    request_tick: 75,
                    delivered_tick: 77,
                    backend: BackendKind::Live,
                    latency_ms: 10_000,
                    prompt: "q".into(),
                    text: None,
                    error: Some(CompletionError::Timeout { after_ms: 10_000 }),
                },
            ],
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.jsonl");
        t.save(&path).unwrap();
        assert_eq!(Transcript::load(&path).unwrap(), t);
        assert_eq!(t.lookup(Purpose::ToMInference, 0).unwrap().index, 1);
    }
}
