use serde::{Deserialize, Serialize};

use crate::error::{QinfoError, Result};

/// One protocol event.
///
/// Serialized adjacently tagged, so a transcript line reads
/// `{"step":3,"kind":"gate","payload":{"name":"cnot","targets":[0,1]}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum Event {
    Prepare {
        label: String,
        qubits: Vec<usize>,
    },
    Gate {
        name: String,
        targets: Vec<usize>,
    },
    Measure {
        basis: String,
        targets: Vec<usize>,
        outcome: usize,
    },
    ClassicalMessage {
        sender: String,
        receiver: String,
        bits: Vec<u8>,
    },
    /// A qubit physically handed from one party to another.
    Transmit {
        qubit: usize,
        sender: String,
        receiver: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub step: usize,
    #[serde(flatten)]
    pub event: Event,
}

/// Append-only, step-indexed record of a protocol run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProtocolTranscript {
    entries: Vec<TranscriptEntry>,
}

impl ProtocolTranscript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, event: Event) {
        let step = self.entries.len();
        self.entries.push(TranscriptEntry { step, event });
    }

    pub fn entries(&self) -> &[TranscriptEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn events(&self) -> impl Iterator<Item = &Event> {
        self.entries.iter().map(|e| &e.event)
    }

    pub fn messages(&self) -> impl Iterator<Item = &Event> {
        self.events()
            .filter(|e| matches!(e, Event::ClassicalMessage { .. }))
    }

    /// JSON lines, one event per line.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for entry in &self.entries {
            out.push_str(
                &serde_json::to_string(entry).expect("transcript serialization cannot fail"),
            );
            out.push('\n');
        }
        out
    }

    /// Parses JSON lines; steps must run 0, 1, 2, ... in order.
    pub fn from_json_lines(text: &str) -> Result<Self> {
        let mut transcript = ProtocolTranscript::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let entry: TranscriptEntry =
                serde_json::from_str(line).map_err(|e| QinfoError::Json(e.to_string()))?;
            if entry.step != transcript.len() {
                return Err(QinfoError::Json(format!(
                    "expected step {}, found {}",
                    transcript.len(),
                    entry.step
                )));
            }
            transcript.entries.push(entry);
        }
        Ok(transcript)
    }
}
