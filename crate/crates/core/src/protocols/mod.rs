//! Entanglement-assisted protocols run on the exact simulator.
//!
//! Each run owns its register and generator and returns a
//! [`ProtocolTranscript`] listing every preparation, gate, measurement and
//! classical message in execution order.

mod cloning;
mod superdense;
mod swapping;
mod teleport;
mod tomography;
mod transcript;

pub use cloning::{attempt_general_clone, search_random_cloners, CloneReport, CloneSearch};
pub use superdense::{superdense_encode_decode, SuperdenseOutcome};
pub use swapping::{entanglement_swap, SwapOutcome, SWAP_CORRECTIONS};
pub use teleport::{teleport, PauliCorrection, TeleportOutcome, TELEPORT_CORRECTIONS};
pub use tomography::{
    bloch_vector, observables_required, tomography_single_qubit, TomographyEstimate,
};
pub use transcript::{Event, ProtocolTranscript, TranscriptEntry};

use crate::error::Result;
use crate::linalg::ComplexMatrix;
use crate::qstate::{MeasurementRecord, PureState};
use crate::rng::SimRng;

/// A register plus the transcript of everything done to it.
struct Lab {
    state: PureState,
    transcript: ProtocolTranscript,
}

impl Lab {
    fn new(state: PureState) -> Self {
        Lab {
            state,
            transcript: ProtocolTranscript::new(),
        }
    }

    fn prepare(&mut self, label: &str, qubits: &[usize]) {
        self.transcript.record(Event::Prepare {
            label: label.to_string(),
            qubits: qubits.to_vec(),
        });
    }

    fn gate(&mut self, name: &str, matrix: &ComplexMatrix, targets: &[usize]) -> Result<()> {
        self.state = self.state.apply_gate(matrix, targets)?;
        self.transcript.record(Event::Gate {
            name: name.to_string(),
            targets: targets.to_vec(),
        });
        Ok(())
    }

    fn measure(&mut self, targets: &[usize], rng: &mut SimRng) -> Result<MeasurementRecord> {
        let record = self.state.measure_computational(targets, rng)?;
        self.state = record.post_state.clone();
        self.transcript.record(Event::Measure {
            basis: "z".into(),
            targets: targets.to_vec(),
            outcome: record.outcome_index,
        });
        Ok(record)
    }

    fn transmit(&mut self, qubit: usize, sender: &str, receiver: &str) {
        self.transcript.record(Event::Transmit {
            qubit,
            sender: sender.to_string(),
            receiver: receiver.to_string(),
        });
    }

    fn message(&mut self, sender: &str, receiver: &str, bits: Vec<u8>) {
        self.transcript.record(Event::ClassicalMessage {
            sender: sender.to_string(),
            receiver: receiver.to_string(),
            bits,
        });
    }
}

/// Two-bit readout index as `[high, low]`.
fn two_bits(index: usize) -> [u8; 2] {
    [((index >> 1) & 1) as u8, (index & 1) as u8]
}
