use crate::error::{QinfoError, Result};
use crate::qstate::computational_basis_state;
use crate::qstate::gates::{cnot, hadamard, pauli_x, pauli_z};
use crate::rng::SimRng;

use super::{two_bits, Lab, ProtocolTranscript};

#[derive(Debug, Clone)]
pub struct SuperdenseOutcome {
    pub sent: [u8; 2],
    pub decoded: [u8; 2],
    pub transcript: ProtocolTranscript,
}

/// Sends two classical bits by transmitting one qubit of a shared pair.
///
/// Bob prepares `Phi+` on qubits 0 and 1 with H then CNOT and hands qubit 0
/// to Alice. She applies `sigma_z^b0` then `sigma_x^b1` and returns it. Bob
/// undoes the preparation circuit and reads out both qubits.
pub fn superdense_encode_decode(message: [u8; 2], rng: &mut SimRng) -> Result<SuperdenseOutcome> {
    if message.iter().any(|&b| b > 1) {
        return Err(QinfoError::InvalidConfig(format!(
            "message bits must be 0 or 1, got {message:?}"
        )));
    }
    let mut lab = Lab::new(computational_basis_state(2, 0)?);
    lab.prepare("|00>", &[0, 1]);
    lab.gate("h", &hadamard(), &[0])?;
    lab.gate("cnot", &cnot(), &[0, 1])?;
    lab.transmit(0, "bob", "alice");

    if message[0] == 1 {
        lab.gate("sz", &pauli_z(), &[0])?;
    }
    if message[1] == 1 {
        lab.gate("sx", &pauli_x(), &[0])?;
    }
    lab.transmit(0, "alice", "bob");

    lab.gate("cnot", &cnot(), &[0, 1])?;
    lab.gate("h", &hadamard(), &[0])?;
    let record = lab.measure(&[0, 1], rng)?;
    Ok(SuperdenseOutcome {
        sent: message,
        decoded: two_bits(record.outcome_index),
        transcript: lab.transcript,
    })
}
