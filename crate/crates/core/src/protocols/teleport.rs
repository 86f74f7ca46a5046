use serde::{Deserialize, Serialize};

use crate::error::{QinfoError, Result};
use crate::linalg::{c, ComplexMatrix};
use crate::qstate::gates::{cnot, hadamard, identity, pauli_x, pauli_y, pauli_z};
use crate::qstate::{bell_state, BellState, DensityOperator, PureState};
use crate::rng::SimRng;

use super::{two_bits, Lab, ProtocolTranscript};

/// Single-qubit correction Bob applies, phases included.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PauliCorrection {
    Identity,
    SigmaX,
    SigmaY,
    SigmaZ,
    /// `i sigma_y`
    ISigmaY,
    /// `-sigma_z`
    MinusSigmaZ,
    /// `-1`
    MinusIdentity,
}

impl PauliCorrection {
    pub fn matrix(self) -> ComplexMatrix {
        match self {
            PauliCorrection::Identity => identity(),
            PauliCorrection::SigmaX => pauli_x(),
            PauliCorrection::SigmaY => pauli_y(),
            PauliCorrection::SigmaZ => pauli_z(),
            PauliCorrection::ISigmaY => pauli_y().scale(c(0.0, 1.0)),
            PauliCorrection::MinusSigmaZ => pauli_z().scale_real(-1.0),
            PauliCorrection::MinusIdentity => identity().scale_real(-1.0),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            PauliCorrection::Identity => "1",
            PauliCorrection::SigmaX => "sx",
            PauliCorrection::SigmaY => "sy",
            PauliCorrection::SigmaZ => "sz",
            PauliCorrection::ISigmaY => "i*sy",
            PauliCorrection::MinusSigmaZ => "-sz",
            PauliCorrection::MinusIdentity => "-1",
        }
    }
}

/// Alice's Bell outcome on systems 1 and 2 mapped to Bob's correction on
/// system 3, when the shared pair is the singlet. With these phases Bob's
/// qubit ends up equal to the input amplitude for amplitude.
pub const TELEPORT_CORRECTIONS: [(BellState, PauliCorrection); 4] = [
    (BellState::PhiPlus, PauliCorrection::ISigmaY),
    (BellState::PhiMinus, PauliCorrection::SigmaX),
    (BellState::PsiPlus, PauliCorrection::MinusSigmaZ),
    (BellState::PsiMinus, PauliCorrection::MinusIdentity),
];

fn correction_for(outcome: BellState) -> PauliCorrection {
    TELEPORT_CORRECTIONS
        .iter()
        .find(|(b, _)| *b == outcome)
        .map(|&(_, p)| p)
        .expect("table covers all Bell states")
}

#[derive(Debug, Clone)]
pub struct TeleportOutcome {
    /// Alice's two classical bits (the Bell-circuit readout).
    pub bell_bits: [u8; 2],
    pub bell_outcome: BellState,
    pub correction_applied: PauliCorrection,
    /// Bob's qubit after the correction.
    pub bob_state: PureState,
    pub fidelity_to_input: f64,
    /// Bob's reduced state before the classical bits arrive.
    pub bob_reduced_before_message: DensityOperator,
    /// Reduced state of Alice's original qubit after her measurement.
    pub alice_reduced_after: DensityOperator,
    pub transcript: ProtocolTranscript,
}

/// Teleports a single-qubit state through a shared singlet.
///
/// Qubit 0 holds the input, qubits 1 and 2 the singlet (Alice holds 1, Bob
/// holds 2). Alice measures in the Bell basis with the disentangling circuit
/// and sends the two readout bits; Bob applies the tabulated correction.
pub fn teleport(chi: &PureState, rng: &mut SimRng) -> Result<TeleportOutcome> {
    if chi.num_qubits() != 1 {
        return Err(QinfoError::DimensionMismatch(format!(
            "teleportation input must be one qubit, got {}",
            chi.num_qubits()
        )));
    }
    let mut lab = Lab::new(chi.tensor(&bell_state(BellState::PsiMinus)));
    lab.prepare("chi", &[0]);
    lab.prepare("psi-", &[1, 2]);

    lab.gate("cnot", &cnot(), &[0, 1])?;
    lab.gate("h", &hadamard(), &[0])?;
    // Alice's gates are local to her side, so Bob's reduced state here is
    // also what he holds after her measurement, averaged over outcomes.
    let bob_reduced_before_message = lab.state.reduced_density(&[2])?;

    let record = lab.measure(&[0, 1], rng)?;
    let bell_bits = two_bits(record.outcome_index);
    let bell_outcome = BellState::from_readout(record.outcome_index);
    let alice_reduced_after = lab.state.reduced_density(&[0])?;
    lab.message("alice", "bob", bell_bits.to_vec());

    let correction = correction_for(bell_outcome);
    lab.gate(correction.label(), &correction.matrix(), &[2])?;
    let bob_state = lab.state.residual_state(&[0, 1], record.outcome_index)?;
    let fidelity_to_input = bob_state.fidelity(chi)?;

    Ok(TeleportOutcome {
        bell_bits,
        bell_outcome,
        correction_applied: correction,
        bob_state,
        fidelity_to_input,
        bob_reduced_before_message,
        alice_reduced_after,
        transcript: lab.transcript,
    })
}
