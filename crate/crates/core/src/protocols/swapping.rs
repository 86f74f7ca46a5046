use crate::error::Result;
use crate::infotheory::{entanglement_entropy, Cut};
use crate::qstate::gates::{cnot, hadamard};
use crate::qstate::{bell_state, BellState, PureState};
use crate::rng::SimRng;

use super::{two_bits, Lab, PauliCorrection, ProtocolTranscript};

/// Correction on C that turns the post-measurement (B, C) pair into the
/// singlet, keyed by the Bell state found on (A1, A2).
pub const SWAP_CORRECTIONS: [(BellState, PauliCorrection); 4] = [
    (BellState::PsiMinus, PauliCorrection::Identity),
    (BellState::PsiPlus, PauliCorrection::SigmaZ),
    (BellState::PhiMinus, PauliCorrection::SigmaX),
    (BellState::PhiPlus, PauliCorrection::SigmaY),
];

#[derive(Debug, Clone)]
pub struct SwapOutcome {
    pub alice_bits: [u8; 2],
    pub alice_outcome: BellState,
    /// (B, C) right after Alice's measurement, before any correction.
    pub measured_pair: PureState,
    /// (B, C) after the correction on C.
    pub final_state: PureState,
    /// Entropy across (A1, B) | (A2, C) before the measurement.
    pub entropy_before: f64,
    /// Entropy of B against C after the measurement.
    pub entropy_after: f64,
    pub fidelity_to_singlet: f64,
    pub transcript: ProtocolTranscript,
}

/// Entangles B and C, which never interacted, by a Bell measurement on
/// their partners.
///
/// Register order is `[A1, B, A2, C]`, starting as two singlets on (0, 1)
/// and (2, 3).
pub fn entanglement_swap(rng: &mut SimRng) -> Result<SwapOutcome> {
    let singlet = bell_state(BellState::PsiMinus);
    let mut lab = Lab::new(singlet.tensor(&singlet));
    lab.prepare("psi-", &[0, 1]);
    lab.prepare("psi-", &[2, 3]);
    let entropy_before = entanglement_entropy(&lab.state, &Cut::new(4, &[0, 1])?)?;

    lab.gate("cnot", &cnot(), &[0, 2])?;
    lab.gate("h", &hadamard(), &[0])?;
    let record = lab.measure(&[0, 2], rng)?;
    let alice_bits = two_bits(record.outcome_index);
    let alice_outcome = BellState::from_readout(record.outcome_index);
    lab.message("alice", "charles", alice_bits.to_vec());

    let measured_pair = lab.state.residual_state(&[0, 2], record.outcome_index)?;
    let entropy_after = entanglement_entropy(&measured_pair, &Cut::new(2, &[0])?)?;

    let correction = SWAP_CORRECTIONS
        .iter()
        .find(|(b, _)| *b == alice_outcome)
        .map(|&(_, p)| p)
        .expect("table covers all Bell states");
    lab.gate(correction.label(), &correction.matrix(), &[3])?;
    let final_state = lab.state.residual_state(&[0, 2], record.outcome_index)?;
    let fidelity_to_singlet = final_state.fidelity(&singlet)?;

    Ok(SwapOutcome {
        alice_bits,
        alice_outcome,
        measured_pair,
        final_state,
        entropy_before,
        entropy_after,
        fidelity_to_singlet,
        transcript: lab.transcript,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measured_pair_matches_alice_outcome() {
        // Four-case algebra: Psi-(A1,B) Psi-(A2,C) rewritten in Bell pairs
        // (A1,A2)(B,C) puts the same Bell state on both sides.
        let mut rng = SimRng::seed_from_u64(8);
        let mut seen = [false; 4];
        for _ in 0..200 {
            let out = entanglement_swap(&mut rng).unwrap();
            let f = out
                .measured_pair
                .fidelity(&out.alice_outcome.state())
                .unwrap();
            assert!((f - 1.0).abs() < 1e-12);
            seen[out.alice_outcome.readout()] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn ends_in_singlet_with_one_ebit() {
        let mut rng = SimRng::seed_from_u64(9);
        for _ in 0..100 {
            let out = entanglement_swap(&mut rng).unwrap();
            assert!(out.entropy_before.abs() < 1e-9);
            assert!((out.entropy_after - 1.0).abs() < 1e-9);
            assert!(out.fidelity_to_singlet >= 1.0 - 1e-9);
        }
    }
}
