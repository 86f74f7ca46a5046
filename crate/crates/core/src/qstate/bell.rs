use std::fmt;

use serde::{Deserialize, Serialize};

use super::PureState;

/// The four maximally entangled two-qubit states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BellState {
    /// `(|00> + |11>)/sqrt 2`
    PhiPlus,
    /// `(|00> - |11>)/sqrt 2`
    PhiMinus,
    /// `(|01> + |10>)/sqrt 2`
    PsiPlus,
    /// `(|01> - |10>)/sqrt 2`, the singlet.
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::PhiPlus,
        BellState::PhiMinus,
        BellState::PsiPlus,
        BellState::PsiMinus,
    ];

    pub fn state(self) -> PureState {
        bell_state(self)
    }

    /// Identifies the Bell state from the two bits read out after the
    /// disentangling circuit (CNOT from the first qubit, then H on it).
    /// `bits` is the readout index with the first qubit as high bit.
    pub fn from_readout(bits: usize) -> BellState {
        match bits & 0b11 {
            0b00 => BellState::PhiPlus,
            0b10 => BellState::PhiMinus,
            0b01 => BellState::PsiPlus,
            _ => BellState::PsiMinus,
        }
    }

    /// Inverse of [`BellState::from_readout`].
    pub fn readout(self) -> usize {
        match self {
            BellState::PhiPlus => 0b00,
            BellState::PhiMinus => 0b10,
            BellState::PsiPlus => 0b01,
            BellState::PsiMinus => 0b11,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BellState::PhiPlus => "phi+",
            BellState::PhiMinus => "phi-",
            BellState::PsiPlus => "psi+",
            BellState::PsiMinus => "psi-",
        }
    }
}

impl fmt::Display for BellState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub fn bell_state(which: BellState) -> PureState {
    let amps = match which {
        BellState::PhiPlus => [1.0, 0.0, 0.0, 1.0],
        BellState::PhiMinus => [1.0, 0.0, 0.0, -1.0],
        BellState::PsiPlus => [0.0, 1.0, 1.0, 0.0],
        BellState::PsiMinus => [0.0, 1.0, -1.0, 0.0],
    };
    PureState::from_real(&amps).expect("Bell amplitudes are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, ComplexMatrix};
    use crate::qstate::gates::*;

    #[test]
    fn table_amplitudes() {
        let h = 0.5f64.sqrt();
        let psi_minus = bell_state(BellState::PsiMinus);
        let expected = [c(0.0, 0.0), c(h, 0.0), c(-h, 0.0), c(0.0, 0.0)];
        for (a, b) in psi_minus.amplitudes().iter().zip(expected) {
            assert!((a - b).norm() < 1e-15);
        }
        let phi_plus = bell_state(BellState::PhiPlus);
        let expected = [c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)];
        for (a, b) in phi_plus.amplitudes().iter().zip(expected) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn local_paulis_on_singlet_give_the_table() {
        // -i sy (x) 1 |psi-> = phi+, -sx (x) 1 |psi-> = phi-, sz (x) 1 |psi-> = psi+.
        let singlet = bell_state(BellState::PsiMinus);
        let minus_i_sy = pauli_y().scale(c(0.0, -1.0));
        let minus_sx = pauli_x().scale_real(-1.0);
        let cases: [(ComplexMatrix, BellState); 4] = [
            (minus_i_sy, BellState::PhiPlus),
            (minus_sx, BellState::PhiMinus),
            (pauli_z(), BellState::PsiPlus),
            (identity(), BellState::PsiMinus),
        ];
        for (op, target) in cases {
            let out = singlet.apply_gate(&op, &[0]).unwrap();
            let overlap = out.inner(&bell_state(target)).unwrap();
            assert!((overlap - c(1.0, 0.0)).norm() < 1e-14, "{target}");
        }
    }

    #[test]
    fn pairwise_orthogonal_and_locally_mixed() {
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        for (i, a) in BellState::ALL.iter().enumerate() {
            for (j, b) in BellState::ALL.iter().enumerate() {
                let f = a.state().fidelity(&b.state()).unwrap();
                assert!((f - if i == j { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
            for q in 0..2 {
                let r = a.state().reduced_density(&[q]).unwrap();
                assert!(r.matrix().max_abs_diff(&half) < 1e-14);
            }
        }
    }

    #[test]
    fn readout_mapping_matches_circuit() {
        for b in BellState::ALL {
            let out = b
                .state()
                .apply_gate(&cnot(), &[0, 1])
                .unwrap()
                .apply_gate(&hadamard(), &[0])
                .unwrap();
            let idx = out
                .amplitudes()
                .iter()
                .position(|z| z.norm() > 0.5)
                .unwrap();
            assert!((out.amplitude(idx) - c(1.0, 0.0)).norm() < 1e-14);
            assert_eq!(BellState::from_readout(idx), b);
            assert_eq!(b.readout(), idx);
        }
    }
}
