use serde::{Deserialize, Serialize};

use crate::error::{QinfoError, Result};
use crate::linalg::ComplexMatrix;
use crate::qstate::gates::{identity, pauli_x, pauli_y, pauli_z, x_basis, y_basis};
use crate::qstate::PureState;
use crate::rng::SimRng;

/// Number of independent expectation values that fix a state on a
/// `dim`-dimensional system.
pub fn observables_required(dim: usize) -> usize {
    dim * dim - 1
}

/// Exact Bloch vector `(<sx>, <sy>, <sz>)` of a single-qubit state.
pub fn bloch_vector(state: &PureState) -> Result<[f64; 3]> {
    if state.num_qubits() != 1 {
        return Err(QinfoError::DimensionMismatch(format!(
            "Bloch vector needs one qubit, got {}",
            state.num_qubits()
        )));
    }
    let v = state.to_column();
    let expect = |m: ComplexMatrix| (&(&v.dagger() * &m) * &v)[(0, 0)].re;
    Ok([expect(pauli_x()), expect(pauli_y()), expect(pauli_z())])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TomographyEstimate {
    pub bloch: [f64; 3],
    pub shots_per_basis: usize,
    /// Plug-in estimates are reported raw; this is set when they land
    /// outside the unit ball.
    pub outside_bloch_ball: bool,
}

impl TomographyEstimate {
    pub fn norm(&self) -> f64 {
        self.bloch.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Estimates the Bloch vector from `shots_per_basis` fresh copies measured
/// in each of the X, Y and Z bases.
pub fn tomography_single_qubit(
    unknown: &PureState,
    shots_per_basis: usize,
    rng: &mut SimRng,
) -> Result<TomographyEstimate> {
    if shots_per_basis == 0 {
        return Err(QinfoError::InvalidConfig(
            "shots_per_basis must be at least 1".into(),
        ));
    }
    if unknown.num_qubits() != 1 {
        return Err(QinfoError::DimensionMismatch(format!(
            "tomography takes one qubit, got {}",
            unknown.num_qubits()
        )));
    }
    let mut bloch = [0.0; 3];
    for (slot, basis) in bloch.iter_mut().zip([x_basis(), y_basis(), identity()]) {
        let p0 = unknown
            .apply_gate(&basis.dagger(), &[0])?
            .outcome_probabilities(&[0])?[0];
        let zeros = (0..shots_per_basis).filter(|_| rng.next_f64() < p0).count();
        *slot = (2.0 * zeros as f64 - shots_per_basis as f64) / shots_per_basis as f64;
    }
    let norm2: f64 = bloch.iter().map(|x| x * x).sum();
    Ok(TomographyEstimate {
        bloch,
        shots_per_basis,
        outside_bloch_ball: norm2 > 1.0,
    })
}
