use serde::{Deserialize, Serialize};

use crate::error::{QinfoError, Result};
use crate::linalg::ComplexMatrix;
use crate::qstate::{computational_basis_state, PureState, UNITARY_TOL};
use crate::random::haar_unitary;
use crate::rng::SimRng;

/// How well a two-qubit unitary copies each test state onto a blank `|0>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CloneReport {
    /// Fidelity of `U(|s>|0>)` with `|s>|s>` for each test state, in order.
    pub fidelities: Vec<f64>,
    /// Largest `1 - fidelity` over the test states.
    pub max_shortfall: f64,
}

/// Scores `cloner` as a copier of `test_states`.
pub fn attempt_general_clone(
    cloner: &ComplexMatrix,
    test_states: &[PureState],
) -> Result<CloneReport> {
    if cloner.rows() != 4 || cloner.cols() != 4 {
        return Err(QinfoError::DimensionMismatch(format!(
            "cloner must be 4x4, got {}x{}",
            cloner.rows(),
            cloner.cols()
        )));
    }
    let dev = cloner.unitarity_deviation();
    if dev > UNITARY_TOL {
        return Err(QinfoError::NotUnitary(dev));
    }
    let blank = computational_basis_state(1, 0)?;
    let mut fidelities = Vec::with_capacity(test_states.len());
    for s in test_states {
        if s.num_qubits() != 1 {
            return Err(QinfoError::DimensionMismatch(
                "test states must be single qubits".into(),
            ));
        }
        let out = s.tensor(&blank).apply_gate(cloner, &[0, 1])?;
        fidelities.push(out.fidelity(&s.tensor(s))?);
    }
    let max_shortfall = fidelities.iter().map(|f| 1.0 - f).fold(0.0, f64::max);
    Ok(CloneReport {
        fidelities,
        max_shortfall,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CloneSearch {
    pub candidates: usize,
    /// Smallest `max_shortfall` seen over all candidates.
    pub best_shortfall: f64,
    /// True when every candidate fell short by more than `threshold`.
    pub all_failed: bool,
}

/// Draws `candidates` Haar-random two-qubit unitaries and checks that none
/// copies all of `test_states` to within `threshold`.
pub fn search_random_cloners(
    test_states: &[PureState],
    candidates: usize,
    threshold: f64,
    rng: &mut SimRng,
) -> Result<CloneSearch> {
    let mut best_shortfall = f64::INFINITY;
    for _ in 0..candidates {
        let u = haar_unitary(4, rng);
        let report = attempt_general_clone(&u, test_states)?;
        best_shortfall = best_shortfall.min(report.max_shortfall);
    }
    Ok(CloneSearch {
        candidates,
        best_shortfall,
        all_failed: best_shortfall > threshold,
    })
}
