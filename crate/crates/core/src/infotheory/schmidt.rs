use serde::{Deserialize, Serialize};

use crate::error::{QinfoError, Result};
use crate::linalg::{c, svd, ComplexMatrix};
use crate::qstate::PureState;

use super::entropy::{shannon_entropy, von_neumann_entropy};

/// Schmidt coefficients at or below this fraction of the largest one are
/// treated as zero when counting the Schmidt rank.
pub const SCHMIDT_TOL: f64 = 1e-9;

/// A bipartition of an `n`-qubit register into side A and side B.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cut {
    num_qubits: usize,
    side_a: Vec<usize>,
}

impl Cut {
    /// Side A is the given qubits; side B is the rest. Both must be non-empty.
    pub fn new(num_qubits: usize, side_a: &[usize]) -> Result<Self> {
        let mut a = side_a.to_vec();
        a.sort_unstable();
        a.dedup();
        if a.len() != side_a.len() {
            return Err(QinfoError::InvalidTargets(format!(
                "repeated qubit in {side_a:?}"
            )));
        }
        if let Some(&bad) = a.iter().find(|&&q| q >= num_qubits) {
            return Err(QinfoError::IndexOutOfRange {
                index: bad,
                bound: num_qubits,
            });
        }
        if a.is_empty() || a.len() == num_qubits {
            return Err(QinfoError::TrivialPartition);
        }
        Ok(Cut {
            num_qubits,
            side_a: a,
        })
    }

    /// The first `k` qubits against the remaining `n - k`.
    pub fn first(num_qubits: usize, k: usize) -> Result<Self> {
        Self::new(num_qubits, &(0..k).collect::<Vec<_>>())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn side_a(&self) -> &[usize] {
        &self.side_a
    }

    pub fn side_b(&self) -> Vec<usize> {
        (0..self.num_qubits)
            .filter(|q| !self.side_a.contains(q))
            .collect()
    }

    /// Qubit order with side A first.
    fn order(&self) -> Vec<usize> {
        self.side_a.iter().copied().chain(self.side_b()).collect()
    }

    fn check(&self, state: &PureState) -> Result<()> {
        if state.num_qubits() != self.num_qubits {
            return Err(QinfoError::DimensionMismatch(format!(
                "cut over {} qubits applied to a {}-qubit state",
                self.num_qubits,
                state.num_qubits()
            )));
        }
        Ok(())
    }
}

/// `|psi> = sum_i coefficients[i] |a_i> |b_i>` across a [`Cut`].
///
/// Column `i` of `basis_a` is `|a_i>` (side A qubits in ascending order) and
/// column `i` of `basis_b` is `|b_i>`. Only coefficients above the rank
/// threshold are kept.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub cut: Cut,
    pub coefficients: Vec<f64>,
    pub basis_a: ComplexMatrix,
    pub basis_b: ComplexMatrix,
}

impl SchmidtDecomposition {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    /// Rebuilds the state in the original qubit order.
    pub fn reconstruct(&self) -> PureState {
        let da = self.basis_a.rows();
        let db = self.basis_b.rows();
        let mut amps = vec![c(0.0, 0.0); da * db];
        for (i, &s) in self.coefficients.iter().enumerate() {
            for ja in 0..da {
                let a = self.basis_a[(ja, i)] * s;
                for jb in 0..db {
                    amps[ja * db + jb] += a * self.basis_b[(jb, i)];
                }
            }
        }
        let permuted = PureState::from_unnormalized(amps).expect("non-zero reconstruction");
        // Undo the side-A-first ordering.
        let order = self.cut.order();
        let mut inverse = vec![0; order.len()];
        for (pos, &q) in order.iter().enumerate() {
            inverse[q] = pos;
        }
        permuted
            .permute_qubits(&inverse)
            .expect("valid permutation")
    }
}

/// Amplitudes reshaped to a `2^|A| x 2^|B|` coefficient matrix.
fn coefficient_matrix(state: &PureState, cut: &Cut) -> Result<ComplexMatrix> {
    cut.check(state)?;
    let permuted = state.permute_qubits(&cut.order())?;
    let rows = 1usize << cut.side_a.len();
    let cols = permuted.dim() / rows;
    ComplexMatrix::new(rows, cols, permuted.amplitudes().to_vec())
}

/// Schmidt decomposition via SVD of the coefficient matrix.
pub fn schmidt_decompose(state: &PureState, cut: &Cut) -> Result<SchmidtDecomposition> {
    let m = coefficient_matrix(state, cut)?;
    let dec = svd(&m);
    let top = dec.values[0];
    let rank = dec
        .values
        .iter()
        .filter(|&&s| s > SCHMIDT_TOL * top)
        .count();
    let mut basis_a = ComplexMatrix::zeros(m.rows(), rank);
    let mut basis_b = ComplexMatrix::zeros(m.cols(), rank);
    for i in 0..rank {
        for r in 0..m.rows() {
            basis_a[(r, i)] = dec.u[(r, i)];
        }
        for r in 0..m.cols() {
            basis_b[(r, i)] = dec.v[(r, i)].conj();
        }
    }
    Ok(SchmidtDecomposition {
        cut: cut.clone(),
        coefficients: dec.values[..rank].to_vec(),
        basis_a,
        basis_b,
    })
}

/// Entanglement of a pure bipartite state: the von Neumann entropy of the
/// side-A reduced state, in ebits.
pub fn entanglement_entropy(state: &PureState, cut: &Cut) -> Result<f64> {
    cut.check(state)?;
    von_neumann_entropy(&state.reduced_density(cut.side_a())?)
}

/// Same quantity from the Schmidt coefficients: `H(c_i^2)`.
pub fn schmidt_entropy(state: &PureState, cut: &Cut) -> Result<f64> {
    let dec = schmidt_decompose(state, cut)?;
    let mut probs: Vec<f64> = dec.coefficients.iter().map(|s| s * s).collect();
    let total: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= total;
    }
    shannon_entropy(&probs)
}

/// A pure state is entangled across the cut iff its Schmidt rank exceeds one.
pub fn is_entangled_pure(state: &PureState, cut: &Cut) -> Result<bool> {
    Ok(schmidt_decompose(state, cut)?.rank() >= 2)
}
