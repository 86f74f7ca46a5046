use serde::{Deserialize, Serialize};

use crate::error::{QinfoError, Result};
use crate::linalg::{
    c, hermitian_eig, partial_trace, Complex, ComplexMatrix, HermitianEigen, HERMITIAN_TOL,
};

use super::{PureState, MAX_QUBITS};

const TRACE_TOL: f64 = 1e-10;
/// Most negative eigenvalue tolerated in a density operator.
pub const PSD_TOL: f64 = 1e-9;

/// Positive, unit-trace Hermitian operator on `n` qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct DensityOperator {
    num_qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityOperator {
    /// Validates Hermiticity (1e-10), unit trace (1e-10) and positivity
    /// (smallest eigenvalue at least -1e-9).
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() < 2 || !matrix.rows().is_power_of_two() {
            return Err(QinfoError::InvalidDensity(format!(
                "{}x{} is not a 2^n x 2^n operator",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let num_qubits = matrix.rows().trailing_zeros() as usize;
        if num_qubits > MAX_QUBITS {
            return Err(QinfoError::InvalidDensity(format!(
                "{num_qubits} qubits is too many"
            )));
        }
        let dev = matrix.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(QinfoError::NotHermitian(dev));
        }
        let tr = matrix.trace();
        if (tr - c(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(QinfoError::InvalidDensity(format!("trace is {tr}")));
        }
        let min = hermitian_eig(&matrix)?.min_value();
        if min < -PSD_TOL {
            return Err(QinfoError::InvalidDensity(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(DensityOperator { num_qubits, matrix })
    }

    /// Skips validation; callers guarantee the invariants hold by construction.
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        let num_qubits = matrix.rows().trailing_zeros() as usize;
        DensityOperator { num_qubits, matrix }
    }

    pub fn from_pure(state: &PureState) -> Self {
        let a = state.amplitudes();
        Self::from_trusted(ComplexMatrix::outer(a, a))
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        Self::from_trusted(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    /// Diagonal state with the given populations.
    pub fn diagonal(populations: &[f64]) -> Result<Self> {
        let d: Vec<Complex> = populations.iter().map(|&p| c(p, 0.0)).collect();
        Self::new(ComplexMatrix::from_diagonal(&d))
    }

    /// `sum_i p_i rho_i`. Weights must be a probability distribution.
    pub fn mixture(components: &[(f64, &DensityOperator)]) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| QinfoError::InvalidDistribution("empty mixture".into()))?
            .1;
        let mut acc = ComplexMatrix::zeros(first.dim(), first.dim());
        for &(p, rho) in components {
            if rho.dim() != first.dim() {
                return Err(QinfoError::DimensionMismatch(
                    "mixture of different dimensions".into(),
                ));
            }
            acc = &acc + &rho.matrix.scale_real(p);
        }
        Self::new(acc)
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn eigen(&self) -> HermitianEigen {
        hermitian_eig(&self.matrix).expect("density operators are Hermitian")
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Reduced state on the listed qubits (ascending order in the result).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityOperator> {
        let dims = vec![2; self.num_qubits];
        Ok(Self::from_trusted(partial_trace(
            &self.matrix,
            &dims,
            keep,
        )?))
    }

    pub fn tensor(&self, other: &DensityOperator) -> DensityOperator {
        Self::from_trusted(self.matrix.tensor(&other.matrix))
    }

    /// `U rho U^dagger` for a unitary on the whole register.
    pub fn conjugate(&self, unitary: &ComplexMatrix) -> Result<DensityOperator> {
        if unitary.rows() != self.dim() || unitary.cols() != self.dim() {
            return Err(QinfoError::DimensionMismatch(
                "unitary does not match the register".into(),
            ));
        }
        let dev = unitary.unitarity_deviation();
        if dev > super::UNITARY_TOL {
            return Err(QinfoError::NotUnitary(dev));
        }
        Ok(Self::from_trusted(
            &(unitary * &self.matrix) * &unitary.dagger(),
        ))
    }

    /// `<psi| rho |psi>`.
    pub fn fidelity_with_pure(&self, state: &PureState) -> Result<f64> {
        if state.dim() != self.dim() {
            return Err(QinfoError::DimensionMismatch(
                "state and operator differ in size".into(),
            ));
        }
        let col = state.to_column();
        Ok((&(&col.dagger() * &self.matrix) * &col)[(0, 0)].re)
    }
}

impl TryFrom<ComplexMatrix> for DensityOperator {
    type Error = QinfoError;

    fn try_from(m: ComplexMatrix) -> Result<Self> {
        DensityOperator::new(m)
    }
}

impl From<DensityOperator> for ComplexMatrix {
    fn from(rho: DensityOperator) -> Self {
        rho.matrix
    }
}

/// A pure state on `2n` qubits whose reduced state on the first `n` is `rho`.
///
/// Built as `sum_i sqrt(lambda_i) |v_i> (x) |i>` from the eigendecomposition;
/// the ancilla occupies the trailing `n` qubits.
pub fn purify(rho: &DensityOperator) -> PureState {
    let eig = rho.eigen();
    let n = rho.num_qubits();
    let dim = rho.dim();
    let mut amplitudes = vec![c(0.0, 0.0); dim * dim];
    for (i, &lambda) in eig.values.iter().enumerate() {
        let weight = lambda.max(0.0).sqrt();
        if weight == 0.0 {
            continue;
        }
        for s in 0..dim {
            amplitudes[(s << n) | i] += eig.vectors[(s, i)] * weight;
        }
    }
    PureState::from_unnormalized(amplitudes).expect("eigenvalues sum to one")
}
