//! Quantum states of small qubit registers.
//!
//! Qubit 0 is the leftmost tensor factor and therefore the most significant
//! bit of a computational-basis index: in a 3-qubit register, index 5 is
//! `|101>`. The same convention orders the outcome index of a measurement
//! over several targets (the first listed target is the high bit).
//!
//! States are compared with [`PureState::fidelity`], never amplitude by
//! amplitude, because protocol corrections may leave an unobservable global
//! phase behind.

mod bell;
mod density;
pub mod gates;
mod measure;

use serde::{Deserialize, Serialize};

use crate::error::{QinfoError, Result};
use crate::linalg::{c, Complex, ComplexMatrix};

pub use bell::{bell_state, BellState};
pub use density::{purify, DensityOperator};
pub use measure::MeasurementRecord;

/// Tolerance on `sum |amplitude|^2 = 1`.
pub const NORM_TOL: f64 = 1e-10;
/// Tolerance on `max |U^dagger U - I|` for gates.
pub const UNITARY_TOL: f64 = 1e-10;
/// Largest register the simulator accepts.
pub const MAX_QUBITS: usize = 16;

/// Normalized state vector of an `n`-qubit register.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateRepr", into = "StateRepr")]
pub struct PureState {
    num_qubits: usize,
    amplitudes: Vec<Complex>,
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(QinfoError::DimensionMismatch(format!(
            "state length {len} is not 2^n for n >= 1"
        )));
    }
    let n = len.trailing_zeros() as usize;
    if n > MAX_QUBITS {
        return Err(QinfoError::DimensionMismatch(format!(
            "{n} qubits exceeds the {MAX_QUBITS}-qubit limit"
        )));
    }
    Ok(n)
}

impl PureState {
    /// Wraps amplitudes that are already normalized within [`NORM_TOL`].
    pub fn new(amplitudes: Vec<Complex>) -> Result<Self> {
        let num_qubits = qubits_for_len(amplitudes.len())?;
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(QinfoError::NonFinite);
        }
        let norm_sqr: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(QinfoError::NotNormalized(norm_sqr));
        }
        Ok(PureState {
            num_qubits,
            amplitudes,
        })
    }

    /// Normalizes the given amplitudes first.
    pub fn from_unnormalized(mut amplitudes: Vec<Complex>) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(QinfoError::NotNormalized(norm * norm));
        }
        for z in &mut amplitudes {
            *z /= norm;
        }
        Self::new(amplitudes)
    }

    /// Real amplitudes, normalized.
    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::from_unnormalized(amplitudes.iter().map(|&x| c(x, 0.0)).collect())
    }

    /// `cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`.
    pub fn from_bloch_angles(theta: f64, phi: f64) -> Self {
        let (s, co) = (theta / 2.0).sin_cos();
        PureState {
            num_qubits: 1,
            amplitudes: vec![c(co, 0.0), Complex::from_polar(s, phi)],
        }
    }

    /// `|+> = (|0> + |1>)/sqrt 2`.
    pub fn plus() -> Self {
        Self::from_real(&[1.0, 1.0]).expect("valid")
    }

    /// `|-> = (|0> - |1>)/sqrt 2`.
    pub fn minus() -> Self {
        Self::from_real(&[1.0, -1.0]).expect("valid")
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex {
        self.amplitudes[index]
    }

    pub fn to_column(&self) -> ComplexMatrix {
        ComplexMatrix::column(&self.amplitudes).expect("non-empty")
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<Complex> {
        if self.dim() != other.dim() {
            return Err(QinfoError::DimensionMismatch(format!(
                "inner product of {}- and {}-qubit states",
                self.num_qubits, other.num_qubits
            )));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|<self|other>|^2`, insensitive to global phase.
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr().min(1.0))
    }

    /// `self (x) other`; `self` supplies the leading qubits.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        PureState {
            num_qubits: self.num_qubits + other.num_qubits,
            amplitudes,
        }
    }

    /// `|psi><psi|`.
    pub fn to_density(&self) -> DensityOperator {
        DensityOperator::from_pure(self)
    }

    /// Reduced state of the listed qubits.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityOperator> {
        self.to_density().partial_trace(keep)
    }

    pub(crate) fn check_targets(&self, targets: &[usize]) -> Result<()> {
        if targets.is_empty() {
            return Err(QinfoError::InvalidTargets("no target qubits".into()));
        }
        for (i, &t) in targets.iter().enumerate() {
            if t >= self.num_qubits {
                return Err(QinfoError::IndexOutOfRange {
                    index: t,
                    bound: self.num_qubits,
                });
            }
            if targets[..i].contains(&t) {
                return Err(QinfoError::InvalidTargets(format!(
                    "qubit {t} listed twice"
                )));
            }
        }
        Ok(())
    }

    /// Flat-index offsets of the `2^k` sub-basis states on `targets`,
    /// first target most significant.
    fn target_offsets(&self, targets: &[usize]) -> Vec<usize> {
        let n = self.num_qubits;
        let k = targets.len();
        (0..1usize << k)
            .map(|s| {
                targets
                    .iter()
                    .enumerate()
                    .map(|(j, &t)| ((s >> (k - 1 - j)) & 1) << (n - 1 - t))
                    .sum()
            })
            .collect()
    }

    fn target_mask(&self, targets: &[usize]) -> usize {
        targets
            .iter()
            .map(|&t| 1usize << (self.num_qubits - 1 - t))
            .sum()
    }

    /// Evolves the register by `gate` acting on `targets` (identity elsewhere).
    ///
    /// `gate` must be a `2^k x 2^k` unitary where `k = targets.len()`; its
    /// row index is read with the first target as the most significant bit.
    pub fn apply_gate(&self, gate: &ComplexMatrix, targets: &[usize]) -> Result<PureState> {
        self.check_targets(targets)?;
        let sub = 1usize << targets.len();
        if gate.rows() != sub || gate.cols() != sub {
            return Err(QinfoError::DimensionMismatch(format!(
                "{}x{} gate on {} target qubit(s)",
                gate.rows(),
                gate.cols(),
                targets.len()
            )));
        }
        let dev = gate.unitarity_deviation();
        if dev > UNITARY_TOL {
            return Err(QinfoError::NotUnitary(dev));
        }
        Ok(self.apply_unchecked(gate, targets))
    }

    pub(crate) fn apply_unchecked(&self, gate: &ComplexMatrix, targets: &[usize]) -> PureState {
        let offsets = self.target_offsets(targets);
        let mask = self.target_mask(targets);
        let sub = offsets.len();
        let mut out = vec![c(0.0, 0.0); self.dim()];
        let mut gathered = vec![c(0.0, 0.0); sub];
        for base in (0..self.dim()).filter(|b| b & mask == 0) {
            for (g, &o) in gathered.iter_mut().zip(&offsets) {
                *g = self.amplitudes[base + o];
            }
            for (r, &o) in offsets.iter().enumerate() {
                out[base + o] = (0..sub).map(|s| gate[(r, s)] * gathered[s]).sum();
            }
        }
        PureState {
            num_qubits: self.num_qubits,
            amplitudes: out,
        }
    }

    /// Reorders qubits: qubit `q` of the result is qubit `order[q]` of `self`.
    pub fn permute_qubits(&self, order: &[usize]) -> Result<PureState> {
        if order.len() != self.num_qubits {
            return Err(QinfoError::InvalidTargets(format!(
                "permutation of length {} for {} qubits",
                order.len(),
                self.num_qubits
            )));
        }
        self.check_targets(order)?;
        let n = self.num_qubits;
        let mut out = vec![c(0.0, 0.0); self.dim()];
        for (idx, z) in self.amplitudes.iter().enumerate() {
            let mut new_idx = 0usize;
            for (q, &src) in order.iter().enumerate() {
                let bit = (idx >> (n - 1 - src)) & 1;
                new_idx |= bit << (n - 1 - q);
            }
            out[new_idx] = *z;
        }
        Ok(PureState {
            num_qubits: n,
            amplitudes: out,
        })
    }

    /// Exchanges the tensor factors on `subsystem_a` and `subsystem_b`
    /// (qubit `subsystem_a[j]` with `subsystem_b[j]`).
    pub fn swap_states(&self, subsystem_a: &[usize], subsystem_b: &[usize]) -> Result<PureState> {
        if subsystem_a.len() != subsystem_b.len() {
            return Err(QinfoError::InvalidTargets(format!(
                "cannot swap a {}-qubit subsystem with a {}-qubit one",
                subsystem_a.len(),
                subsystem_b.len()
            )));
        }
        let all: Vec<usize> = subsystem_a.iter().chain(subsystem_b).copied().collect();
        self.check_targets(&all)?;
        let mut order: Vec<usize> = (0..self.num_qubits).collect();
        for (&a, &b) in subsystem_a.iter().zip(subsystem_b) {
            order.swap(a, b);
        }
        self.permute_qubits(&order)
    }
}

/// `|index>` on `num_qubits` qubits.
pub fn computational_basis_state(num_qubits: usize, index: usize) -> Result<PureState> {
    if num_qubits == 0 || num_qubits > MAX_QUBITS {
        return Err(QinfoError::DimensionMismatch(format!(
            "unsupported register size {num_qubits}"
        )));
    }
    let dim = 1usize << num_qubits;
    if index >= dim {
        return Err(QinfoError::IndexOutOfRange { index, bound: dim });
    }
    let mut amplitudes = vec![c(0.0, 0.0); dim];
    amplitudes[index] = c(1.0, 0.0);
    Ok(PureState {
        num_qubits,
        amplitudes,
    })
}

/// Wire form `{num_qubits, amplitudes: [[re, im], ...]}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateRepr {
    num_qubits: usize,
    amplitudes: Vec<[f64; 2]>,
}

impl TryFrom<StateRepr> for PureState {
    type Error = QinfoError;

    fn try_from(repr: StateRepr) -> Result<Self> {
        let state = PureState::new(repr.amplitudes.iter().map(|&[re, im]| c(re, im)).collect())?;
        if state.num_qubits != repr.num_qubits {
            return Err(QinfoError::DimensionMismatch(format!(
                "num_qubits {} disagrees with {} amplitudes",
                repr.num_qubits,
                state.dim()
            )));
        }
        Ok(state)
    }
}

impl From<PureState> for StateRepr {
    fn from(s: PureState) -> Self {
        StateRepr {
            num_qubits: s.num_qubits,
            amplitudes: s.amplitudes.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl PureState {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| QinfoError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("state serialization cannot fail")
    }
}
