use crate::error::{QinfoError, Result};
use crate::linalg::{c, ComplexMatrix};
use crate::rng::SimRng;

use super::{PureState, UNITARY_TOL};

/// Result of a projective measurement.
///
/// `outcome_index` reads the measured qubits as a binary number, first target
/// most significant. `post_state` is the renormalized projection.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub outcome_index: usize,
    pub probability: f64,
    pub post_state: PureState,
}

impl MeasurementRecord {
    /// Outcome bit for the `j`-th measured target (of `k` targets).
    pub fn bit(&self, j: usize, k: usize) -> u8 {
        ((self.outcome_index >> (k - 1 - j)) & 1) as u8
    }
}

impl PureState {
    fn outcome_of(&self, index: usize, targets: &[usize]) -> usize {
        let n = self.num_qubits;
        let k = targets.len();
        targets
            .iter()
            .enumerate()
            .map(|(j, &t)| ((index >> (n - 1 - t)) & 1) << (k - 1 - j))
            .sum()
    }

    /// Born-rule distribution over computational outcomes on `targets`.
    pub fn outcome_probabilities(&self, targets: &[usize]) -> Result<Vec<f64>> {
        self.check_targets(targets)?;
        let mut probs = vec![0.0; 1 << targets.len()];
        for (i, z) in self.amplitudes.iter().enumerate() {
            probs[self.outcome_of(i, targets)] += z.norm_sqr();
        }
        Ok(probs)
    }

    /// Projective measurement of `targets` in the computational basis.
    ///
    /// Draws one uniform variate from `rng`.
    pub fn measure_computational(
        &self,
        targets: &[usize],
        rng: &mut SimRng,
    ) -> Result<MeasurementRecord> {
        let probs = self.outcome_probabilities(targets)?;
        let u = rng.next_f64();
        let mut acc = 0.0;
        let mut outcome = None;
        for (o, &p) in probs.iter().enumerate() {
            acc += p;
            if p > 0.0 && u < acc {
                outcome = Some(o);
                break;
            }
        }
        // Rounding can leave u above the accumulated total; fall back to the
        // last outcome that is actually possible.
        let outcome = outcome.unwrap_or_else(|| {
            probs
                .iter()
                .rposition(|&p| p > 0.0)
                .expect("normalized state has support")
        });
        Ok(self.project(targets, outcome, probs[outcome]))
    }

    /// Collapses onto the given outcome. `probability` must be its Born weight.
    fn project(&self, targets: &[usize], outcome: usize, probability: f64) -> MeasurementRecord {
        let scale = 1.0 / probability.sqrt();
        let amplitudes = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, z)| {
                if self.outcome_of(i, targets) == outcome {
                    z * scale
                } else {
                    c(0.0, 0.0)
                }
            })
            .collect();
        MeasurementRecord {
            outcome_index: outcome,
            probability,
            post_state: PureState {
                num_qubits: self.num_qubits,
                amplitudes,
            },
        }
    }

    /// Post-measurement state for a chosen outcome, or `None` if it has zero
    /// probability.
    pub fn postselect(
        &self,
        targets: &[usize],
        outcome: usize,
    ) -> Result<Option<MeasurementRecord>> {
        let probs = self.outcome_probabilities(targets)?;
        if outcome >= probs.len() {
            return Err(QinfoError::IndexOutOfRange {
                index: outcome,
                bound: probs.len(),
            });
        }
        Ok((probs[outcome] > 0.0).then(|| self.project(targets, outcome, probs[outcome])))
    }

    /// State of the qubits not in `measured`, conditioned on `measured`
    /// reading `outcome`. Remaining qubits keep their relative order.
    ///
    /// Exact when the register is a product across that split, as it is
    /// right after a computational measurement of `measured`.
    pub fn residual_state(&self, measured: &[usize], outcome: usize) -> Result<PureState> {
        self.check_targets(measured)?;
        if measured.len() == self.num_qubits {
            return Err(QinfoError::InvalidTargets("no qubits would remain".into()));
        }
        let amplitudes: Vec<_> = self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| self.outcome_of(*i, measured) == outcome)
            .map(|(_, z)| *z)
            .collect();
        // Remaining-qubit order: filtering keeps indices ascending, and the
        // measured bits are fixed, so the k-th kept entry is remaining index k.
        PureState::from_unnormalized(amplitudes)
    }

    /// Measures `targets` in the orthonormal basis given by the columns of
    /// `basis`: rotate by `basis^dagger`, read out, rotate back.
    ///
    /// Outcome `o` corresponds to column `o` of `basis`.
    pub fn measure_in_basis(
        &self,
        targets: &[usize],
        basis: &ComplexMatrix,
        rng: &mut SimRng,
    ) -> Result<MeasurementRecord> {
        self.check_targets(targets)?;
        let sub = 1usize << targets.len();
        if basis.rows() != sub || basis.cols() != sub {
            return Err(QinfoError::DimensionMismatch(format!(
                "{}x{} basis for {} target qubit(s)",
                basis.rows(),
                basis.cols(),
                targets.len()
            )));
        }
        let dev = basis.unitarity_deviation();
        if dev > UNITARY_TOL {
            return Err(QinfoError::NotUnitary(dev));
        }
        let rotated = self.apply_unchecked(&basis.dagger(), targets);
        let mut record = rotated.measure_computational(targets, rng)?;
        record.post_state = record.post_state.apply_unchecked(basis, targets);
        Ok(record)
    }
}
