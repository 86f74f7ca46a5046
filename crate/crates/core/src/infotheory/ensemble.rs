use serde::{Deserialize, Serialize};

use crate::error::{QinfoError, Result};
use crate::linalg::ComplexMatrix;
use crate::qstate::{DensityOperator, PureState};
use crate::rng::SimRng;

use super::entropy::{mutual_information, von_neumann_entropy};

const PROBABILITY_TOL: f64 = 1e-10;

/// A source that emits `states[i]` with probability `probabilities[i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EnsembleRepr", into = "EnsembleRepr")]
pub struct Ensemble {
    probabilities: Vec<f64>,
    states: Vec<DensityOperator>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnsembleRepr {
    probabilities: Vec<f64>,
    states: Vec<DensityOperator>,
}

impl TryFrom<EnsembleRepr> for Ensemble {
    type Error = QinfoError;

    fn try_from(r: EnsembleRepr) -> Result<Self> {
        Ensemble::new(r.probabilities, r.states)
    }
}

impl From<Ensemble> for EnsembleRepr {
    fn from(e: Ensemble) -> Self {
        EnsembleRepr {
            probabilities: e.probabilities,
            states: e.states,
        }
    }
}

impl Ensemble {
    pub fn new(probabilities: Vec<f64>, states: Vec<DensityOperator>) -> Result<Self> {
        if probabilities.len() != states.len() || states.is_empty() {
            return Err(QinfoError::LengthMismatch(format!(
                "{} probabilities for {} states",
                probabilities.len(),
                states.len()
            )));
        }
        if let Some(p) = probabilities.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
            return Err(QinfoError::InvalidDistribution(format!(
                "weight {p} is not positive"
            )));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > PROBABILITY_TOL {
            return Err(QinfoError::InvalidDistribution(format!(
                "weights sum to {total}"
            )));
        }
        let n = states[0].num_qubits();
        if states.iter().any(|s| s.num_qubits() != n) {
            return Err(QinfoError::DimensionMismatch(
                "ensemble states differ in size".into(),
            ));
        }
        Ok(Ensemble {
            probabilities,
            states,
        })
    }

    pub fn from_pure(probabilities: Vec<f64>, states: &[PureState]) -> Result<Self> {
        Self::new(
            probabilities,
            states.iter().map(PureState::to_density).collect(),
        )
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn states(&self) -> &[DensityOperator] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// `sum_i p_i rho_i`.
    pub fn average_state(&self) -> DensityOperator {
        let pairs: Vec<(f64, &DensityOperator)> = self
            .probabilities
            .iter()
            .copied()
            .zip(&self.states)
            .collect();
        DensityOperator::mixture(&pairs).expect("validated ensemble")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| QinfoError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("ensemble serialization cannot fail")
    }
}

/// Holevo quantity `chi = S(sum p_i rho_i) - sum p_i S(rho_i)`.
pub fn holevo_chi(ensemble: &Ensemble) -> Result<f64> {
    let avg = von_neumann_entropy(&ensemble.average_state())?;
    let mut conditional = 0.0;
    for (p, rho) in ensemble.probabilities.iter().zip(&ensemble.states) {
        conditional += p * von_neumann_entropy(rho)?;
    }
    Ok((avg - conditional).max(0.0))
}

/// Born probabilities of measuring `rho` in the basis given by the columns
/// of `basis`.
fn basis_probabilities(rho: &DensityOperator, basis: &ComplexMatrix) -> Vec<f64> {
    let rotated = &(&basis.dagger() * rho.matrix()) * basis;
    (0..rotated.rows())
        .map(|i| rotated[(i, i)].re.max(0.0))
        .collect()
}

/// Samples `samples` (letter, outcome) pairs: a letter drawn from the
/// ensemble, its state measured in `basis`. Returns the joint count table.
pub fn sample_measurement(
    ensemble: &Ensemble,
    basis: &ComplexMatrix,
    samples: usize,
    rng: &mut SimRng,
) -> Result<Vec<Vec<f64>>> {
    let dim = ensemble.states[0].dim();
    if basis.rows() != dim || basis.cols() != dim {
        return Err(QinfoError::DimensionMismatch(
            "measurement basis does not match the ensemble".into(),
        ));
    }
    let dev = basis.unitarity_deviation();
    if dev > crate::qstate::UNITARY_TOL {
        return Err(QinfoError::NotUnitary(dev));
    }
    let conditionals: Vec<Vec<f64>> = ensemble
        .states
        .iter()
        .map(|r| basis_probabilities(r, basis))
        .collect();
    let mut counts = vec![vec![0.0; dim]; ensemble.len()];
    for _ in 0..samples {
        let letter = draw(&ensemble.probabilities, rng);
        let outcome = draw(&conditionals[letter], rng);
        counts[letter][outcome] += 1.0;
    }
    Ok(counts)
}

/// Plug-in estimate of the mutual information between the ensemble letter
/// and the outcome of measuring in `basis`.
pub fn measured_mutual_information(
    ensemble: &Ensemble,
    basis: &ComplexMatrix,
    samples: usize,
    rng: &mut SimRng,
) -> Result<f64> {
    mutual_information(&sample_measurement(ensemble, basis, samples, rng)?)
}

fn draw(weights: &[f64], rng: &mut SimRng) -> usize {
    let u = rng.next_f64() * weights.iter().sum::<f64>();
    let mut acc = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        acc += w;
        if w > 0.0 && u < acc {
            return i;
        }
    }
    weights
        .iter()
        .rposition(|&w| w > 0.0)
        .expect("some weight is positive")
}
