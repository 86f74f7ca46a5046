use crate::error::{QinfoError, Result};
use crate::qstate::DensityOperator;

const DISTRIBUTION_TOL: f64 = 1e-10;
/// Eigenvalues in `[-EIGEN_CLAMP, 0)` are treated as zero by the entropies.
pub const EIGEN_CLAMP: f64 = 1e-9;

fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

/// `H(p) = -sum p_i log2 p_i`, in bits, with `0 log 0 = 0`.
pub fn shannon_entropy(probabilities: &[f64]) -> Result<f64> {
    if probabilities.is_empty() {
        return Err(QinfoError::InvalidDistribution("empty distribution".into()));
    }
    if let Some(p) = probabilities.iter().find(|p| !p.is_finite() || **p < 0.0) {
        return Err(QinfoError::InvalidDistribution(format!(
            "entry {p} is not a probability"
        )));
    }
    let total: f64 = probabilities.iter().sum();
    if (total - 1.0).abs() > DISTRIBUTION_TOL {
        return Err(QinfoError::InvalidDistribution(format!("sums to {total}")));
    }
    Ok(probabilities.iter().map(|&p| plogp(p)).sum())
}

/// Binary entropy `h2(p)`.
pub fn binary_entropy(p: f64) -> f64 {
    plogp(p) + plogp(1.0 - p)
}

/// Entropy of a spectrum, clamping tiny negative eigenvalues to zero.
pub fn spectral_entropy(eigenvalues: &[f64]) -> Result<f64> {
    let mut h = 0.0;
    for &lambda in eigenvalues {
        if lambda < -EIGEN_CLAMP {
            return Err(QinfoError::InvalidDensity(format!(
                "eigenvalue {lambda:e} below clamp"
            )));
        }
        h += plogp(lambda.max(0.0));
    }
    Ok(h)
}

/// `S(rho) = -Tr rho log2 rho`, in qubits.
pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    spectral_entropy(&rho.eigen().values)
}

/// `log2(dimension)`: the most classical information a system of that
/// dimension can yield to any measurement.
pub fn max_accessible_info(dimension: usize) -> Result<f64> {
    if dimension == 0 {
        return Err(QinfoError::InvalidConfig(
            "dimension must be at least 1".into(),
        ));
    }
    Ok((dimension as f64).log2())
}

/// `I(X;Y)` in bits for a joint count or probability table (rows are `X`).
pub fn mutual_information(joint: &[Vec<f64>]) -> Result<f64> {
    let total: f64 = joint.iter().flatten().sum();
    if total.is_nan() || total <= 0.0 || joint.iter().flatten().any(|&x| x < 0.0) {
        return Err(QinfoError::InvalidDistribution(
            "joint table must be non-negative and non-empty".into(),
        ));
    }
    let cols = joint.first().map_or(0, Vec::len);
    if joint.iter().any(|r| r.len() != cols) {
        return Err(QinfoError::LengthMismatch("ragged joint table".into()));
    }
    let px: Vec<f64> = joint
        .iter()
        .map(|r| r.iter().sum::<f64>() / total)
        .collect();
    let py: Vec<f64> = (0..cols)
        .map(|j| joint.iter().map(|r| r[j]).sum::<f64>() / total)
        .collect();
    let mut mi = 0.0;
    for (i, row) in joint.iter().enumerate() {
        for (j, &n) in row.iter().enumerate() {
            let pxy = n / total;
            if pxy > 0.0 {
                mi += pxy * (pxy / (px[i] * py[j])).log2();
            }
        }
    }
    Ok(mi.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, ComplexMatrix};
    use crate::qstate::{bell_state, BellState, PureState};

    #[test]
    fn shannon_examples() {
        assert_eq!(shannon_entropy(&[0.5, 0.5]).unwrap(), 1.0);
        assert_eq!(shannon_entropy(&[1.0, 0.0]).unwrap(), 0.0);
        assert_eq!(shannon_entropy(&[0.25; 4]).unwrap(), 2.0);
        assert!(shannon_entropy(&[0.5, 0.6]).is_err());
        assert!(shannon_entropy(&[1.5, -0.5]).is_err());
        assert!(shannon_entropy(&[]).is_err());
    }

    #[test]
    fn von_neumann_examples() {
        let pure = PureState::from_bloch_angles(0.3, 0.2).to_density();
        assert!(von_neumann_entropy(&pure).unwrap().abs() < 1e-12);
        let mixed = DensityOperator::maximally_mixed(1);
        assert!((von_neumann_entropy(&mixed).unwrap() - 1.0).abs() < 1e-12);
        // Oracle: -(3/4) log2(3/4) - (1/4) log2(1/4), evaluated term by term.
        let oracle = -0.75 * (0.75f64).ln() / 2f64.ln() - 0.25 * (0.25f64).ln() / 2f64.ln();
        let rho = DensityOperator::diagonal(&[0.75, 0.25]).unwrap();
        let s = von_neumann_entropy(&rho).unwrap();
        assert!((s - oracle).abs() < 1e-12);
        assert!((s - 0.8113).abs() < 1e-4);
    }

    #[test]
    fn reduced_bell_state_is_one_ebit() {
        let r = bell_state(BellState::PhiMinus)
            .reduced_density(&[1])
            .unwrap();
        assert!((von_neumann_entropy(&r).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn clamp_and_hard_error() {
        assert_eq!(spectral_entropy(&[1.0, -5e-10]).unwrap(), 0.0);
        assert!(spectral_entropy(&[1.1, -0.1]).is_err());
    }

    #[test]
    fn log_dimension_bound() {
        assert_eq!(max_accessible_info(2).unwrap(), 1.0);
        assert_eq!(max_accessible_info(1).unwrap(), 0.0);
        assert_eq!(max_accessible_info(8).unwrap(), 3.0);
        assert!(max_accessible_info(0).is_err());
    }

    #[test]
    fn mutual_information_tables() {
        assert!(
            (mutual_information(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap() - 1.0).abs() < 1e-12
        );
        assert!(
            mutual_information(&[vec![1.0, 1.0], vec![1.0, 1.0]])
                .unwrap()
                .abs()
                < 1e-12
        );
        assert!(mutual_information(&[vec![0.0, 0.0]]).is_err());
    }

    #[test]
    fn entropy_unchanged_by_complex_off_diagonals() {
        let m =
            ComplexMatrix::from_rows(&[[c(0.5, 0.0), c(0.0, 0.5)], [c(0.0, -0.5), c(0.5, 0.0)]])
                .unwrap();
        let rho = DensityOperator::new(m).unwrap();
        assert!(von_neumann_entropy(&rho).unwrap().abs() < 1e-9);
    }
}
