use crate::error::{QinfoError, Result};
use crate::linalg::Complex;
use crate::qstate::{DensityOperator, PureState};

/// `|<alpha|beta>|` and whether a unitary could copy both states: only
/// possible for identical or orthogonal pairs, since unitarity forces
/// `<alpha|beta> = <alpha|beta>^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CloningConsistency {
    pub overlap: Complex,
    pub clonable_pair: bool,
}

pub const CLONING_TOL: f64 = 1e-9;

pub fn cloning_consistency(alpha: &PureState, beta: &PureState) -> Result<CloningConsistency> {
    let overlap = alpha.inner(beta)?;
    let m = overlap.norm();
    Ok(CloningConsistency {
        overlap,
        clonable_pair: m <= CLONING_TOL || (m - 1.0).abs() <= CLONING_TOL,
    })
}

/// Two states can be broadcast together iff they commute.
pub fn broadcastable(rho_a: &DensityOperator, rho_b: &DensityOperator) -> Result<bool> {
    if rho_a.dim() != rho_b.dim() {
        return Err(QinfoError::DimensionMismatch(
            "states differ in size".into(),
        ));
    }
    Ok(rho_a.matrix().commutator(rho_b.matrix())?.max_abs() <= CLONING_TOL)
}

/// `<alpha|beta> - <alpha|beta>^2`, zero exactly for clonable pairs.
pub fn cloning_defect(alpha: &PureState, beta: &PureState) -> Result<Complex> {
    let o = alpha.inner(beta)?;
    Ok(o - o * o)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::computational_basis_state;
    use crate::rng::SimRng;

    fn zero() -> PureState {
        computational_basis_state(1, 0).unwrap()
    }

    fn one() -> PureState {
        computational_basis_state(1, 1).unwrap()
    }

    #[test]
    fn cloning_pairs() {
        assert!(cloning_consistency(&zero(), &one()).unwrap().clonable_pair);
        assert!(cloning_consistency(&zero(), &zero()).unwrap().clonable_pair);
        let r = cloning_consistency(&zero(), &PureState::plus()).unwrap();
        assert!(!r.clonable_pair);
        assert!((r.overlap.norm() - 0.5f64.sqrt()).abs() < 1e-12);
        assert!(cloning_defect(&zero(), &PureState::plus()).unwrap().norm() > 0.2);
        assert!(cloning_defect(&zero(), &one()).unwrap().norm() < 1e-15);
    }

    #[test]
    fn broadcasting() {
        let a = DensityOperator::diagonal(&[0.7, 0.3]).unwrap();
        let b = DensityOperator::diagonal(&[0.2, 0.8]).unwrap();
        assert!(broadcastable(&a, &b).unwrap());
        assert!(!broadcastable(&zero().to_density(), &PureState::plus().to_density()).unwrap());
        let r = crate::random::random_density(2, &mut SimRng::seed_from_u64(1));
        assert!(broadcastable(&r, &r).unwrap());
        assert!(broadcastable(&a, &r).is_err());
    }
}
