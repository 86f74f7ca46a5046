use serde::{Deserialize, Serialize};

use crate::error::{QinfoError, Result};
use crate::linalg::{hermitian_eig, partial_transpose};
use crate::qstate::DensityOperator;

use super::Cut;

/// Partial-transpose eigenvalues at or above `-PPT_TOL` count as non-negative.
pub const PPT_TOL: f64 = 1e-9;

/// Exact separability verdict for a two-qubit state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PptVerdict {
    pub is_separable: bool,
    pub min_eigenvalue: f64,
}

/// Outcome of the partial-transpose test on larger registers, where a
/// positive partial transpose is necessary but not sufficient for
/// separability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PptClass {
    /// Positive partial transpose.
    Ppt,
    /// Negative partial transpose: certainly entangled.
    Npt,
}

fn min_pt_eigenvalue(rho: &DensityOperator, transposed: &[usize]) -> Result<f64> {
    let dims = vec![2; rho.num_qubits()];
    let pt = partial_transpose(rho.matrix(), &dims, transposed)?;
    Ok(hermitian_eig(&pt)?.min_value())
}

/// Peres-Horodecki test on a two-qubit state, transposing the second qubit.
/// At this dimension a positive partial transpose is equivalent to
/// separability.
pub fn ppt_check(rho: &DensityOperator) -> Result<PptVerdict> {
    if rho.num_qubits() != 2 {
        return Err(QinfoError::DimensionMismatch(format!(
            "exact PPT verdicts need two qubits, got {}",
            rho.num_qubits()
        )));
    }
    let min_eigenvalue = min_pt_eigenvalue(rho, &[1])?;
    Ok(PptVerdict {
        is_separable: min_eigenvalue >= -PPT_TOL,
        min_eigenvalue,
    })
}

/// Partial-transpose class across an arbitrary cut (side B is transposed).
pub fn ppt_class(rho: &DensityOperator, cut: &Cut) -> Result<(PptClass, f64)> {
    if cut.num_qubits() != rho.num_qubits() {
        return Err(QinfoError::DimensionMismatch(
            "cut does not match the register".into(),
        ));
    }
    let min = min_pt_eigenvalue(rho, &cut.side_b())?;
    let class = if min >= -PPT_TOL {
        PptClass::Ppt
    } else {
        PptClass::Npt
    };
    Ok((class, min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{bell_state, computational_basis_state, BellState};

    #[test]
    fn singlet_is_npt() {
        let v = ppt_check(&bell_state(BellState::PsiMinus).to_density()).unwrap();
        assert!(!v.is_separable);
        assert!((v.min_eigenvalue + 0.5).abs() < 1e-12);
    }

    #[test]
    fn classical_correlation_is_separable() {
        let rho = DensityOperator::diagonal(&[0.5, 0.0, 0.0, 0.5]).unwrap();
        let v = ppt_check(&rho).unwrap();
        assert!(v.is_separable && v.min_eigenvalue >= 0.0);
    }

    #[test]
    fn product_is_separable() {
        let a = DensityOperator::diagonal(&[0.3, 0.7]).unwrap();
        let b = crate::qstate::PureState::plus().to_density();
        assert!(ppt_check(&a.tensor(&b)).unwrap().is_separable);
    }

    #[test]
    fn wrong_dimension() {
        let rho = computational_basis_state(3, 0).unwrap().to_density();
        assert!(ppt_check(&rho).is_err());
        let (class, _) = ppt_class(&rho, &Cut::first(3, 1).unwrap()).unwrap();
        assert_eq!(class, PptClass::Ppt);
    }

    #[test]
    fn three_qubit_npt() {
        let rho = bell_state(BellState::PhiPlus)
            .tensor(&computational_basis_state(1, 0).unwrap())
            .to_density();
        let (class, min) = ppt_class(&rho, &Cut::first(3, 1).unwrap()).unwrap();
        assert_eq!(class, PptClass::Npt);
        assert!((min + 0.5).abs() < 1e-12);
        let (class, _) = ppt_class(&rho, &Cut::new(3, &[2]).unwrap()).unwrap();
        assert_eq!(class, PptClass::Ppt);
    }
}
