//! Standard single- and two-qubit gates.
//!
//! Two-qubit gates list the control first: `cnot()` acting on targets
//! `[a, b]` flips `b` when `a` is 1.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::linalg::{c, ComplexMatrix};

pub fn identity() -> ComplexMatrix {
    ComplexMatrix::identity(2)
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap()
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]]).unwrap()
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, -1.0]]).unwrap()
}

pub fn hadamard() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        [FRAC_1_SQRT_2, FRAC_1_SQRT_2],
        [FRAC_1_SQRT_2, -FRAC_1_SQRT_2],
    ])
    .unwrap()
}

/// Phase gate `diag(1, i)`.
pub fn phase_s() -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&[c(1.0, 0.0), c(0.0, 1.0)])
}

/// Rotation about the y axis, `exp(-i theta Y / 2)`.
pub fn ry(theta: f64) -> ComplexMatrix {
    let (s, co) = (theta / 2.0).sin_cos();
    ComplexMatrix::from_real_rows(&[[co, -s], [s, co]]).unwrap()
}

pub fn cnot() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 1.0, 0.0],
    ])
    .unwrap()
}

pub fn swap() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ])
    .unwrap()
}

/// Basis change for measuring `sigma_x`: columns are `|+>` and `|->`.
pub fn x_basis() -> ComplexMatrix {
    hadamard()
}

/// Basis change for measuring `sigma_y`: columns are `(|0> + i|1>)/sqrt 2`
/// and `(|0> - i|1>)/sqrt 2`.
pub fn y_basis() -> ComplexMatrix {
    &phase_s() * &hadamard()
}

/// Basis for measuring spin along the direction at angle `theta` from z in
/// the z-x plane. Column 0 is the +1 eigenvector of
/// `cos(theta) Z + sin(theta) X`.
pub fn zx_plane_basis(theta: f64) -> ComplexMatrix {
    ry(theta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_gates_unitary() {
        for g in [
            identity(),
            pauli_x(),
            pauli_y(),
            pauli_z(),
            hadamard(),
            phase_s(),
            ry(0.3),
            cnot(),
            swap(),
            y_basis(),
        ] {
            assert!(g.is_unitary(1e-12));
        }
    }

    #[test]
    fn y_basis_columns_are_sigma_y_eigenvectors() {
        let b = y_basis();
        let sy = pauli_y();
        let plus_i = ComplexMatrix::column(&b.col(0)).unwrap();
        let minus_i = ComplexMatrix::column(&b.col(1)).unwrap();
        assert!((&sy * &plus_i).max_abs_diff(&plus_i) < 1e-12);
        assert!((&sy * &minus_i).max_abs_diff(&minus_i.scale_real(-1.0)) < 1e-12);
    }

    #[test]
    fn zx_plane_basis_eigenvector() {
        let theta: f64 = 0.7;
        let obs = &pauli_z().scale_real(theta.cos()) + &pauli_x().scale_real(theta.sin());
        let v = ComplexMatrix::column(&zx_plane_basis(theta).col(0)).unwrap();
        assert!((&obs * &v).max_abs_diff(&v) < 1e-12);
    }
}
