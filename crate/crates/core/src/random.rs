//! Random states and unitaries for Monte-Carlo checks.

use crate::linalg::{c, Complex, ComplexMatrix};
use crate::qstate::{DensityOperator, PureState};
use crate::rng::SimRng;

fn gaussian_complex(rng: &mut SimRng) -> Complex {
    c(rng.next_gaussian(), rng.next_gaussian())
}

/// Haar-distributed pure state on `num_qubits` qubits.
pub fn haar_state(num_qubits: usize, rng: &mut SimRng) -> PureState {
    loop {
        let amps: Vec<Complex> = (0..1usize << num_qubits)
            .map(|_| gaussian_complex(rng))
            .collect();
        if let Ok(s) = PureState::from_unnormalized(amps) {
            return s;
        }
    }
}

/// Haar-distributed unitary: Gram-Schmidt on a complex Ginibre matrix.
pub fn haar_unitary(dim: usize, rng: &mut SimRng) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<Complex> = (0..dim).map(|_| gaussian_complex(rng)).collect();
        for _ in 0..2 {
            for u in &cols {
                let proj: Complex = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= proj * ui;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    let mut m = ComplexMatrix::zeros(dim, dim);
    for (j, col) in cols.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            m[(i, j)] = *z;
        }
    }
    m
}

/// Random mixed state: partial trace of a Haar state on twice as many qubits.
pub fn random_density(num_qubits: usize, rng: &mut SimRng) -> DensityOperator {
    let joint = haar_state(2 * num_qubits, rng);
    let keep: Vec<usize> = (0..num_qubits).collect();
    joint.reduced_density(&keep).expect("valid cut")
}

/// Uniform probability vector of length `n` (flat Dirichlet).
pub fn random_distribution(n: usize, rng: &mut SimRng) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -(1.0 - rng.next_f64()).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}
