use super::{c, Complex, ComplexMatrix, HERMITIAN_TOL};
use crate::error::{QinfoError, Result};

const OFF_DIAGONAL_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Spectrum of a Hermitian matrix.
///
/// `values` are sorted descending (ties keep the original diagonal order) and
/// column `k` of `vectors` is the eigenvector for `values[k]`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V diag(values) V^dagger`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let diag: Vec<Complex> = self.values.iter().map(|&v| c(v, 0.0)).collect();
        let d = ComplexMatrix::from_diagonal(&diag);
        &(&self.vectors * &d) * &self.vectors.dagger()
    }

    pub fn min_value(&self) -> f64 {
        *self.values.last().expect("non-empty spectrum")
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Sweeps continue until the off-diagonal Frobenius norm drops below `1e-12`
/// (scaled by the matrix norm when that exceeds one) or 100 sweeps have run.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let dev = m.hermitian_deviation();
    if dev > HERMITIAN_TOL {
        return Err(QinfoError::NotHermitian(dev));
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut v = ComplexMatrix::identity(n);
    let threshold = OFF_DIAGONAL_TOL * m.frobenius_norm().max(1.0);

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    // Stable sort: equal eigenvalues stay in diagonal order.
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).expect("finite eigenvalues"));

    let mut vectors = ComplexMatrix::zeros(n, n);
    for (k, &src) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, k)] = v[(r, src)];
        }
    }
    Ok(HermitianEigen {
        values: order.iter().map(|&i| diag[i]).collect(),
        vectors,
    })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Annihilates `a[p, q]` with `a <- G^dagger a G`, `v <- v G`, where `G`
/// first rotates the phase of index `q` so the pivot is real and then applies
/// a real plane rotation.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g < 1e-300 {
        return;
    }
    let phase = apq / g; // e^{i phi}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * g);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let cos = 1.0 / (t * t + 1.0).sqrt();
    let sin = t * cos;
    let n = a.rows();
    let e_minus = phase.conj();

    // Columns: a <- a G
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * cos - akq * e_minus * sin;
        a[(k, q)] = akp * sin + akq * e_minus * cos;
    }
    // Rows: a <- G^dagger a
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * cos - aqk * phase * sin;
        a[(q, k)] = apk * sin + aqk * phase * cos;
    }
    a[(p, q)] = c(0.0, 0.0);
    a[(q, p)] = c(0.0, 0.0);
    a[(p, p)] = c(a[(p, p)].re, 0.0);
    a[(q, q)] = c(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * cos - vkq * e_minus * sin;
        v[(k, q)] = vkp * sin + vkq * e_minus * cos;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Characteristic polynomial coefficients by Faddeev-LeVerrier, highest
    /// degree first. Independent of the Jacobi path.
    fn char_poly(m: &ComplexMatrix) -> Vec<Complex> {
        let n = m.rows();
        let mut coeffs = vec![c(1.0, 0.0)];
        let mut mk = ComplexMatrix::zeros(n, n);
        let id = ComplexMatrix::identity(n);
        for k in 1..=n {
            let prev = *coeffs.last().unwrap();
            mk = &(m * &mk) + &id.scale(prev);
            let am = m * &mk;
            let ck = -am.trace() / (k as f64);
            coeffs.push(ck);
        }
        coeffs
    }

    fn poly_from_roots(roots: &[f64]) -> Vec<Complex> {
        let mut p = vec![c(1.0, 0.0)];
        for &r in roots {
            let mut next = p.clone();
            next.push(c(0.0, 0.0));
            for i in 0..p.len() {
                next[i + 1] -= p[i] * r;
            }
            p = next;
        }
        p
    }

    #[test]
    fn pauli_z_and_half_identity() {
        let sz = ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, -1.0]]).unwrap();
        assert_eq!(hermitian_eig(&sz).unwrap().values, vec![1.0, -1.0]);
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        assert_eq!(hermitian_eig(&half).unwrap().values, vec![0.5, 0.5]);
    }

    #[test]
    fn partial_transpose_of_singlet() {
        // Partial transpose (second qubit) of |psi-><psi-|, written out by hand.
        let pt = ComplexMatrix::from_real_rows(&[
            [0.0, 0.0, 0.0, -0.5],
            [0.0, 0.5, 0.0, 0.0],
            [0.0, 0.0, 0.5, 0.0],
            [-0.5, 0.0, 0.0, 0.0],
        ])
        .unwrap();
        let expected = [0.5, 0.5, 0.5, -0.5];
        let oracle = char_poly(&pt);
        let target = poly_from_roots(&expected);
        for (a, b) in oracle.iter().zip(&target) {
            assert!(
                (a - b).norm() < 1e-12,
                "oracle disagrees with frozen spectrum"
            );
        }
        let eig = hermitian_eig(&pt).unwrap();
        for (got, want) in eig.values.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!(eig.reconstruct().max_abs_diff(&pt) < 1e-9);
    }

    #[test]
    fn complex_hermitian_matches_char_poly() {
        let m = ComplexMatrix::from_rows(&[
            [c(2.0, 0.0), c(1.0, -1.0), c(0.0, 0.5)],
            [c(1.0, 1.0), c(-1.0, 0.0), c(0.3, 0.0)],
            [c(0.0, -0.5), c(0.3, 0.0), c(0.5, 0.0)],
        ])
        .unwrap();
        let eig = hermitian_eig(&m).unwrap();
        let from_eig = poly_from_roots(&eig.values);
        for (a, b) in char_poly(&m).iter().zip(&from_eig) {
            assert!((a - b).norm() < 1e-9);
        }
        assert!(eig.vectors.is_unitary(1e-9));
        assert!(eig.reconstruct().max_abs_diff(&m) < 1e-9);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap();
        assert!(matches!(
            hermitian_eig(&m),
            Err(QinfoError::NotHermitian(_))
        ));
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(hermitian_eig(&rect).is_err());
    }

    #[test]
    fn ties_keep_original_order() {
        let m = ComplexMatrix::from_real_rows(&[[0.5, 0.0], [0.0, 0.5]]).unwrap();
        let eig = hermitian_eig(&m).unwrap();
        assert_eq!(eig.vectors, ComplexMatrix::identity(2));
    }
}
