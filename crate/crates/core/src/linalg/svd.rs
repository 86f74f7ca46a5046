use super::{c, Complex, ComplexMatrix};

const MAX_SWEEPS: usize = 100;
const ORTHO_TOL: f64 = 1e-15;

/// Thin singular value decomposition `m = u diag(values) v^dagger`.
///
/// For an `r x k` input with `p = min(r, k)`, `u` is `r x p`, `v` is `k x p`,
/// both with orthonormal columns, and `values` is descending and non-negative.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub values: Vec<f64>,
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let diag: Vec<Complex> = self.values.iter().map(|&s| c(s, 0.0)).collect();
        &(&self.u * &ComplexMatrix::from_diagonal(&diag)) * &self.v.dagger()
    }

    /// Number of singular values above `tol * values[0]`.
    pub fn rank(&self, tol: f64) -> usize {
        let top = self.values.first().copied().unwrap_or(0.0);
        self.values.iter().filter(|&&s| s > tol * top).count()
    }
}

/// One-sided (Hestenes) Jacobi SVD.
pub fn svd(m: &ComplexMatrix) -> Svd {
    if m.rows() < m.cols() {
        let t = one_sided_jacobi(&m.dagger());
        return Svd {
            u: t.v,
            values: t.values,
            v: t.u,
        };
    }
    one_sided_jacobi(m)
}

/// Jacobi rotation of columns `p < q`.
fn rotate(cols: &mut [Vec<Complex>], p: usize, q: usize, cs: f64, sn: f64, phase: Complex) {
    let (lo, hi) = cols.split_at_mut(q);
    for (xp, xq) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
        let (a, b) = (*xp, *xq * phase);
        *xp = a * cs - b * sn;
        *xq = a * sn + b * cs;
    }
}

fn one_sided_jacobi(m: &ComplexMatrix) -> Svd {
    let rows = m.rows();
    let cols = m.cols();
    // Column-major working copy: cols[j] is column j.
    let mut a: Vec<Vec<Complex>> = (0..cols).map(|j| m.col(j)).collect();
    let mut v: Vec<Vec<Complex>> = (0..cols)
        .map(|j| {
            (0..cols)
                .map(|i| c(if i == j { 1.0 } else { 0.0 }, 0.0))
                .collect()
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let alpha: f64 = a[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = a[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex = a[p].iter().zip(&a[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g <= ORTHO_TOL * (alpha * beta).sqrt() || g < 1e-300 {
                    continue;
                }
                rotated = true;
                let e_minus = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                rotate(&mut a, p, q, cs, sn, e_minus);
                rotate(&mut v, p, q, cs, sn, e_minus);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = a
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).expect("finite norms"));

    let top = norms.iter().copied().fold(0.0, f64::max);
    let mut u_cols: Vec<Vec<Complex>> = Vec::with_capacity(cols);
    let mut values = Vec::with_capacity(cols);
    let mut v_mat = ComplexMatrix::zeros(cols, cols);
    for (k, &src) in order.iter().enumerate() {
        let s = norms[src];
        values.push(s);
        for r in 0..cols {
            v_mat[(r, k)] = v[src][r];
        }
        if s > 1e-14 * top.max(1e-300) && s > 0.0 {
            u_cols.push(a[src].iter().map(|z| z / s).collect());
        } else {
            u_cols.push(complete_basis(&u_cols, rows));
        }
    }

    let mut u = ComplexMatrix::zeros(rows, cols);
    for (k, col) in u_cols.iter().enumerate() {
        for r in 0..rows {
            u[(r, k)] = col[r];
        }
    }
    Svd {
        u,
        values,
        v: v_mat,
    }
}

/// A unit vector orthogonal to every column in `basis`, found by
/// Gram-Schmidt over the standard basis.
fn complete_basis(basis: &[Vec<Complex>], dim: usize) -> Vec<Complex> {
    let mut best: Option<(f64, Vec<Complex>)> = None;
    for e in 0..dim {
        let mut cand: Vec<Complex> = (0..dim)
            .map(|i| c(if i == e { 1.0 } else { 0.0 }, 0.0))
            .collect();
        for _ in 0..2 {
            for b in basis {
                let proj: Complex = b.iter().zip(&cand).map(|(x, y)| x.conj() * y).sum();
                for (ci, bi) in cand.iter_mut().zip(b) {
                    *ci -= proj * bi;
                }
            }
        }
        let norm = cand.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if best.as_ref().is_none_or(|(n, _)| norm > *n) {
            best = Some((norm, cand));
        }
        if norm > 0.5 {
            break;
        }
    }
    let (norm, cand) = best.expect("dimension is positive");
    cand.into_iter().map(|z| z / norm).collect()
}
