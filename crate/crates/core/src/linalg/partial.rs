use super::ComplexMatrix;
use crate::error::{QinfoError, Result};

/// Mixed-radix layout of a tensor-product space; subsystem 0 is the most
/// significant digit of a flat index.
struct Layout {
    dims: Vec<usize>,
    strides: Vec<usize>,
}

impl Layout {
    fn new(m: &ComplexMatrix, dims: &[usize]) -> Result<Self> {
        if !m.is_square() {
            return Err(QinfoError::DimensionMismatch(
                "operator must be square".into(),
            ));
        }
        if dims.is_empty() || dims.contains(&0) {
            return Err(QinfoError::DimensionMismatch(format!(
                "invalid subsystem dims {dims:?}"
            )));
        }
        let total: usize = dims.iter().product();
        if total != m.rows() {
            return Err(QinfoError::DimensionMismatch(format!(
                "subsystem dims {dims:?} multiply to {total}, matrix is {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let mut strides = vec![1; dims.len()];
        for k in (0..dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * dims[k + 1];
        }
        Ok(Layout {
            dims: dims.to_vec(),
            strides,
        })
    }

    /// Flat indices of the product space spanned by `subsystems`, in
    /// lexicographic order of their digits (zero digits elsewhere).
    fn offsets(&self, subsystems: &[usize]) -> Vec<usize> {
        let mut out = vec![0usize];
        for &s in subsystems {
            let mut next = Vec::with_capacity(out.len() * self.dims[s]);
            for &base in &out {
                for d in 0..self.dims[s] {
                    next.push(base + d * self.strides[s]);
                }
            }
            out = next;
        }
        out
    }
}

fn check_subsystems(subsystems: &[usize], count: usize) -> Result<Vec<usize>> {
    let mut sorted = subsystems.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != subsystems.len() {
        return Err(QinfoError::InvalidTargets(format!(
            "repeated subsystem in {subsystems:?}"
        )));
    }
    if let Some(&bad) = sorted.iter().find(|&&s| s >= count) {
        return Err(QinfoError::IndexOutOfRange {
            index: bad,
            bound: count,
        });
    }
    Ok(sorted)
}

/// Traces out every subsystem not listed in `keep`.
///
/// The kept subsystems appear in the result in ascending index order.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    let layout = Layout::new(m, dims)?;
    if keep.is_empty() {
        return Err(QinfoError::EmptyKeep);
    }
    let keep = check_subsystems(keep, dims.len())?;
    let traced: Vec<usize> = (0..dims.len()).filter(|s| !keep.contains(s)).collect();

    let kept_offsets = layout.offsets(&keep);
    let traced_offsets = layout.offsets(&traced);
    let n = kept_offsets.len();
    let mut out = ComplexMatrix::zeros(n, n);
    for (r, &ro) in kept_offsets.iter().enumerate() {
        for (cix, &co) in kept_offsets.iter().enumerate() {
            out[(r, cix)] = traced_offsets.iter().map(|&t| m[(ro + t, co + t)]).sum();
        }
    }
    Ok(out)
}

/// Transposes the listed subsystems of a bipartite or multipartite operator.
pub fn partial_transpose(
    m: &ComplexMatrix,
    dims: &[usize],
    transpose: &[usize],
) -> Result<ComplexMatrix> {
    let layout = Layout::new(m, dims)?;
    let transpose = check_subsystems(transpose, dims.len())?;
    let n = m.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for row in 0..n {
        for col in 0..n {
            let (mut r2, mut c2) = (row, col);
            for &s in &transpose {
                let stride = layout.strides[s];
                let rd = (row / stride) % layout.dims[s];
                let cd = (col / stride) % layout.dims[s];
                r2 = r2 - rd * stride + cd * stride;
                c2 = c2 - cd * stride + rd * stride;
            }
            out[(r2, c2)] = m[(row, col)];
        }
    }
    Ok(out)
}
