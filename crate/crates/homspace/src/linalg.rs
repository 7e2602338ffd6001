//! Small dense linear algebra helpers on top of nalgebra.
//!
//! Everything in this crate works with algebras of dimension <= 10 or so,
//! so plain dense SVD/eigendecompositions are always the right tool. The
//! one policy decision that matters is the rank cutoff: all null-space and
//! rank computations use a relative singular value threshold and report
//! the gap between retained and discarded singular values.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative singular value cutoff for all rank decisions.
pub const RANK_CUTOFF: f64 = 1e-10;

/// Outcome of a null-space computation, with enough metadata to judge
/// whether the rank decision was clear-cut.
#[derive(Debug, Clone)]
pub struct NullSpace {
    /// Orthonormal basis of the null space, one column per vector.
    pub basis: Vec<DVector<f64>>,
    /// Smallest singular value that was treated as nonzero (None if the
    /// map was identically zero).
    pub smallest_kept: Option<f64>,
    /// Largest singular value that was treated as zero (None if the map
    /// has full column rank).
    pub largest_dropped: Option<f64>,
}

impl NullSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Ratio between the smallest retained and largest discarded singular
    /// value; large is good, near 1 means the rank decision was ambiguous.
    pub fn gap(&self) -> Option<f64> {
        match (self.smallest_kept, self.largest_dropped) {
            (Some(kept), Some(dropped)) if dropped > 0.0 => Some(kept / dropped),
            _ => None,
        }
    }
}

/// Null space of `a` (viewed as a map on column vectors) with the crate-wide
/// relative cutoff. The basis is the orthogonal complement of the row space,
/// so it is orthonormal regardless of the matrix shape.
pub fn null_space(a: &DMatrix<f64>) -> NullSpace {
    let ncols = a.ncols();
    if a.nrows() == 0 {
        let basis = (0..ncols)
            .map(|i| {
                let mut v = DVector::zeros(ncols);
                v[i] = 1.0;
                v
            })
            .collect();
        return NullSpace { basis, smallest_kept: None, largest_dropped: None };
    }
    let svd = a.clone().svd(false, true);
    let v_t = svd.v_t.as_ref().expect("svd requested v_t");
    let sigma = &svd.singular_values;
    let sigma_max = sigma.iter().cloned().fold(0.0_f64, f64::max);
    let cutoff = sigma_max * RANK_CUTOFF;

    let mut row_space: Vec<DVector<f64>> = Vec::new();
    let mut smallest_kept = None;
    let mut largest_dropped = None;
    for (idx, &s) in sigma.iter().enumerate() {
        if s > cutoff {
            smallest_kept = Some(smallest_kept.map_or(s, |m: f64| m.min(s)));
            row_space.push(v_t.row(idx).transpose());
        } else {
            largest_dropped = Some(largest_dropped.map_or(s, |m: f64| m.max(s)));
        }
    }
    let basis = orthogonal_complement(&row_space, ncols);
    NullSpace { basis, smallest_kept, largest_dropped }
}

/// Orthonormal basis of the orthogonal complement of `span` inside R^n
/// (standard dot product). Greedy Gram-Schmidt over coordinate vectors,
/// always taking the candidate with the largest residual.
pub fn orthogonal_complement(span: &[DVector<f64>], n: usize) -> Vec<DVector<f64>> {
    let mut ortho: Vec<DVector<f64>> = Vec::new();
    for v in span {
        let mut w = v.clone();
        for u in &ortho {
            let c = u.dot(&w);
            w -= u * c;
        }
        let norm = w.norm();
        if norm > 1e-12 {
            ortho.push(w / norm);
        }
    }
    let rank = ortho.len();
    let mut complement: Vec<DVector<f64>> = Vec::new();
    while complement.len() < n - rank {
        let mut best: Option<DVector<f64>> = None;
        let mut best_norm = 0.0;
        for i in 0..n {
            let mut w = DVector::zeros(n);
            w[i] = 1.0;
            for u in ortho.iter().chain(complement.iter()) {
                let c = u.dot(&w);
                w -= u * c;
            }
            let norm = w.norm();
            if norm > best_norm {
                best_norm = norm;
                best = Some(w / norm);
            }
        }
        match best {
            Some(w) if best_norm > 1e-10 => complement.push(w),
            _ => break,
        }
    }
    complement
}

/// Rank with the crate-wide relative cutoff.
pub fn rank(a: &DMatrix<f64>) -> usize {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0;
    }
    let svd = a.clone().svd(false, false);
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    let cutoff = sigma_max * RANK_CUTOFF;
    svd.singular_values.iter().filter(|&&s| s > cutoff).count()
}

/// Orthonormal basis (standard dot product) of the column span of `a`.
pub fn column_span(a: &DMatrix<f64>) -> Vec<DVector<f64>> {
    if a.ncols() == 0 {
        return Vec::new();
    }
    let svd = a.clone().svd(true, false);
    let u = svd.u.as_ref().expect("svd requested u");
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    let cutoff = sigma_max * RANK_CUTOFF;
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > cutoff)
        .map(|(i, _)| u.column(i).into_owned())
        .collect()
}

/// Eigenvalues and eigenvectors of a symmetric matrix, sorted ascending.
pub fn sym_eigen_sorted(a: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let n = a.nrows();
    let sym = 0.5 * (a + a.transpose());
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = DMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

/// Sorted eigenvalues of a symmetric matrix.
pub fn sym_eigenvalues(a: &DMatrix<f64>) -> Vec<f64> {
    sym_eigen_sorted(a).0.iter().cloned().collect()
}

/// Largest absolute eigenvalue of a general square matrix.
pub fn spectral_radius(a: &DMatrix<f64>) -> f64 {
    if a.nrows() == 0 {
        return 0.0;
    }
    a.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Checks that `q` is symmetric positive definite; returns the smallest
/// eigenvalue on success.
pub fn check_spd(q: &DMatrix<f64>) -> Result<f64> {
    let asym = (q - q.transpose()).norm();
    let scale = q.norm().max(1.0);
    if asym > 1e-9 * scale {
        return Err(Error::InvariantViolation {
            name: "metric symmetry",
            residual: asym,
            tolerance: 1e-9 * scale,
        });
    }
    let eigmin = sym_eigenvalues(q).first().cloned().unwrap_or(0.0);
    if eigmin <= 0.0 {
        return Err(Error::MetricNotPositive { eigmin });
    }
    Ok(eigmin)
}

/// Minimal-norm least squares solution of `a x = b`.
pub fn lstsq(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let svd = a.clone().svd(true, true);
    svd.solve(b, RANK_CUTOFF * svd.singular_values.max())
        .expect("svd solve")
}

/// Frobenius norm of the difference.
pub fn diff_norm(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).norm()
}

/// Commutator a*b - b*a.
pub fn commutator(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a * b - b * a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_wide_zero_map() {
        let a = DMatrix::<f64>::zeros(1, 4);
        let ns = null_space(&a);
        assert_eq!(ns.dim(), 4);
    }

    #[test]
    fn null_space_dimension_and_orthogonality() {
        // x + y + z = 0 has a 2-dimensional solution space.
        let a = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 1.0]);
        let ns = null_space(&a);
        assert_eq!(ns.dim(), 2);
        for v in &ns.basis {
            assert!((a.clone() * v).norm() < 1e-12);
        }
    }

    #[test]
    fn spectral_radius_of_rotation() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, -2.0, 2.0, 0.0]);
        assert!((spectral_radius(&a) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn spd_rejects_indefinite() {
        let q = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(check_spd(&q).is_err());
    }

    #[test]
    fn sym_eigen_sorted_ascending() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let (vals, vecs) = sym_eigen_sorted(&a);
        assert!((vals[0] + 1.0).abs() < 1e-12);
        assert!((vals[1] - 1.0).abs() < 1e-12);
        let recon = &vecs * DMatrix::from_diagonal(&vals) * vecs.transpose();
        assert!(diff_norm(&recon, &a) < 1e-12);
    }
}
