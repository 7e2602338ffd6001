//! The derivation algebra Der(g), computed as an exact null space.
//!
//! D is a derivation iff pi(D) mu = 0 where mu is the bracket tensor, a
//! linear condition on the n² entries of D. We assemble the constraint
//! matrix explicitly and take its SVD null space under the crate-wide
//! rank policy.

use nalgebra::{DMatrix, DVector};

use crate::algebra::{LieAlgebra, Subspace};
use crate::bracket::BracketTensor;
use crate::error::{Error, Result};
use crate::linalg;

/// A basis of a space of derivations, with the rank-decision metadata of
/// the null-space computation it came from.
#[derive(Debug, Clone)]
pub struct DerivationBasis {
    algebra_dim: usize,
    basis: Vec<DMatrix<f64>>,
    /// Smallest retained / largest discarded singular value of the
    /// constraint system (None when the decision was vacuous).
    pub singular_gap: Option<f64>,
}

impl DerivationBasis {
    /// An empty span (used for fits restricted to the constant term).
    pub fn empty(algebra_dim: usize) -> Self {
        DerivationBasis { algebra_dim, basis: Vec::new(), singular_gap: None }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn algebra_dim(&self) -> usize {
        self.algebra_dim
    }

    pub fn matrices(&self) -> &[DMatrix<f64>] {
        &self.basis
    }

    pub fn iter(&self) -> std::slice::Iter<'_, DMatrix<f64>> {
        self.basis.iter()
    }

    /// Least-squares distance from `d` to the span of this basis, per unit
    /// of ‖d‖ (0 for d = 0).
    pub fn span_residual(&self, d: &DMatrix<f64>) -> f64 {
        let norm = d.norm();
        if norm == 0.0 {
            return 0.0;
        }
        if self.basis.is_empty() {
            return 1.0;
        }
        let n2 = self.algebra_dim * self.algebra_dim;
        let a = DMatrix::from_columns(
            &self.basis.iter().map(|m| DVector::from_column_slice(m.as_slice())).collect::<Vec<_>>(),
        );
        let b = DVector::from_column_slice(d.as_slice());
        debug_assert_eq!(a.nrows(), n2);
        let x = linalg::lstsq(&a, &b);
        (a * x - b).norm() / norm
    }
}

/// Residual of the derivation property ‖pi(D) mu‖ for the full bracket.
pub fn derivation_residual(algebra: &LieAlgebra, d: &DMatrix<f64>) -> f64 {
    algebra.tensor().pi_action(d).norm()
}

/// Requires ‖pi(D) mu‖ ≤ tol.
pub fn require_derivation(algebra: &LieAlgebra, d: &DMatrix<f64>, tol: f64) -> Result<()> {
    let residual = derivation_residual(algebra, d);
    if residual > tol {
        return Err(Error::NotADerivation { residual, tolerance: tol });
    }
    Ok(())
}

/// Constraint matrix whose null space (as vectorized matrices, column-major)
/// is the space of derivations of `tensor`.
fn derivation_constraints(tensor: &BracketTensor) -> DMatrix<f64> {
    let n = tensor.dim();
    let rows = n * (n - 1) / 2 * n;
    let mut a = DMatrix::zeros(rows.max(1), n * n);
    if n < 2 {
        return DMatrix::zeros(1, n * n);
    }
    let mut row = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            for k in 0..n {
                // Coefficient of D_(p,q) (column-major index q*n + p) in
                // (pi(D) mu)(e_i, e_j)_k =
                //   Σ_a D_(k,a) c_ij^a - Σ_a D_(a,i) c_aj^k - Σ_a D_(a,j) c_ia^k.
                for q in 0..n {
                    a[(row, q * n + k)] += tensor.get(i, j, q);
                }
                for p in 0..n {
                    a[(row, i * n + p)] -= tensor.get(p, j, k);
                    a[(row, j * n + p)] -= tensor.get(i, p, k);
                }
                row += 1;
            }
        }
    }
    a
}

fn unvec(v: &DVector<f64>, n: usize) -> DMatrix<f64> {
    DMatrix::from_column_slice(n, n, v.as_slice())
}

/// Der(g): the exact solution space of the derivation equations.
pub fn derivation_algebra(algebra: &LieAlgebra) -> DerivationBasis {
    let n = algebra.dim();
    let a = derivation_constraints(&algebra.tensor());
    let ns = linalg::null_space(&a);
    DerivationBasis {
        algebra_dim: n,
        basis: ns.basis.iter().map(|v| unvec(v, n)).collect(),
        singular_gap: ns.gap(),
    }
}

/// Derivations of a bare bracket tensor (orthonormal-basis data).
pub fn derivation_algebra_of_tensor(tensor: &BracketTensor) -> DerivationBasis {
    let n = tensor.dim();
    let a = derivation_constraints(tensor);
    let ns = linalg::null_space(&a);
    DerivationBasis {
        algebra_dim: n,
        basis: ns.basis.iter().map(|v| unvec(v, n)).collect(),
        singular_gap: ns.gap(),
    }
}

/// The sub-basis of Der(g) of derivations mapping `k` into itself.
///
/// `k` must be a subalgebra; the constraint "D k ⊆ k" is appended to the
/// derivation system as linear equations through a projector onto a
/// complement of k.
pub fn derivations_preserving(algebra: &LieAlgebra, k: &Subspace) -> Result<DerivationBasis> {
    let n = algebra.dim();
    if k.ambient_dim() != n {
        return Err(Error::DimensionMismatch {
            context: "isotropy subspace",
            expected: n,
            got: k.ambient_dim(),
        });
    }
    // Subalgebra precondition.
    for x in k.basis_columns() {
        for y in k.basis_columns() {
            let v = algebra.bracket(&x, &y)?;
            if v.norm() > 0.0 {
                let residual = k.residual(&v);
                if residual > 1e-9 {
                    return Err(Error::NotASubalgebra { what: "isotropy", residual });
                }
            }
        }
    }
    let der = derivation_constraints(&algebra.tensor());
    if k.dim() == 0 {
        let ns = linalg::null_space(&der);
        return Ok(DerivationBasis {
            algebra_dim: n,
            basis: ns.basis.iter().map(|v| unvec(v, n)).collect(),
            singular_gap: ns.gap(),
        });
    }
    // Projector onto the orthogonal complement of span(k): rows annihilate
    // vectors in k, so "Pi D v = 0 for v in k-basis" says D preserves k.
    let comp = k.orthogonal_complement();
    let extra_rows = comp.dim() * k.dim();
    let mut a = DMatrix::zeros(der.nrows() + extra_rows, n * n);
    a.view_mut((0, 0), (der.nrows(), n * n)).copy_from(&der);
    let mut row = der.nrows();
    for v in k.basis_columns() {
        for w in comp.basis_columns() {
            // Σ_{p,q} w_p D_(p,q) v_q = 0.
            for q in 0..n {
                for p in 0..n {
                    a[(row, q * n + p)] = w[p] * v[q];
                }
            }
            row += 1;
        }
    }
    let ns = linalg::null_space(&a);
    Ok(DerivationBasis {
        algebra_dim: n,
        basis: ns.basis.iter().map(|v| unvec(v, n)).collect(),
        singular_gap: ns.gap(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fixtures::{h3, hyperbolic};

    #[test]
    fn abelian_derivations_are_all_matrices() {
        let der = derivation_algebra(&LieAlgebra::abelian(3));
        assert_eq!(der.dim(), 9);
    }

    #[test]
    fn h3_derivation_algebra_is_six_dimensional() {
        let der = derivation_algebra(&h3());
        assert_eq!(der.dim(), 6);
        for d in der.iter() {
            assert!(derivation_residual(&h3(), d) < 1e-12);
        }
    }

    #[test]
    fn h3_diagonal_derivation_in_span() {
        let der = derivation_algebra(&h3());
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0, 2.0]));
        assert!(der.span_residual(&d) < 1e-10);
        // And diag(1, 1, 1) is not a derivation of h3.
        let not = DMatrix::identity(3, 3);
        assert!(der.span_residual(&not) > 1e-3);
    }

    #[test]
    fn preserving_trivial_isotropy_is_the_full_derivation_algebra() {
        let k = Subspace::zero(3);
        let der = derivations_preserving(&h3(), &k).unwrap();
        assert_eq!(der.dim(), 6);
    }

    #[test]
    fn preserving_a_line_in_the_abelian_plane() {
        let l = LieAlgebra::abelian(2);
        let k = Subspace::coordinate(2, &[0]).unwrap();
        let der = derivations_preserving(&l, &k).unwrap();
        // Matrices with vanishing (2,1) entry.
        assert_eq!(der.dim(), 3);
        for d in der.iter() {
            assert!(d[(1, 0)].abs() < 1e-12);
        }
    }

    #[test]
    fn hyperbolic_derivations() {
        // For ad(xi) = I on R^2 the derivations are
        // { xi -> c in R^2, E in gl(2) } of dimension 6.
        let der = derivation_algebra(&hyperbolic(3));
        assert_eq!(der.dim(), 6);
        for d in der.iter() {
            assert!(d[(0, 0)].abs() < 1e-10);
            assert!(d[(0, 1)].abs() < 1e-10);
            assert!(d[(0, 2)].abs() < 1e-10);
        }
    }

    #[test]
    fn dimension_invariant_under_orthogonal_change_of_basis() {
        let g = {
            // A fixed rotation mixing all three axes.
            let axis = DVector::from_vec(vec![1.0, 2.0, 3.0]).normalize();
            let theta: f64 = 0.83;
            let k = DMatrix::from_row_slice(
                3,
                3,
                &[0.0, -axis[2], axis[1], axis[2], 0.0, -axis[0], -axis[1], axis[0], 0.0],
            );
            DMatrix::identity(3, 3) + k.clone() * theta.sin() + &k * &k * (1.0 - theta.cos())
        };
        let rotated = h3().change_basis(&g, 1e-9).unwrap();
        assert_eq!(derivation_algebra(&rotated).dim(), 6);
    }
}
