//! Dense antisymmetric bracket tensors in an orthonormal basis.
//!
//! A `BracketTensor` holds mu(e_i, e_j) = sum_k c(i,j,k) e_k with
//! c(j,i,k) = -c(i,j,k) maintained by construction. All norms on the
//! tensor space use the ordered-pair convention
//! ‖mu‖² = Σ_{i,j} ‖mu(e_i, e_j)‖², which makes tr m(mu) = -1 exact for
//! the normalized moment map. The moment map matrix computed here is the
//! unique symmetric M with tr(M E) = ¼ ⟨pi(E) mu, mu⟩ for all E.

use nalgebra::{DMatrix, DVector};

use crate::algebra::{LieAlgebra, StructureConstant};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct BracketTensor {
    dim: usize,
    // Flattened [i][j][k], antisymmetric in (i, j).
    data: Vec<f64>,
}

impl BracketTensor {
    pub fn zero(dim: usize) -> Self {
        BracketTensor { dim, data: vec![0.0; dim * dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[self.idx(i, j, k)]
    }

    /// Adds `c` to the (i, j, k) component and `-c` to (j, i, k).
    pub fn add(&mut self, i: usize, j: usize, k: usize, c: f64) {
        assert!(i != j, "diagonal bracket components are identically zero");
        let a = self.idx(i, j, k);
        let b = self.idx(j, i, k);
        self.data[a] += c;
        self.data[b] -= c;
    }

    /// mu(x, y).
    pub fn eval(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.dim);
        for i in 0..self.dim {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..self.dim {
                if y[j] == 0.0 {
                    continue;
                }
                let w = x[i] * y[j];
                for k in 0..self.dim {
                    out[k] += w * self.get(i, j, k);
                }
            }
        }
        out
    }

    /// mu(e_i, e_j) as a vector.
    pub fn eval_basis(&self, i: usize, j: usize) -> DVector<f64> {
        DVector::from_iterator(self.dim, (0..self.dim).map(|k| self.get(i, j, k)))
    }

    /// Ordered-pair squared norm Σ_{i,j} ‖mu(e_i,e_j)‖².
    pub fn norm_sq(&self) -> f64 {
        self.data.iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Inner product in the ordered-pair convention.
    pub fn inner(&self, other: &BracketTensor) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data.iter().zip(other.data.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, s: f64) -> BracketTensor {
        BracketTensor { dim: self.dim, data: self.data.iter().map(|c| c * s).collect() }
    }

    pub fn add_tensor(&self, other: &BracketTensor) -> BracketTensor {
        assert_eq!(self.dim, other.dim);
        BracketTensor {
            dim: self.dim,
            data: self.data.iter().zip(other.data.iter()).map(|(a, b)| a + b).collect(),
        }
    }

    /// The representation of gl acting on brackets:
    /// (pi(E) mu)(x, y) = E mu(x, y) - mu(E x, y) - mu(x, E y).
    pub fn pi_action(&self, e: &DMatrix<f64>) -> BracketTensor {
        let d = self.dim;
        let mut out = BracketTensor::zero(d);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let mut v = 0.0;
                    for a in 0..d {
                        v += e[(k, a)] * self.get(i, j, a);
                        v -= e[(a, i)] * self.get(a, j, k);
                        v -= e[(a, j)] * self.get(i, a, k);
                    }
                    let pos = out.idx(i, j, k);
                    out.data[pos] = v;
                }
            }
        }
        out
    }

    /// Change of basis: mu_g(x, y) = g mu(g^-1 x, g^-1 y).
    pub fn conjugate(&self, g: &DMatrix<f64>) -> BracketTensor {
        let d = self.dim;
        let ginv = g.clone().try_inverse().expect("conjugation needs an invertible matrix");
        let mut out = BracketTensor::zero(d);
        for i in 0..d {
            for j in 0..d {
                // mu(g^-1 e_i, g^-1 e_j) then push forward by g.
                let gi = ginv.column(i).into_owned();
                let gj = ginv.column(j).into_owned();
                let v = g * self.eval(&gi, &gj);
                for k in 0..d {
                    let pos = out.idx(i, j, k);
                    out.data[pos] = v[k];
                }
            }
        }
        out
    }

    /// The moment map matrix M: symmetric with tr(M E) = ¼ ⟨pi(E) mu, mu⟩.
    ///
    /// In an orthonormal basis,
    /// M_ab = ¼ Σ_{i,j} c_ij^a c_ij^b − ½ Σ_{j,k} c_aj^k c_bj^k.
    pub fn moment_matrix(&self) -> DMatrix<f64> {
        let d = self.dim;
        let mut m = DMatrix::zeros(d, d);
        for a in 0..d {
            for b in a..d {
                let mut first = 0.0;
                let mut second = 0.0;
                for i in 0..d {
                    for j in 0..d {
                        first += self.get(i, j, a) * self.get(i, j, b);
                        second += self.get(a, i, j) * self.get(b, i, j);
                    }
                }
                let v = 0.25 * first - 0.5 * second;
                m[(a, b)] = v;
                m[(b, a)] = v;
            }
        }
        m
    }

    /// Worst-case residual of the defining trace identity of the moment
    /// matrix over the elementary basis of End: an internal consistency
    /// check of the two computation routes.
    pub fn moment_trace_residual(&self) -> f64 {
        let d = self.dim;
        let m = self.moment_matrix();
        let mut worst = 0.0_f64;
        for a in 0..d {
            for b in 0..d {
                let mut e = DMatrix::zeros(d, d);
                e[(a, b)] = 1.0;
                let lhs = m[(b, a)];
                let rhs = 0.25 * self.pi_action(&e).inner(self);
                worst = worst.max((lhs - rhs).abs());
            }
        }
        worst
    }

    /// Converts back to sparse structure constants, validating Jacobi.
    pub fn to_algebra(&self, jacobi_tol: f64) -> Result<LieAlgebra> {
        let mut constants = Vec::new();
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                for k in 0..self.dim {
                    let c = self.get(i, j, k);
                    if c != 0.0 {
                        constants.push(StructureConstant { i, j, k, c });
                    }
                }
            }
        }
        LieAlgebra::with_tolerance(self.dim, constants, jacobi_tol)
    }

    /// Max norm of the Jacobi cyclic sum over basis triples.
    pub fn jacobi_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..d {
            for j in (i + 1)..d {
                let bij = self.eval_basis(i, j);
                for k in (j + 1)..d {
                    let mut ek = DVector::zeros(d);
                    ek[k] = 1.0;
                    let mut ei = DVector::zeros(d);
                    ei[i] = 1.0;
                    let mut ej = DVector::zeros(d);
                    ej[j] = 1.0;
                    let bjk = self.eval_basis(j, k);
                    let bki = self.eval_basis(k, i);
                    let cyc = self.eval(&bij, &ek) + self.eval(&bjk, &ei) + self.eval(&bki, &ej);
                    worst = worst.max(cyc.norm());
                }
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h3_tensor() -> BracketTensor {
        let mut t = BracketTensor::zero(3);
        t.add(0, 1, 2, 1.0);
        t
    }

    #[test]
    fn h3_moment_matrix() {
        let m = h3_tensor().moment_matrix();
        let expected = DMatrix::from_diagonal(&DVector::from_vec(vec![-0.5, -0.5, 0.5]));
        assert!((m - expected).norm() < 1e-15);
    }

    #[test]
    fn ordered_pair_norm_of_h3_is_two() {
        assert!((h3_tensor().norm_sq() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn moment_trace_identity_holds() {
        assert!(h3_tensor().moment_trace_residual() < 1e-14);
    }

    #[test]
    fn trace_of_moment_is_minus_quarter_norm_sq() {
        let t = h3_tensor();
        let m = t.moment_matrix();
        assert!((m.trace() + 0.25 * t.norm_sq()).abs() < 1e-15);
    }

    #[test]
    fn pi_of_identity_is_minus_mu() {
        let t = h3_tensor();
        let out = t.pi_action(&DMatrix::identity(3, 3));
        let expected = t.scale(-1.0);
        assert!((out.inner(&out) - expected.inner(&expected)).abs() < 1e-15);
        assert!((out.inner(&t) + t.norm_sq()).abs() < 1e-15);
    }

    #[test]
    fn pi_annihilates_derivations() {
        // diag(1, 1, 2) is a derivation of h3.
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0, 2.0]));
        assert!(h3_tensor().pi_action(&d).norm() < 1e-15);
    }

    #[test]
    fn conjugation_by_identity_is_identity() {
        let t = h3_tensor();
        let out = t.conjugate(&DMatrix::identity(3, 3));
        assert_eq!(out, t);
    }

    #[test]
    fn conjugation_preserves_jacobi() {
        let g = DMatrix::from_row_slice(3, 3, &[1.0, 0.2, 0.0, -0.1, 1.0, 0.3, 0.0, 0.5, 1.1]);
        let out = h3_tensor().conjugate(&g);
        assert!(out.jacobi_defect() < 1e-12);
        assert!(out.to_algebra(1e-9).is_ok());
    }
}
