//! Shared helpers for the integration suites: seeded random rotations,
//! SPD metrics, and the projection of perturbed Heisenberg brackets back
//! onto the two-step variety.

#![allow(dead_code)]

use homspace::algebra::LieAlgebra;
use homspace::bracket::BracketTensor;
use homspace::homogeneous::HomogeneousSpace;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random orthogonal matrix via QR of a Gaussian-ish matrix.
pub fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    loop {
        let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0_f64));
        let qr = a.qr();
        let q = qr.q();
        if qr.r()[(n - 1, n - 1)].abs() > 1e-6 {
            return q;
        }
    }
}

/// Random SPD matrix with eigenvalues in [0.5, 2.5]: well conditioned so
/// absolute tolerances stay meaningful.
pub fn random_spd(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let q = random_orthogonal(rng, n);
    let eigs = DVector::from_fn(n, |_, _| rng.random_range(0.5..2.5));
    &q * DMatrix::from_diagonal(&eigs) * q.transpose()
}

pub fn identity_space(algebra: LieAlgebra) -> HomogeneousSpace {
    let d = algebra.dim();
    HomogeneousSpace::trivial_isotropy(algebra, DMatrix::identity(d, d)).unwrap()
}

/// The Heisenberg bracket as a tensor.
pub fn h3_tensor() -> BracketTensor {
    let mut t = BracketTensor::zero(3);
    t.add(0, 1, 2, 1.0);
    t
}

/// Encodes an antisymmetric bracket on R^3 as the 3x3 matrix A with
/// mu(x, y) = A (x cross y); columns are mu(e2,e3), mu(e3,e1), mu(e1,e2).
pub fn bracket_to_matrix(mu: &BracketTensor) -> DMatrix<f64> {
    assert_eq!(mu.dim(), 3);
    let mut a = DMatrix::zeros(3, 3);
    a.set_column(0, &mu.eval_basis(1, 2));
    a.set_column(1, &mu.eval_basis(2, 0));
    a.set_column(2, &mu.eval_basis(0, 1));
    a
}

pub fn matrix_to_bracket(a: &DMatrix<f64>) -> BracketTensor {
    let mut mu = BracketTensor::zero(3);
    let pairs = [(1usize, 2usize, 0usize), (2, 0, 1), (0, 1, 2)];
    for (i, j, col) in pairs {
        for k in 0..3 {
            let c = a[(k, col)];
            if c != 0.0 {
                mu.add(i, j, k, c);
            }
        }
    }
    mu
}

/// Projects a perturbed three-dimensional bracket onto the two-step
/// nilpotent variety: in the cross-product encoding that variety is the
/// set of symmetric rank-one matrices, so symmetrize and keep the
/// dominant eigenvalue.
pub fn project_to_two_step(mu: &BracketTensor) -> BracketTensor {
    let a = bracket_to_matrix(mu);
    let sym = 0.5 * (&a + a.transpose());
    let eig = sym.symmetric_eigen();
    let mut best = 0usize;
    for i in 1..3 {
        if eig.eigenvalues[i].abs() > eig.eigenvalues[best].abs() {
            best = i;
        }
    }
    let value = eig.eigenvalues[best];
    let u = eig.eigenvectors.column(best).clone_owned();
    let projected = value * &u * u.transpose();
    matrix_to_bracket(&projected)
}

/// A random antisymmetric tensor direction of unit norm.
pub fn random_bracket_direction(rng: &mut ChaCha8Rng, dim: usize) -> BracketTensor {
    let mut t = BracketTensor::zero(dim);
    for i in 0..dim {
        for j in (i + 1)..dim {
            for k in 0..dim {
                t.add(i, j, k, rng.random_range(-1.0..1.0_f64));
            }
        }
    }
    let norm = t.norm();
    t.scale(1.0 / norm)
}
