//! Lie algebras as structure constant data, with the structural machinery
//! needed for curvature work: Killing form, derived and lower central
//! series, and a certified nilradical.
//!
//! Structure constants are stored sparsely with `i < j` only, so the
//! bracket is antisymmetric by construction. Indices are zero-based here;
//! the document format uses one-based labels and converts at the boundary.

use nalgebra::{DMatrix, DVector};

use crate::bracket::BracketTensor;
use crate::error::{Error, Result};
use crate::linalg;

/// Default tolerance for the Jacobi defect of hand-entered constants.
pub const JACOBI_TOL: f64 = 1e-12;

/// One structure constant: `[e_i, e_j]` has coefficient `c` on `e_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstant {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: f64,
}

/// A real Lie algebra given by a basis and sparse structure constants.
#[derive(Debug, Clone)]
pub struct LieAlgebra {
    dim: usize,
    constants: Vec<StructureConstant>,
    labels: Option<Vec<String>>,
}

impl LieAlgebra {
    /// Builds an algebra and validates index ranges, `i < j` ordering,
    /// duplicate entries, and the Jacobi identity at the default tolerance.
    pub fn new(dim: usize, constants: Vec<StructureConstant>) -> Result<Self> {
        Self::with_tolerance(dim, constants, JACOBI_TOL)
    }

    /// Same as [`LieAlgebra::new`] with an explicit Jacobi tolerance, for
    /// flowed or perturbed brackets.
    pub fn with_tolerance(
        dim: usize,
        constants: Vec<StructureConstant>,
        jacobi_tol: f64,
    ) -> Result<Self> {
        for sc in &constants {
            if sc.i >= sc.j {
                return Err(Error::BadBracketOrder { i: sc.i + 1, j: sc.j + 1 });
            }
            if sc.j >= dim || sc.k >= dim {
                return Err(Error::IndexOutOfRange {
                    i: sc.i + 1,
                    j: sc.j + 1,
                    k: sc.k + 1,
                    dim,
                });
            }
        }
        for (idx, sc) in constants.iter().enumerate() {
            for other in &constants[idx + 1..] {
                if sc.i == other.i && sc.j == other.j && sc.k == other.k {
                    return Err(Error::DuplicateBracket {
                        i: sc.i + 1,
                        j: sc.j + 1,
                        k: sc.k + 1,
                    });
                }
            }
        }
        let algebra = LieAlgebra { dim, constants, labels: None };
        let defect = algebra.jacobi_defect();
        if defect > jacobi_tol {
            return Err(Error::JacobiViolation { defect, tolerance: jacobi_tol });
        }
        Ok(algebra)
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra { dim, constants: Vec::new(), labels: None }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        debug_assert_eq!(labels.len(), self.dim);
        self.labels = Some(labels);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constants(&self) -> &[StructureConstant] {
        &self.constants
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// The full bracket as a dense antisymmetric tensor.
    pub fn tensor(&self) -> BracketTensor {
        let mut t = BracketTensor::zero(self.dim);
        for sc in &self.constants {
            t.add(sc.i, sc.j, sc.k, sc.c);
        }
        t
    }

    /// Bilinear, antisymmetric evaluation of `[x, y]`.
    pub fn bracket(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
        if x.len() != self.dim || y.len() != self.dim {
            return Err(Error::DimensionMismatch {
                context: "bracket",
                expected: self.dim,
                got: x.len().max(y.len()),
            });
        }
        let mut out = DVector::zeros(self.dim);
        for sc in &self.constants {
            let w = x[sc.i] * y[sc.j] - x[sc.j] * y[sc.i];
            out[sc.k] += sc.c * w;
        }
        Ok(out)
    }

    /// Matrix of `ad x = [x, .]` in the algebra basis.
    pub fn ad(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for sc in &self.constants {
            // [x, e_j] picks up c * x_i on e_k, [x, e_i] picks up -c * x_j.
            m[(sc.k, sc.j)] += sc.c * x[sc.i];
            m[(sc.k, sc.i)] -= sc.c * x[sc.j];
        }
        m
    }

    pub fn basis_vector(&self, i: usize) -> DVector<f64> {
        let mut v = DVector::zeros(self.dim);
        v[i] = 1.0;
        v
    }

    /// Max over basis triples of the Jacobi cyclic sum norm.
    pub fn jacobi_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.dim {
            let ei = self.basis_vector(i);
            for j in (i + 1)..self.dim {
                let ej = self.basis_vector(j);
                let bij = self.bracket(&ei, &ej).unwrap();
                for k in (j + 1)..self.dim {
                    let ek = self.basis_vector(k);
                    let bjk = self.bracket(&ej, &ek).unwrap();
                    let bki = self.bracket(&ek, &ei).unwrap();
                    let cyc = self.bracket(&bij, &ek).unwrap()
                        + self.bracket(&bjk, &ei).unwrap()
                        + self.bracket(&bki, &ej).unwrap();
                    worst = worst.max(cyc.norm());
                }
            }
        }
        worst
    }

    /// Killing form B(X, Y) = tr(ad X ad Y) as a symmetric matrix in the
    /// algebra basis.
    pub fn killing_form(&self) -> DMatrix<f64> {
        let ads: Vec<DMatrix<f64>> =
            (0..self.dim).map(|i| self.ad(&self.basis_vector(i))).collect();
        let mut b = DMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for j in i..self.dim {
                let v = (&ads[i] * &ads[j]).trace();
                b[(i, j)] = v;
                b[(j, i)] = v;
            }
        }
        b
    }

    /// Lower central series g, `[g,g]`, `[g,[g,g]]`, ... until stabilization.
    pub fn lower_central_series(&self) -> Vec<Subspace> {
        let mut series = vec![Subspace::full(self.dim)];
        loop {
            let current = series.last().unwrap();
            let next = self.bracket_image(&Subspace::full(self.dim), current);
            if next.dim() == current.dim() {
                break;
            }
            let stop = next.dim() == 0;
            series.push(next);
            if stop {
                break;
            }
        }
        series
    }

    /// Derived series g, `[g,g]`, `[[g,g],[g,g]]`, ...
    pub fn derived_series(&self) -> Vec<Subspace> {
        let mut series = vec![Subspace::full(self.dim)];
        loop {
            let current = series.last().unwrap();
            let next = self.bracket_image(current, current);
            if next.dim() == current.dim() {
                break;
            }
            let stop = next.dim() == 0;
            series.push(next);
            if stop {
                break;
            }
        }
        series
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last().unwrap().dim() == 0
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().unwrap().dim() == 0
    }

    /// Span of [a, b] over bases of the two subspaces. Image vectors are
    /// measured against the overall bracket scale so that floating-point
    /// dust in the input bases cannot masquerade as a new direction.
    pub fn bracket_image(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let scale = self.tensor().norm();
        let cutoff = 1e-10
            * scale
            * a.basis().norm().max(1.0)
            * b.basis().norm().max(1.0);
        let mut cols: Vec<DVector<f64>> = Vec::new();
        for x in a.basis_columns() {
            for y in b.basis_columns() {
                let v = self.bracket(&x, &y).unwrap();
                if v.norm() > cutoff {
                    cols.push(v);
                }
            }
        }
        Subspace::spanned_by(self.dim, &cols)
    }

    /// Restricts the bracket to a subalgebra, expressing it in the given
    /// basis. Errors if the subspace is not closed under the bracket.
    pub fn restrict(&self, sub: &Subspace, jacobi_tol: f64) -> Result<LieAlgebra> {
        let d = sub.dim();
        let basis = sub.basis();
        let mut constants = Vec::new();
        let scale = self.tensor().norm().max(1.0);
        for a in 0..d {
            let xa = basis.column(a).into_owned();
            for b in (a + 1)..d {
                let xb = basis.column(b).into_owned();
                let v = self.bracket(&xa, &xb)?;
                let coeffs = linalg::lstsq(basis, &v);
                let residual = (basis * &coeffs - &v).norm();
                if residual > 1e-9 * scale {
                    return Err(Error::NotASubalgebra { what: "restriction target", residual });
                }
                for (k, &c) in coeffs.iter().enumerate() {
                    if c.abs() > 1e-13 * scale {
                        constants.push(StructureConstant { i: a, j: b, k, c });
                    }
                }
            }
        }
        LieAlgebra::with_tolerance(d, constants, jacobi_tol)
    }

    /// Applies an invertible change of basis `g`: the new constants describe
    /// the same algebra in the basis `g e_1, ..., g e_n` pulled back, i.e.
    /// the bracket tensor transforms as mu_g(x, y) = g mu(g^-1 x, g^-1 y).
    pub fn change_basis(&self, g: &DMatrix<f64>, jacobi_tol: f64) -> Result<LieAlgebra> {
        let tensor = self.tensor().conjugate(g);
        tensor.to_algebra(jacobi_tol)
    }
}

/// A linear subspace of R^n given by a full-column-rank basis matrix.
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient_dim: usize,
    basis: DMatrix<f64>,
}

impl Subspace {
    pub fn new(ambient_dim: usize, basis: DMatrix<f64>) -> Result<Self> {
        if basis.nrows() != ambient_dim {
            return Err(Error::DimensionMismatch {
                context: "subspace basis",
                expected: ambient_dim,
                got: basis.nrows(),
            });
        }
        if basis.ncols() > 0 {
            let svd = basis.clone().svd(false, false);
            let max = svd.singular_values.max();
            let min = svd.singular_values.min();
            if min <= 1e-10 * max {
                return Err(Error::RankDeficient { ratio: min / max });
            }
        }
        Ok(Subspace { ambient_dim, basis })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: DMatrix::zeros(ambient_dim, 0) }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: DMatrix::identity(ambient_dim, ambient_dim) }
    }

    /// Coordinate subspace spanned by the given (zero-based) basis indices.
    pub fn coordinate(ambient_dim: usize, indices: &[usize]) -> Result<Self> {
        let mut basis = DMatrix::zeros(ambient_dim, indices.len());
        for (col, &i) in indices.iter().enumerate() {
            if i >= ambient_dim {
                return Err(Error::DimensionMismatch {
                    context: "coordinate subspace index",
                    expected: ambient_dim,
                    got: i + 1,
                });
            }
            basis[(i, col)] = 1.0;
        }
        Subspace::new(ambient_dim, basis)
    }

    /// Span of the given columns, orthonormalized with the rank cutoff.
    pub fn spanned_by(ambient_dim: usize, columns: &[DVector<f64>]) -> Self {
        if columns.is_empty() {
            return Subspace::zero(ambient_dim);
        }
        let m = DMatrix::from_columns(columns);
        let basis_vectors = linalg::column_span(&m);
        if basis_vectors.is_empty() {
            return Subspace::zero(ambient_dim);
        }
        Subspace { ambient_dim, basis: DMatrix::from_columns(&basis_vectors) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn basis_columns(&self) -> Vec<DVector<f64>> {
        (0..self.dim()).map(|i| self.basis.column(i).into_owned()).collect()
    }

    /// Distance from `v` to the subspace, relative to ‖v‖.
    pub fn residual(&self, v: &DVector<f64>) -> f64 {
        let norm = v.norm();
        if norm == 0.0 {
            return 0.0;
        }
        if self.dim() == 0 {
            return 1.0;
        }
        let coeffs = linalg::lstsq(&self.basis, v);
        (&self.basis * coeffs - v).norm() / norm
    }

    pub fn contains(&self, v: &DVector<f64>, tol: f64) -> bool {
        self.residual(v) <= tol
    }

    /// Coefficients of `v` in this basis; error if `v` is not in the span.
    pub fn coordinates(&self, v: &DVector<f64>, what: &'static str) -> Result<DVector<f64>> {
        let coeffs = linalg::lstsq(&self.basis, v);
        let residual = (&self.basis * &coeffs - v).norm();
        if residual > 1e-8 * v.norm().max(1.0) {
            return Err(Error::NotASubspace { what, residual });
        }
        Ok(coeffs)
    }

    /// Whether every basis vector of `other` lies in this subspace.
    pub fn contains_subspace(&self, other: &Subspace, tol: f64) -> bool {
        other.basis_columns().iter().all(|v| self.contains(v, tol))
    }

    /// Orthonormal basis (standard dot) of the orthogonal complement.
    pub fn orthogonal_complement(&self) -> Subspace {
        let span = self.basis_columns();
        let comp = linalg::orthogonal_complement(&span, self.ambient_dim);
        if comp.is_empty() {
            Subspace::zero(self.ambient_dim)
        } else {
            Subspace { ambient_dim: self.ambient_dim, basis: DMatrix::from_columns(&comp) }
        }
    }
}

/// Evidence that a subspace really is the nilradical.
#[derive(Debug, Clone)]
pub struct NilradicalCertificate {
    /// Worst relative residual of [g, n] ⊆ n over basis pairs.
    pub ideal_residual: f64,
    /// Whether the restricted bracket is nilpotent.
    pub nilpotent: bool,
    /// Length of the lower central series of the restriction.
    pub series_length: usize,
    /// Spectral radius of ad y for each basis vector y of a complement.
    pub complement_spectra: Vec<f64>,
    /// All complement witnesses are non-nilpotent (best-effort maximality;
    /// a combination in the complement could still be ad-nilpotent, which
    /// this certificate cannot exclude).
    pub maximality_witnessed: bool,
}

/// The nilradical together with its certificate.
#[derive(Debug, Clone)]
pub struct Nilradical {
    pub subspace: Subspace,
    pub certificate: NilradicalCertificate,
}

/// Computes or verifies the nilradical.
///
/// With `declared` present, the declared subspace is checked: it must be an
/// ideal with nilpotent restricted bracket (hard errors), and each basis
/// vector of a complement must have non-nilpotent adjoint action (warning
/// recorded in the certificate, not an error). Without a declaration the
/// algebra must be solvable; the candidate is then built as the derived
/// algebra plus the ad-nilpotent complement directions.
pub fn nilradical(algebra: &LieAlgebra, declared: Option<&Subspace>) -> Result<Nilradical> {
    let candidate = match declared {
        Some(sub) => sub.clone(),
        None => {
            if !algebra.is_solvable() {
                return Err(Error::NilradicalNeedsDeclaration);
            }
            let derived = algebra.bracket_image(&Subspace::full(algebra.dim()), &Subspace::full(algebra.dim()));
            let mut cols = derived.basis_columns();
            let complement = derived.orthogonal_complement();
            for y in complement.basis_columns() {
                if linalg::spectral_radius(&algebra.ad(&y)) <= 1e-8 {
                    cols.push(y);
                }
            }
            Subspace::spanned_by(algebra.dim(), &cols)
        }
    };
    certify_nilradical(algebra, &candidate).map(|certificate| Nilradical {
        subspace: candidate,
        certificate,
    })
}

fn certify_nilradical(algebra: &LieAlgebra, n: &Subspace) -> Result<NilradicalCertificate> {
    // (a) ideal: [g, n] ⊆ n.
    let mut ideal_residual = 0.0_f64;
    for i in 0..algebra.dim() {
        let ei = algebra.basis_vector(i);
        for y in n.basis_columns() {
            let v = algebra.bracket(&ei, &y)?;
            if v.norm() > 0.0 {
                ideal_residual = ideal_residual.max(n.residual(&v));
            }
        }
    }
    if ideal_residual > 1e-9 {
        return Err(Error::NilradicalRejected {
            reason: format!("not an ideal: [g, n] leaves n with residual {ideal_residual:.3e}"),
        });
    }
    // (b) nilpotent restricted bracket.
    let restricted = algebra.restrict(n, 1e-9)?;
    let series = restricted.lower_central_series();
    let nilpotent = series.last().unwrap().dim() == 0;
    if !nilpotent {
        return Err(Error::NilradicalRejected {
            reason: "restricted bracket is not nilpotent".to_string(),
        });
    }
    // (c) maximality witness on a complement.
    let complement = n.orthogonal_complement();
    let mut complement_spectra = Vec::new();
    let mut maximality_witnessed = true;
    for y in complement.basis_columns() {
        let radius = linalg::spectral_radius(&algebra.ad(&y));
        if radius <= 1e-8 {
            maximality_witnessed = false;
        }
        complement_spectra.push(radius);
    }
    Ok(NilradicalCertificate {
        ideal_residual,
        nilpotent,
        series_length: series.len(),
        complement_spectra,
        maximality_witnessed,
    })
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// Heisenberg algebra h3: [e1, e2] = e3.
    pub fn h3() -> LieAlgebra {
        LieAlgebra::new(3, vec![StructureConstant { i: 0, j: 1, k: 2, c: 1.0 }]).unwrap()
    }

    /// R ⋉ R^(n-1) with ad(xi) = I, xi the first basis vector.
    pub fn hyperbolic(n: usize) -> LieAlgebra {
        let constants = (1..n)
            .map(|j| StructureConstant { i: 0, j, k: j, c: 1.0 })
            .collect();
        LieAlgebra::new(n, constants).unwrap()
    }

    /// so(3): [e1,e2]=e3, [e2,e3]=e1, [e3,e1]=e2.
    pub fn so3() -> LieAlgebra {
        LieAlgebra::new(
            3,
            vec![
                StructureConstant { i: 0, j: 1, k: 2, c: 1.0 },
                StructureConstant { i: 1, j: 2, k: 0, c: 1.0 },
                StructureConstant { i: 0, j: 2, k: 1, c: -1.0 },
            ],
        )
        .unwrap()
    }
}
