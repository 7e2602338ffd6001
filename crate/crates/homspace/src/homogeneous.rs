//! Homogeneous space data: a Lie algebra with a reductive decomposition
//! g = k ⊕ p, an inner product on p, and optionally an orthogonal
//! splitting p = h ⊕ n with n the nilradical.
//!
//! All curvature computations happen in an orthonormal frame of p obtained
//! by Cholesky orthonormalization of the supplied basis against the
//! supplied metric (blockwise h-then-n when a splitting is present, so the
//! frame is adapted to it). Operators returned by the public API are
//! expressed in the user's p basis unless the name says `_frame`; in the
//! frame, metric adjoints are plain transposes.

use nalgebra::{DMatrix, DVector};

use crate::algebra::{nilradical, LieAlgebra, NilradicalCertificate, Subspace};
use crate::bracket::BracketTensor;
use crate::error::{Error, Result};
use crate::linalg;

/// Validation tolerances for space construction.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Exact-identity checks (orthogonality, skewness, closures).
    pub identity: f64,
    /// Jacobi defect of hand-entered constants.
    pub jacobi: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { identity: 1e-9, jacobi: 1e-12 }
    }
}

/// Orthogonal splitting p = h ⊕ n with certified nilradical n.
#[derive(Debug, Clone)]
pub struct Splitting {
    pub h: Subspace,
    pub n: Subspace,
    pub certificate: NilradicalCertificate,
}

/// Symmetric/skew decomposition of an endomorphism of p with respect to
/// the metric adjoint.
#[derive(Debug, Clone)]
pub struct EndomorphismSplit {
    pub full: DMatrix<f64>,
    pub symmetric_part: DMatrix<f64>,
    pub skew_part: DMatrix<f64>,
}

#[derive(Debug, Clone)]
pub(crate) struct Frame {
    /// Columns are the orthonormal frame vectors of p, in g coordinates.
    pub vectors: DMatrix<f64>,
    /// Frame coordinates -> user p-basis coordinates.
    pub to_user: DMatrix<f64>,
    /// User p-basis coordinates -> frame coordinates.
    pub from_user: DMatrix<f64>,
    /// Projected bracket mu_p on the frame.
    pub mu_p: BracketTensor,
    /// k-components of frame brackets: kappa[r][(a, b)] is the r-th
    /// isotropy coordinate of [f_a, f_b].
    pub kappa: Vec<DMatrix<f64>>,
    /// ad Z_r restricted to p, in the frame, per isotropy basis vector.
    pub isotropy_action: Vec<DMatrix<f64>>,
    /// Killing form restricted to p, as a frame operator.
    pub killing_p: DMatrix<f64>,
    /// Mean curvature vector in frame coordinates.
    pub mean_curvature: DVector<f64>,
    /// Number of leading frame vectors spanning h (when split).
    pub h_dim: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct HomogeneousSpace {
    algebra: LieAlgebra,
    isotropy: Subspace,
    complement: Subspace,
    metric: DMatrix<f64>,
    splitting: Option<Splitting>,
    tolerances: Tolerances,
    pub(crate) frame: Frame,
}

impl HomogeneousSpace {
    /// Space with trivial isotropy: p = g with the given inner product.
    pub fn trivial_isotropy(algebra: LieAlgebra, metric: DMatrix<f64>) -> Result<Self> {
        let dim = algebra.dim();
        Self::new(algebra, Subspace::zero(dim), Subspace::full(dim), metric)
    }

    pub fn new(
        algebra: LieAlgebra,
        isotropy: Subspace,
        complement: Subspace,
        metric: DMatrix<f64>,
    ) -> Result<Self> {
        Self::with_options(algebra, isotropy, complement, metric, None, Tolerances::default())
    }

    pub fn with_options(
        algebra: LieAlgebra,
        isotropy: Subspace,
        complement: Subspace,
        metric: DMatrix<f64>,
        splitting: Option<(Subspace, Subspace)>,
        tolerances: Tolerances,
    ) -> Result<Self> {
        let n = algebra.dim();
        let q = isotropy.dim();
        let d = complement.dim();
        if isotropy.ambient_dim() != n || complement.ambient_dim() != n {
            return Err(Error::DimensionMismatch {
                context: "reductive decomposition",
                expected: n,
                got: isotropy.ambient_dim().max(complement.ambient_dim()),
            });
        }
        if q + d != n {
            return Err(Error::DimensionMismatch {
                context: "k + p must fill the algebra",
                expected: n,
                got: q + d,
            });
        }
        if metric.nrows() != d || metric.ncols() != d {
            return Err(Error::DimensionMismatch {
                context: "metric size",
                expected: d,
                got: metric.nrows(),
            });
        }
        linalg::check_spd(&metric)?;

        // g = k ⊕ p as a direct sum.
        let mut w = DMatrix::zeros(n, n);
        w.view_mut((0, 0), (n, q)).copy_from(isotropy.basis());
        w.view_mut((0, q), (n, d)).copy_from(complement.basis());
        let w_inv = w.clone().try_inverse().ok_or(Error::InvariantViolation {
            name: "g = k + p direct sum",
            residual: 1.0,
            tolerance: 0.0,
        })?;

        let tol = tolerances.identity;
        let b = algebra.killing_form();

        // Isotropy must be a subalgebra on which the Killing form is
        // negative definite and Killing-orthogonal to p.
        if q > 0 {
            for x in isotropy.basis_columns() {
                for y in isotropy.basis_columns() {
                    let v = algebra.bracket(&x, &y)?;
                    if v.norm() > 0.0 && isotropy.residual(&v) > tol {
                        return Err(Error::NotASubalgebra {
                            what: "isotropy",
                            residual: isotropy.residual(&v),
                        });
                    }
                }
            }
            let bk = isotropy.basis().transpose() * &b * isotropy.basis();
            let eigmax = linalg::sym_eigenvalues(&bk).last().cloned().unwrap_or(0.0);
            if eigmax >= 0.0 {
                return Err(Error::InvariantViolation {
                    name: "Killing form negative definite on k",
                    residual: eigmax,
                    tolerance: 0.0,
                });
            }
            let cross = (isotropy.basis().transpose() * &b * complement.basis()).norm();
            let scale = b.norm().max(1.0);
            if cross > tol * scale {
                return Err(Error::InvariantViolation {
                    name: "B(k, p) = 0",
                    residual: cross,
                    tolerance: tol * scale,
                });
            }
        }

        let splitting = match splitting {
            None => None,
            Some((h, nn)) => {
                Some(Self::validate_splitting(&algebra, &complement, &metric, h, nn, tol)?)
            }
        };

        let frame = Self::build_frame(
            &algebra,
            &isotropy,
            &complement,
            &metric,
            splitting.as_ref(),
            &w_inv,
            tol,
        )?;

        Ok(HomogeneousSpace {
            algebra,
            isotropy,
            complement,
            metric,
            splitting,
            tolerances,
            frame,
        })
    }

    fn validate_splitting(
        algebra: &LieAlgebra,
        complement: &Subspace,
        metric: &DMatrix<f64>,
        h: Subspace,
        n: Subspace,
        tol: f64,
    ) -> Result<Splitting> {
        let d = complement.dim();
        if h.dim() + n.dim() != d {
            return Err(Error::DimensionMismatch {
                context: "h + n must fill p",
                expected: d,
                got: h.dim() + n.dim(),
            });
        }
        for v in h.basis_columns().iter().chain(n.basis_columns().iter()) {
            if complement.residual(v) > tol {
                return Err(Error::NotASubspace {
                    what: "splitting part",
                    residual: complement.residual(v),
                });
            }
        }
        // h ⊥ n in the metric.
        if h.dim() > 0 && n.dim() > 0 {
            let hc = Self::in_complement_coords(complement, &h)?;
            let nc = Self::in_complement_coords(complement, &n)?;
            let cross = (hc.transpose() * metric * nc).norm();
            let scale = metric.norm();
            if cross > tol * scale {
                return Err(Error::InvariantViolation {
                    name: "h orthogonal to n",
                    residual: cross,
                    tolerance: tol * scale,
                });
            }
        }
        let cert = nilradical(algebra, Some(&n))?;
        Ok(Splitting { h, n, certificate: cert.certificate })
    }

    fn in_complement_coords(complement: &Subspace, sub: &Subspace) -> Result<DMatrix<f64>> {
        let mut cols = Vec::new();
        for v in sub.basis_columns() {
            cols.push(complement.coordinates(&v, "splitting part")?);
        }
        Ok(if cols.is_empty() {
            DMatrix::zeros(complement.dim(), 0)
        } else {
            DMatrix::from_columns(&cols)
        })
    }

    /// Cholesky-orthonormalizes `columns` (given in user p coordinates)
    /// against the metric; returns user-coordinate columns of the new
    /// orthonormal vectors.
    fn cholesky_frame(metric: &DMatrix<f64>, columns: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        if columns.ncols() == 0 {
            return Ok(columns.clone());
        }
        let gram = columns.transpose() * metric * columns;
        let chol = nalgebra::Cholesky::new(gram).ok_or(Error::MetricNotPositive { eigmin: 0.0 })?;
        let l_inv_t = chol
            .l()
            .transpose()
            .try_inverse()
            .ok_or(Error::MetricNotPositive { eigmin: 0.0 })?;
        Ok(columns * l_inv_t)
    }

    #[allow(clippy::too_many_arguments)]
    fn build_frame(
        algebra: &LieAlgebra,
        isotropy: &Subspace,
        complement: &Subspace,
        metric: &DMatrix<f64>,
        splitting: Option<&Splitting>,
        w_inv: &DMatrix<f64>,
        tol: f64,
    ) -> Result<Frame> {
        let q = isotropy.dim();
        let d = complement.dim();

        // to_user: frame coordinates -> user coordinates of p.
        let (to_user, h_dim) = match splitting {
            None => (Self::cholesky_frame(metric, &DMatrix::identity(d, d))?, None),
            Some(split) => {
                let hc = Self::in_complement_coords(complement, &split.h)?;
                let nc = Self::in_complement_coords(complement, &split.n)?;
                let hf = Self::cholesky_frame(metric, &hc)?;
                let nf = Self::cholesky_frame(metric, &nc)?;
                let mut c = DMatrix::zeros(d, d);
                c.view_mut((0, 0), (d, hf.ncols())).copy_from(&hf);
                c.view_mut((0, hf.ncols()), (d, nf.ncols())).copy_from(&nf);
                (c, Some(hf.ncols()))
            }
        };
        let from_user = to_user.clone().try_inverse().ok_or(Error::RankDeficient { ratio: 0.0 })?;
        let vectors = complement.basis() * &to_user;

        // Split [f_a, f_b] into k and p parts via z = W^-1 [f_a, f_b].
        let mut mu_p = BracketTensor::zero(d);
        let mut kappa = vec![DMatrix::zeros(d, d); q];
        for a in 0..d {
            let fa = vectors.column(a).into_owned();
            for bidx in (a + 1)..d {
                let fb = vectors.column(bidx).into_owned();
                let v = algebra.bracket(&fa, &fb)?;
                let z = w_inv * v;
                for r in 0..q {
                    kappa[r][(a, bidx)] = z[r];
                    kappa[r][(bidx, a)] = -z[r];
                }
                let user = z.rows(q, d).into_owned();
                let frame_coords = &from_user * user;
                for k in 0..d {
                    if frame_coords[k] != 0.0 {
                        mu_p.add(a, bidx, k, frame_coords[k]);
                    }
                }
            }
        }

        // ad Z|_p per isotropy basis vector; [k, p] ⊆ p and metric skewness.
        let mut isotropy_action = Vec::with_capacity(q);
        for r in 0..q {
            let z_vec = isotropy.basis().column(r).into_owned();
            let mut m = DMatrix::zeros(d, d);
            for bidx in 0..d {
                let fb = vectors.column(bidx).into_owned();
                let v = algebra.bracket(&z_vec, &fb)?;
                let z = w_inv * &v;
                let k_part = z.rows(0, q).norm();
                if k_part > tol * v.norm().max(1.0) {
                    return Err(Error::InvariantViolation {
                        name: "[k, p] contained in p",
                        residual: k_part,
                        tolerance: tol,
                    });
                }
                let frame_coords = &from_user * z.rows(q, d).into_owned();
                m.set_column(bidx, &frame_coords);
            }
            let skew_residual = (&m + m.transpose()).norm();
            if skew_residual > tol * m.norm().max(1.0) {
                return Err(Error::InvariantViolation {
                    name: "ad k skew-symmetric on p",
                    residual: skew_residual,
                    tolerance: tol,
                });
            }
            isotropy_action.push(m);
        }

        // Killing form as a frame operator and the mean curvature vector.
        let b = algebra.killing_form();
        let killing_p = vectors.transpose() * &b * &vectors;
        let mut mean = DVector::zeros(d);
        for a in 0..d {
            let fa = vectors.column(a).into_owned();
            mean[a] = algebra.ad(&fa).trace();
        }

        Ok(Frame {
            vectors,
            to_user,
            from_user,
            mu_p,
            kappa,
            isotropy_action,
            killing_p,
            mean_curvature: mean,
            h_dim,
        })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn isotropy(&self) -> &Subspace {
        &self.isotropy
    }

    pub fn complement(&self) -> &Subspace {
        &self.complement
    }

    pub fn metric(&self) -> &DMatrix<f64> {
        &self.metric
    }

    pub fn splitting(&self) -> Option<&Splitting> {
        self.splitting.as_ref()
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tolerances
    }

    /// Dimension of p.
    pub fn dim_p(&self) -> usize {
        self.complement.dim()
    }

    /// Dimension of the h part (0 when no splitting is present).
    pub fn dim_h(&self) -> Option<usize> {
        self.frame.h_dim
    }

    pub fn dim_n(&self) -> Option<usize> {
        self.frame.h_dim.map(|h| self.dim_p() - h)
    }

    /// The projected bracket mu_p as a tensor over the orthonormal frame.
    pub fn bracket_tensor_frame(&self) -> &BracketTensor {
        &self.frame.mu_p
    }

    /// Orthonormal frame vectors of p in algebra coordinates.
    pub fn frame_vectors(&self) -> &DMatrix<f64> {
        &self.frame.vectors
    }

    /// Converts an operator on p from frame to user coordinates.
    pub fn operator_to_user(&self, op_frame: &DMatrix<f64>) -> DMatrix<f64> {
        &self.frame.to_user * op_frame * &self.frame.from_user
    }

    /// Converts an operator on p from user to frame coordinates.
    pub fn operator_to_frame(&self, op_user: &DMatrix<f64>) -> DMatrix<f64> {
        &self.frame.from_user * op_user * &self.frame.to_user
    }

    /// Converts a vector in p from frame to user coordinates.
    pub fn vector_to_user(&self, v_frame: &DVector<f64>) -> DVector<f64> {
        &self.frame.to_user * v_frame
    }

    pub fn vector_to_frame(&self, v_user: &DVector<f64>) -> DVector<f64> {
        &self.frame.from_user * v_user
    }

    /// ad_p of a frame vector v: X -> mu_p(v, X), as a frame matrix.
    pub fn ad_p_frame(&self, v: &DVector<f64>) -> DMatrix<f64> {
        let d = self.dim_p();
        let t = &self.frame.mu_p;
        let mut m = DMatrix::zeros(d, d);
        for b in 0..d {
            for c in 0..d {
                let mut s = 0.0;
                for a in 0..d {
                    s += v[a] * t.get(a, b, c);
                }
                m[(c, b)] = s;
            }
        }
        m
    }

    /// Metric adjoint of a user-basis operator on p.
    pub fn metric_transpose(&self, e: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        let d = self.dim_p();
        if e.nrows() != d || e.ncols() != d {
            return Err(Error::DimensionMismatch {
                context: "operator on p",
                expected: d,
                got: e.nrows(),
            });
        }
        let q_inv = self
            .metric
            .clone()
            .try_inverse()
            .ok_or(Error::MetricNotPositive { eigmin: 0.0 })?;
        Ok(q_inv * e.transpose() * &self.metric)
    }

    /// Splits a user-basis operator into metric-symmetric and skew parts.
    pub fn metric_adjoint_split(&self, e: &DMatrix<f64>) -> Result<EndomorphismSplit> {
        let et = self.metric_transpose(e)?;
        let symmetric_part = 0.5 * (e + &et);
        let skew_part = 0.5 * (e - &et);
        Ok(EndomorphismSplit { full: e.clone(), symmetric_part, skew_part })
    }

    /// Projects a full algebra vector onto p along k, in user coordinates.
    pub fn project_to_p(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        let n = self.algebra.dim();
        let q = self.isotropy.dim();
        let d = self.dim_p();
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                context: "projection input",
                expected: n,
                got: x.len(),
            });
        }
        let mut w = DMatrix::zeros(n, n);
        w.view_mut((0, 0), (n, q)).copy_from(self.isotropy.basis());
        w.view_mut((0, q), (n, d)).copy_from(self.complement.basis());
        let z = w.lu().solve(x).ok_or(Error::RankDeficient { ratio: 0.0 })?;
        Ok(z.rows(q, d).into_owned())
    }

    /// The operator on p induced by a derivation of g that preserves k, as
    /// a frame matrix: X -> proj_p(D X).
    pub fn induced_operator_frame(&self, d_matrix: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        let d = self.dim_p();
        let mut m = DMatrix::zeros(d, d);
        for b in 0..d {
            let fb = self.frame.vectors.column(b).into_owned();
            let image = d_matrix * fb;
            let user = self.project_to_p(&image)?;
            let frame_coords = &self.frame.from_user * user;
            m.set_column(b, &frame_coords);
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fixtures::{h3, hyperbolic, so3};

    pub fn h3_space() -> HomogeneousSpace {
        HomogeneousSpace::trivial_isotropy(h3(), DMatrix::identity(3, 3)).unwrap()
    }

    #[test]
    fn frame_is_identity_for_identity_metric() {
        let hs = h3_space();
        assert!((hs.frame.to_user.clone() - DMatrix::identity(3, 3)).norm() < 1e-14);
        assert!((hs.frame.mu_p.get(0, 1, 2) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn frame_rescales_with_diagonal_metric() {
        let metric = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0, 4.0]));
        let hs = HomogeneousSpace::trivial_isotropy(h3(), metric).unwrap();
        // Third frame vector is e3 / 2, so [f1, f2] = e3 = 2 f3.
        assert!((hs.frame.mu_p.get(0, 1, 2) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn mean_curvature_of_hyperbolic_space() {
        let hs = HomogeneousSpace::trivial_isotropy(hyperbolic(3), DMatrix::identity(3, 3)).unwrap();
        let h = &hs.frame.mean_curvature;
        assert!((h[0] - 2.0).abs() < 1e-14);
        assert!(h[1].abs() < 1e-14 && h[2].abs() < 1e-14);
    }

    #[test]
    fn metric_adjoint_splits_with_weights() {
        let metric = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0, 4.0]));
        let hs = HomogeneousSpace::trivial_isotropy(h3(), metric).unwrap();
        let mut e = DMatrix::zeros(3, 3);
        e[(0, 2)] = 1.0;
        let split = hs.metric_adjoint_split(&e).unwrap();
        // Adjoint of e1 x e3* under diag(1,1,4) has 1/4 in the (3,1) slot.
        assert!((split.symmetric_part[(0, 2)] - 0.5).abs() < 1e-14);
        assert!((split.symmetric_part[(2, 0)] - 0.125).abs() < 1e-14);
        assert!((split.skew_part[(0, 2)] - 0.5).abs() < 1e-14);
        assert!((split.skew_part[(2, 0)] + 0.125).abs() < 1e-14);
        // Identity splits trivially.
        let id = hs.metric_adjoint_split(&DMatrix::identity(3, 3)).unwrap();
        assert!(id.skew_part.norm() < 1e-14);
        // Full = S + A always.
        assert!((split.symmetric_part + split.skew_part - e).norm() < 1e-14);
    }

    #[test]
    fn isotropy_validation_on_the_sphere() {
        // so(3) with k = span(e3): the round 2-sphere.
        let k = Subspace::coordinate(3, &[2]).unwrap();
        let p = Subspace::coordinate(3, &[0, 1]).unwrap();
        let hs = HomogeneousSpace::new(so3(), k, p, DMatrix::identity(2, 2)).unwrap();
        assert_eq!(hs.dim_p(), 2);
        // [e1, e2] = e3 lies in k: the projected bracket vanishes.
        assert!(hs.bracket_tensor_frame().norm() < 1e-14);
        // kappa records the k-component.
        assert!((hs.frame.kappa[0][(0, 1)] - 1.0).abs() < 1e-14);
        // ad e3 restricted to p is the standard rotation generator.
        let a = &hs.frame.isotropy_action[0];
        assert!((a[(0, 1)] + 1.0).abs() < 1e-14 && (a[(1, 0)] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn sphere_rejects_non_invariant_metric() {
        let k = Subspace::coordinate(3, &[2]).unwrap();
        let p = Subspace::coordinate(3, &[0, 1]).unwrap();
        let metric = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 2.0]));
        assert!(matches!(
            HomogeneousSpace::new(so3(), k, p, metric),
            Err(Error::InvariantViolation { name: "ad k skew-symmetric on p", .. })
        ));
    }

    #[test]
    fn splitting_requires_metric_orthogonality() {
        let l = hyperbolic(3);
        let h = Subspace::coordinate(3, &[0]).unwrap();
        let n = Subspace::coordinate(3, &[1, 2]).unwrap();
        let hs = HomogeneousSpace::with_options(
            l.clone(),
            Subspace::zero(3),
            Subspace::full(3),
            DMatrix::identity(3, 3),
            Some((h.clone(), n.clone())),
            Tolerances::default(),
        )
        .unwrap();
        assert_eq!(hs.dim_h(), Some(1));
        assert_eq!(hs.dim_n(), Some(2));

        let mut bad_metric = DMatrix::identity(3, 3);
        bad_metric[(0, 1)] = 0.4;
        bad_metric[(1, 0)] = 0.4;
        assert!(HomogeneousSpace::with_options(
            l,
            Subspace::zero(3),
            Subspace::full(3),
            bad_metric,
            Some((h, n)),
            Tolerances::default(),
        )
        .is_err());
    }

    #[test]
    fn splitting_rejects_wrong_nilradical() {
        // n = span(xi, e3) is not an ideal of hyperbolic(3).
        let l = hyperbolic(3);
        let h = Subspace::coordinate(3, &[1]).unwrap();
        let n = Subspace::coordinate(3, &[0, 2]).unwrap();
        assert!(HomogeneousSpace::with_options(
            l,
            Subspace::zero(3),
            Subspace::full(3),
            DMatrix::identity(3, 3),
            Some((h, n)),
            Tolerances::default(),
        )
        .is_err());
    }

    #[test]
    fn induced_operator_projects_through_k() {
        let hs = h3_space();
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0, 2.0]));
        let induced = hs.induced_operator_frame(&d).unwrap();
        assert!((induced - d).norm() < 1e-14);
    }
}
