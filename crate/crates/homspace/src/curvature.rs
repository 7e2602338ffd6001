//! The curvature engine: moment map term, mean curvature, Ricci operator
//! by the algebraic formula Ric = M_p − ½ B_p − S(ad_p H), and an
//! independent oracle that assembles the full curvature tensor from the
//! canonical connection of the reductive decomposition.
//!
//! The two routes share nothing beyond the frame data, so their agreement
//! is a real end-to-end check; a mismatch is reported as an engine bug and
//! never averaged away.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::homogeneous::HomogeneousSpace;

/// Tolerance for the internal moment-map trace identity validation.
const MOMENT_VALIDATION_TOL: f64 = 1e-9;

impl HomogeneousSpace {
    /// The moment map term M_p in the frame: the unique symmetric matrix
    /// with tr(M_p E) = ¼ ⟨pi(E) mu_p, mu_p⟩, computed by the explicit
    /// double sum and validated against the defining trace identity.
    pub fn moment_term_frame(&self) -> Result<DMatrix<f64>> {
        let t = self.bracket_tensor_frame();
        let m = t.moment_matrix();
        let residual = t.moment_trace_residual();
        let scale = t.norm_sq().max(1.0);
        if residual > MOMENT_VALIDATION_TOL * scale {
            return Err(Error::EngineMismatch {
                name: "moment map trace identity",
                residual,
                tolerance: MOMENT_VALIDATION_TOL * scale,
            });
        }
        Ok(m)
    }

    /// M_p in the user basis of p.
    pub fn moment_term(&self) -> Result<DMatrix<f64>> {
        Ok(self.operator_to_user(&self.moment_term_frame()?))
    }

    /// Mean curvature vector H in frame coordinates: ⟨H, X⟩ = tr ad X.
    pub fn mean_curvature_frame(&self) -> DVector<f64> {
        self.frame.mean_curvature.clone()
    }

    /// H in user coordinates of p; zero exactly when g is unimodular.
    pub fn mean_curvature(&self) -> DVector<f64> {
        self.vector_to_user(&self.frame.mean_curvature)
    }

    /// Killing form restricted to p as a frame operator.
    pub fn killing_p_frame(&self) -> DMatrix<f64> {
        self.frame.killing_p.clone()
    }

    /// S(ad_p H) in the frame.
    pub fn mean_curvature_shape_frame(&self) -> DMatrix<f64> {
        let ad_h = self.ad_p_frame(&self.frame.mean_curvature);
        0.5 * (&ad_h + ad_h.transpose())
    }

    /// Ricci operator in the frame via Ric = M_p − ½ B_p − S(ad_p H).
    pub fn ricci_frame(&self) -> Result<DMatrix<f64>> {
        let m = self.moment_term_frame()?;
        Ok(m - 0.5 * &self.frame.killing_p - self.mean_curvature_shape_frame())
    }

    /// Ricci operator in the user basis of p.
    pub fn ricci(&self) -> Result<DMatrix<f64>> {
        Ok(self.operator_to_user(&self.ricci_frame()?))
    }

    /// Connection coefficient operator of the frame vector f_a:
    /// Λ(X)Y = ½ mu_p(X, Y) + U(X, Y) with U from the Koszul identity.
    pub fn nomizu_frame(&self, a: usize) -> DMatrix<f64> {
        let d = self.dim_p();
        let t = self.bracket_tensor_frame();
        let mut lam = DMatrix::zeros(d, d);
        for b in 0..d {
            for c in 0..d {
                lam[(c, b)] = 0.5 * (t.get(a, b, c) + t.get(c, a, b) + t.get(c, b, a));
            }
        }
        lam
    }

    /// Λ(v) for a frame vector v.
    pub fn nomizu_of_frame(&self, v: &DVector<f64>) -> DMatrix<f64> {
        let d = self.dim_p();
        let mut lam = DMatrix::zeros(d, d);
        for a in 0..d {
            if v[a] != 0.0 {
                lam += v[a] * self.nomizu_frame(a);
            }
        }
        lam
    }

    /// Curvature operator R(f_a, f_b) in the frame:
    /// R(X,Y) = [Λ(X), Λ(Y)] − Λ([X,Y]_p) − ad([X,Y]_k)|_p.
    fn curvature_operator_frame(&self, lams: &[DMatrix<f64>], a: usize, b: usize) -> DMatrix<f64> {
        let d = self.dim_p();
        let t = self.bracket_tensor_frame();
        let mut r = &lams[a] * &lams[b] - &lams[b] * &lams[a];
        let mut bracket_p = DVector::zeros(d);
        for c in 0..d {
            bracket_p[c] = t.get(a, b, c);
        }
        r -= self.nomizu_of_frame(&bracket_p);
        for (rr, action) in self.frame.isotropy_action.iter().enumerate() {
            let coeff = self.frame.kappa[rr][(a, b)];
            if coeff != 0.0 {
                r -= coeff * action;
            }
        }
        r
    }

    /// Ricci operator in the frame computed from the full curvature tensor:
    /// ric(X, Y) = Σ_a ⟨R(f_a, X) Y, f_a⟩. Shares nothing with
    /// [`HomogeneousSpace::ricci_frame`] except the frame itself.
    pub fn ricci_via_connection_frame(&self) -> Result<DMatrix<f64>> {
        let d = self.dim_p();
        let lams: Vec<DMatrix<f64>> = (0..d).map(|a| self.nomizu_frame(a)).collect();
        let mut ric = DMatrix::zeros(d, d);
        for b in 0..d {
            for a in 0..d {
                let r_ab = self.curvature_operator_frame(&lams, a, b);
                for c in 0..d {
                    ric[(b, c)] += r_ab[(a, c)];
                }
            }
        }
        // Symmetrize away the last floating-point dust; the asymmetry is
        // itself a consistency signal checked in tests.
        Ok(0.5 * (&ric + ric.transpose()))
    }

    /// Connection-route Ricci in the user basis.
    pub fn ricci_via_connection(&self) -> Result<DMatrix<f64>> {
        Ok(self.operator_to_user(&self.ricci_via_connection_frame()?))
    }

    /// Computes both Ricci routes and errors if they disagree.
    pub fn ricci_checked(&self) -> Result<DMatrix<f64>> {
        let algebraic = self.ricci_frame()?;
        let connection = self.ricci_via_connection_frame()?;
        let residual = (&algebraic - &connection).norm();
        let tol = 1e-9 * algebraic.norm().max(1.0);
        if residual > tol {
            return Err(Error::EngineMismatch {
                name: "two-route Ricci",
                residual,
                tolerance: tol,
            });
        }
        Ok(self.operator_to_user(&algebraic))
    }

    /// Mismatch between the two Ricci routes (frame Frobenius norm).
    pub fn ricci_route_mismatch(&self) -> Result<f64> {
        Ok((self.ricci_frame()? - self.ricci_via_connection_frame()?).norm())
    }

    pub fn scalar_curvature(&self) -> Result<f64> {
        Ok(self.ricci_frame()?.trace())
    }

    /// Divergence of a metric-symmetric operator field, as a covector on
    /// the user basis of p: (div T)(X) = Σ_i ⟨(Λ(f_i) T − T Λ(f_i)) f_i, X⟩.
    pub fn divergence_sym(&self, t_user: &DMatrix<f64>) -> Result<DVector<f64>> {
        let d = self.dim_p();
        let split = self.metric_adjoint_split(t_user)?;
        let scale = t_user.norm().max(1.0);
        if split.skew_part.norm() > 1e-9 * scale {
            return Err(Error::Precondition(format!(
                "divergence input must be metric-symmetric (skew part {:.3e})",
                split.skew_part.norm()
            )));
        }
        let t_frame = self.operator_to_frame(t_user);
        let mut omega = DVector::zeros(d);
        for i in 0..d {
            let lam = self.nomizu_frame(i);
            let derivative = &lam * &t_frame - &t_frame * lam;
            for a in 0..d {
                omega[a] += derivative[(a, i)];
            }
        }
        // Covector components on the user basis.
        Ok(self.frame.from_user.transpose() * omega)
    }

    /// Divergence of a frame operator, frame components (no symmetry check).
    pub fn divergence_frame(&self, t_frame: &DMatrix<f64>) -> DVector<f64> {
        let d = self.dim_p();
        let mut omega = DVector::zeros(d);
        for i in 0..d {
            let lam = self.nomizu_frame(i);
            let derivative = &lam * t_frame - t_frame * lam;
            for a in 0..d {
                omega[a] += derivative[(a, i)];
            }
        }
        omega
    }

    /// Norm of the h x h -> n component of the projected bracket (requires
    /// a splitting); ordered-pair convention.
    pub fn lambda1_norm(&self) -> Result<f64> {
        let h_dim = self.dim_h().ok_or(Error::MissingSplitting)?;
        let d = self.dim_p();
        let t = self.bracket_tensor_frame();
        let mut total = 0.0;
        for a in 0..h_dim {
            for b in 0..h_dim {
                for k in h_dim..d {
                    let c = t.get(a, b, k);
                    total += c * c;
                }
            }
        }
        Ok(total.sqrt())
    }

    /// tr((Ric + S(ad_p H)) D_p) for a derivation of g preserving k; the
    /// trace vanishes identically for genuine derivations.
    pub fn ric_derivation_trace(&self, derivation: &DMatrix<f64>) -> Result<f64> {
        let d_p = self.induced_operator_frame(derivation)?;
        let combined = self.ricci_frame()? + self.mean_curvature_shape_frame();
        Ok((combined * d_p).trace())
    }
}
