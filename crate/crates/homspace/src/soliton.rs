//! Algebraic Ricci soliton fitting: least-squares solution of
//! Ric = c I + D_p over the soliton constant c and derivations D of g
//! preserving k.

use nalgebra::{DMatrix, DVector};

use crate::derivations::{derivations_preserving, DerivationBasis};
use crate::error::{Error, Result};
use crate::homogeneous::HomogeneousSpace;
use crate::linalg;

/// Result of the affine least-squares soliton fit.
#[derive(Debug, Clone)]
pub struct SolitonFit {
    /// Fitted soliton constant.
    pub c: f64,
    /// Fitted derivation of g (zero matrix when the span is empty).
    pub derivation: DMatrix<f64>,
    /// Induced operator on p in the orthonormal frame.
    pub d_p_frame: DMatrix<f64>,
    /// ‖Ric − c I − D_p‖ in the metric-Frobenius norm.
    pub residual: f64,
    /// First-order optimality: norm of the projection of the residual
    /// matrix onto the fit directions (identity and derivation span).
    pub optimality_residual: f64,
    /// The identity of p lies in the span of induced derivations, so c is
    /// not identifiable; the minimal-norm solution is reported.
    pub identity_degenerate: bool,
    /// ‖[D_p, D_p^t]‖: zero means the fitted derivation is normal.
    pub normality_residual: f64,
    /// ‖Ric − c I − S(D_p)‖: whether the symmetric part alone fits.
    pub symmetric_fit_residual: f64,
}

impl SolitonFit {
    /// Induced operator on p in the user basis.
    pub fn d_p(&self, space: &HomogeneousSpace) -> DMatrix<f64> {
        space.operator_to_user(&self.d_p_frame)
    }
}

fn vec_of(m: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_column_slice(m.as_slice())
}

/// Least-squares fit of Ric = c I + D_p with D ranging over derivations of
/// g that preserve k. With `fixed_c` the constant is pinned and only the
/// derivation coefficients are solved for.
pub fn soliton_fit_with(space: &HomogeneousSpace, fixed_c: Option<f64>) -> Result<SolitonFit> {
    let ders = derivations_preserving(space.algebra(), space.isotropy())?;
    soliton_fit_in_span(space, &ders, fixed_c)
}

pub fn soliton_fit(space: &HomogeneousSpace) -> Result<SolitonFit> {
    soliton_fit_with(space, None)
}

/// Fit against an explicit derivation basis (the basis elements must be
/// derivations of g preserving k).
pub fn soliton_fit_in_span(
    space: &HomogeneousSpace,
    ders: &DerivationBasis,
    fixed_c: Option<f64>,
) -> Result<SolitonFit> {
    let d = space.dim_p();
    let ric = space.ricci_frame()?;
    let induced: Vec<DMatrix<f64>> = ders
        .iter()
        .map(|m| space.induced_operator_frame(m))
        .collect::<Result<_>>()?;

    let identity = DMatrix::identity(d, d);
    let mut columns: Vec<DVector<f64>> = Vec::new();
    if fixed_c.is_none() {
        columns.push(vec_of(&identity));
    }
    for m in &induced {
        columns.push(vec_of(m));
    }

    let target = match fixed_c {
        None => vec_of(&ric),
        Some(c) => vec_of(&(ric.clone() - c * &identity)),
    };

    let (solution, residual_vec) = if columns.is_empty() {
        (DVector::zeros(0), target.clone())
    } else {
        let a = DMatrix::from_columns(&columns);
        let x = linalg::lstsq(&a, &target);
        let r = &a * &x - &target;
        (x, r)
    };
    let residual = residual_vec.norm();

    // First-order optimality: the residual must be orthogonal to the
    // identity direction and to every induced derivation.
    let res_matrix = DMatrix::from_column_slice(d, d, residual_vec.as_slice());
    let mut optimality = (res_matrix.transpose() * &identity).trace().abs() / (d as f64).sqrt();
    if fixed_c.is_some() {
        optimality = 0.0; // identity direction not part of the fit
    }
    for m in &induced {
        let norm = m.norm().max(1.0);
        optimality = optimality.max((res_matrix.transpose() * m).trace().abs() / norm);
    }

    let (c, coeffs) = match fixed_c {
        None => {
            let c = if solution.is_empty() { 0.0 } else { solution[0] };
            (c, solution.rows(1, solution.len().saturating_sub(1)).into_owned())
        }
        Some(c) => (c, solution.clone()),
    };

    let n = space.algebra().dim();
    let mut derivation = DMatrix::zeros(n, n);
    let mut d_p_frame = DMatrix::zeros(d, d);
    for (i, x) in coeffs.iter().enumerate() {
        derivation += *x * &ders.matrices()[i];
        d_p_frame += *x * &induced[i];
    }

    let identity_degenerate = if induced.is_empty() {
        false
    } else {
        let a = DMatrix::from_columns(&induced.iter().map(vec_of).collect::<Vec<_>>());
        let b = vec_of(&identity);
        let x = linalg::lstsq(&a, &b);
        (a * x - b).norm() < 1e-9 * identity.norm()
    };

    let normality_residual = linalg::commutator(&d_p_frame, &d_p_frame.transpose()).norm();
    let s = 0.5 * (&d_p_frame + d_p_frame.transpose());
    let symmetric_fit_residual = (&ric - c * &identity - s).norm();

    Ok(SolitonFit {
        c,
        derivation,
        d_p_frame,
        residual,
        optimality_residual: optimality,
        identity_degenerate,
        normality_residual,
        symmetric_fit_residual,
    })
}

/// Guard used by validation paths: the fitted derivation must genuinely
/// lie in the derivation span (defense against accumulation in the
/// coefficient reconstruction).
pub fn check_fit_derivation(space: &HomogeneousSpace, fit: &SolitonFit) -> Result<()> {
    let ders = derivations_preserving(space.algebra(), space.isotropy())?;
    let residual = ders.span_residual(&fit.derivation);
    if residual > 1e-9 {
        return Err(Error::InvariantViolation {
            name: "soliton derivation in preserving span",
            residual,
            tolerance: 1e-9,
        });
    }
    Ok(())
}
