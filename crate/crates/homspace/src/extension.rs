//! One-dimensional extensions: given (G/K, g), a derivation D of g
//! preserving k, and a scale alpha, build the metric Lie algebra of
//! R ⋉ G where the new unit direction xi acts by alpha D. The extension
//! goes through the ordinary HomogeneousSpace constructor, so its
//! curvature is computed by the same engine with no special-case
//! formulas.

use nalgebra::{DMatrix, DVector};

use crate::algebra::{LieAlgebra, StructureConstant, Subspace};
use crate::derivations::require_derivation;
use crate::error::{Error, Result};
use crate::homogeneous::HomogeneousSpace;

/// Squared scale factor of a warped-product extension:
/// alpha² = 1 / (tr S(D_p) − lambda · m). Errors when the denominator is
/// not positive (no real extension exists). `m` is passed as a real
/// number so the formal large-fiber limit can be probed.
pub fn lnm_alpha_squared(trace_s_dp: f64, lambda: f64, m: f64) -> Result<f64> {
    let radicand = trace_s_dp - lambda * m;
    if radicand <= 0.0 {
        return Err(Error::NonPositiveRadicand { radicand });
    }
    Ok(radicand.recip())
}

/// Positive square root of [`lnm_alpha_squared`].
pub fn lnm_alpha(trace_s_dp: f64, lambda: f64, m: f64) -> Result<f64> {
    lnm_alpha_squared(trace_s_dp, lambda, m).map(f64::sqrt)
}

/// Warping function w(r) = exp(lambda · alpha · r); positive with w(0) = 1.
pub fn warping(lambda: f64, alpha: f64, r: f64) -> f64 {
    (lambda * alpha * r).exp()
}

/// Checks that `derivation` is a derivation of the algebra of `base`
/// preserving its isotropy.
pub fn check_extension_derivation(
    base: &HomogeneousSpace,
    derivation: &DMatrix<f64>,
) -> Result<()> {
    let n = base.algebra().dim();
    if derivation.nrows() != n || derivation.ncols() != n {
        return Err(Error::DimensionMismatch {
            context: "extension derivation",
            expected: n,
            got: derivation.nrows(),
        });
    }
    let scale = derivation.norm().max(1.0) * base.algebra().tensor().norm().max(1.0);
    require_derivation(base.algebra(), derivation, 1e-9 * scale)?;
    for z in base.isotropy().basis_columns() {
        let image = derivation * &z;
        if image.norm() > 0.0 && base.isotropy().residual(&image) > 1e-9 {
            return Err(Error::Precondition(
                "extension derivation must preserve the isotropy subalgebra".into(),
            ));
        }
    }
    Ok(())
}

/// Builds the one-dimensional extension: new basis (xi, e_1, ..., e_n)
/// with [xi, X] = alpha D X, isotropy unchanged, p~ = R xi ⊕ p with xi of
/// unit norm orthogonal to p. The base splitting (h, n) propagates to
/// (R xi ⊕ h, n) when the nilradical certificate still passes; otherwise
/// the extension is built without a splitting.
pub fn extend(
    base: &HomogeneousSpace,
    derivation: &DMatrix<f64>,
    alpha: f64,
) -> Result<HomogeneousSpace> {
    check_extension_derivation(base, derivation)?;
    let n = base.algebra().dim();

    let mut constants: Vec<StructureConstant> = Vec::new();
    for col in 0..n {
        for row in 0..n {
            let c = alpha * derivation[(row, col)];
            if c != 0.0 {
                constants.push(StructureConstant { i: 0, j: col + 1, k: row + 1, c });
            }
        }
    }
    for sc in base.algebra().constants() {
        constants.push(StructureConstant { i: sc.i + 1, j: sc.j + 1, k: sc.k + 1, c: sc.c });
    }
    // Jacobi of the extension encodes exactly the derivation property, so
    // a forged "derivation" fails here even if it slipped past the check.
    let algebra = LieAlgebra::with_tolerance(
        n + 1,
        constants,
        (1e-9 * derivation.norm().max(1.0) * base.algebra().tensor().norm().max(1.0)).max(1e-12),
    )?;

    let embed = |sub: &Subspace| -> Result<Subspace> {
        let basis = sub.basis();
        let mut extended = DMatrix::zeros(n + 1, basis.ncols());
        extended.view_mut((1, 0), (n, basis.ncols())).copy_from(basis);
        Subspace::new(n + 1, extended)
    };

    let isotropy = embed(base.isotropy())?;
    let d = base.dim_p();
    let mut p_basis = DMatrix::zeros(n + 1, d + 1);
    p_basis[(0, 0)] = 1.0;
    p_basis
        .view_mut((1, 1), (n, d))
        .copy_from(base.complement().basis());
    let complement = Subspace::new(n + 1, p_basis)?;

    let mut metric = DMatrix::zeros(d + 1, d + 1);
    metric[(0, 0)] = 1.0;
    metric.view_mut((1, 1), (d, d)).copy_from(base.metric());

    let splitting = match base.splitting() {
        None => None,
        Some(split) => {
            let h_base = embed(&split.h)?;
            let mut h_basis = DMatrix::zeros(n + 1, h_base.dim() + 1);
            h_basis[(0, 0)] = 1.0;
            if h_base.dim() > 0 {
                h_basis
                    .view_mut((0, 1), (n + 1, h_base.dim()))
                    .copy_from(h_base.basis());
            }
            let h = Subspace::new(n + 1, h_basis)?;
            let nn = embed(&split.n)?;
            Some((h, nn))
        }
    };

    let tolerances = base.tolerances();
    match HomogeneousSpace::with_options(
        algebra.clone(),
        isotropy.clone(),
        complement.clone(),
        metric.clone(),
        splitting,
        tolerances,
    ) {
        Ok(space) => Ok(space),
        // Splitting propagation can fail (the nilradical may grow when D
        // is nilpotent); fall back to the raw extension.
        Err(Error::NilradicalRejected { .. }) => HomogeneousSpace::with_options(
            algebra, isotropy, complement, metric, None, tolerances,
        ),
        Err(e) => Err(e),
    }
}

/// Mean curvature of the extension by the closed formula
/// H~ = (alpha · tr S(D_p)) xi + H, in the extension's user coordinates
/// (xi first). Matches the engine value on the extension itself.
pub fn extended_mean_curvature(
    base: &HomogeneousSpace,
    derivation: &DMatrix<f64>,
    alpha: f64,
) -> Result<DVector<f64>> {
    check_extension_derivation(base, derivation)?;
    let d_p = base.induced_operator_frame(derivation)?;
    let h = base.mean_curvature();
    let mut out = DVector::zeros(base.dim_p() + 1);
    out[0] = alpha * d_p.trace();
    out.rows_mut(1, base.dim_p()).copy_from(&h);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fixtures::h3;
    use crate::algebra::LieAlgebra;
    use crate::homogeneous::Tolerances;

    fn diag(values: &[f64]) -> DMatrix<f64> {
        DMatrix::from_diagonal(&DVector::from_row_slice(values))
    }

    fn space(algebra: LieAlgebra) -> HomogeneousSpace {
        let d = algebra.dim();
        HomogeneousSpace::trivial_isotropy(algebra, DMatrix::identity(d, d)).unwrap()
    }

    fn h3_split_space() -> HomogeneousSpace {
        HomogeneousSpace::with_options(
            h3(),
            Subspace::zero(3),
            Subspace::full(3),
            DMatrix::identity(3, 3),
            Some((Subspace::zero(3), Subspace::full(3))),
            Tolerances::default(),
        )
        .unwrap()
    }

    #[test]
    fn extending_the_plane_by_identity_gives_hyperbolic_space() {
        let base = space(LieAlgebra::abelian(2));
        let ext = extend(&base, &DMatrix::identity(2, 2), 1.0).unwrap();
        let ric = ext.ricci().unwrap();
        assert!((ric + 2.0 * DMatrix::<f64>::identity(3, 3)).norm() < 1e-13);
        assert!(ext.ricci_route_mismatch().unwrap() < 1e-13);
    }

    #[test]
    fn zero_derivation_gives_a_metric_product() {
        let base = space(h3());
        let ext = extend(&base, &DMatrix::zeros(3, 3), 2.5).unwrap();
        let ric = ext.ricci().unwrap();
        // xi row and column vanish exactly.
        for i in 0..4 {
            assert_eq!(ric[(0, i)], 0.0);
            assert_eq!(ric[(i, 0)], 0.0);
        }
        let base_ric = base.ricci().unwrap();
        assert!((ric.view((1, 1), (3, 3)).clone_owned() - base_ric).norm() < 1e-14);
    }

    #[test]
    fn soliton_extension_of_h3() {
        let base = h3_split_space();
        let alpha = 7.0_f64.sqrt().recip();
        let ext = extend(&base, &diag(&[1.0, 1.0, 2.0]), alpha).unwrap();
        let expected = diag(&[-6.0 / 7.0, -15.0 / 14.0, -15.0 / 14.0, -9.0 / 14.0]);
        assert!((ext.ricci().unwrap() - expected).norm() < 1e-13);
        // Splitting propagated: h = R xi, n = h3.
        assert_eq!(ext.dim_h(), Some(1));
        assert_eq!(ext.dim_n(), Some(3));
        // The base bracket is recovered bit for bit.
        for sc in base.algebra().constants() {
            let found = ext
                .algebra()
                .constants()
                .iter()
                .any(|e| e.i == sc.i + 1 && e.j == sc.j + 1 && e.k == sc.k + 1 && e.c == sc.c);
            assert!(found);
        }
    }

    #[test]
    fn extension_rejects_non_derivations() {
        let base = space(h3());
        // The identity is not a derivation of h3.
        assert!(extend(&base, &DMatrix::identity(3, 3), 1.0).is_err());
    }

    #[test]
    fn mean_curvature_formula_matches_engine() {
        let base = h3_split_space();
        let alpha = 7.0_f64.sqrt().recip();
        let d = diag(&[1.0, 1.0, 2.0]);
        let formula = extended_mean_curvature(&base, &d, alpha).unwrap();
        assert!((formula[0] - 4.0 / 7.0_f64.sqrt()).abs() < 1e-14);
        let ext = extend(&base, &d, alpha).unwrap();
        let engine = ext.mean_curvature();
        assert!((formula - engine).norm() < 1e-12);

        // D = 0 leaves the mean curvature alone.
        let base = space(crate::algebra::fixtures::hyperbolic(3));
        let formula = extended_mean_curvature(&base, &DMatrix::zeros(3, 3), 1.0).unwrap();
        let engine = extend(&base, &DMatrix::zeros(3, 3), 1.0).unwrap().mean_curvature();
        assert!((formula - engine).norm() < 1e-13);
    }

    #[test]
    fn alpha_formula() {
        // tr S(D_p) = 4, lambda = -3/2, m = 2: alpha^2 = 1/7 exactly.
        assert_eq!(lnm_alpha_squared(4.0, -1.5, 2.0).unwrap(), 1.0 / 7.0);
        let alpha = lnm_alpha(4.0, -1.5, 2.0).unwrap();
        assert!((alpha * alpha - 1.0 / 7.0).abs() < 1e-16);
        // Degenerate limit: alpha -> 0 as m -> infinity.
        let tiny = lnm_alpha(4.0, -1.5, 1e6).unwrap();
        assert!(tiny < 1e-3);
        // D = 0, lambda = -1, m = 1 gives alpha = 1.
        assert_eq!(lnm_alpha(0.0, -1.0, 1.0).unwrap(), 1.0);
        // Nonpositive radicand is an error.
        assert!(lnm_alpha(1.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn warping_function_shape() {
        assert_eq!(warping(-1.5, 0.5, 0.0), 1.0);
        let alpha = 7.0_f64.sqrt().recip();
        let w = warping(-1.5, alpha, 7.0_f64.sqrt());
        assert!((w - (-1.5_f64).exp()).abs() < 1e-15);
        // Monotone decreasing for lambda * alpha < 0.
        assert!(warping(-1.5, 0.5, 1.0) > warping(-1.5, 0.5, 2.0));
    }

    #[test]
    fn sign_flipped_data_gives_an_isometric_extension() {
        let base = h3_split_space();
        let d = diag(&[1.0, 1.0, 2.0]);
        let alpha = 0.5;
        let ric_plus = extend(&base, &d, alpha).unwrap().ricci_frame().unwrap();
        let ric_minus = extend(&base, &(-d), alpha).unwrap().ricci_frame().unwrap();
        // xi -> -xi conjugates one extension into the other.
        let spec_plus = crate::linalg::sym_eigenvalues(&ric_plus);
        let spec_minus = crate::linalg::sym_eigenvalues(&ric_minus);
        for (a, b) in spec_plus.iter().zip(spec_minus.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn einstein_extension_of_h3_at_alpha_one_half() {
        let base = h3_split_space();
        let ext = extend(&base, &diag(&[1.0, 1.0, 2.0]), 0.5).unwrap();
        let ric = ext.ricci().unwrap();
        assert!((ric + 1.5 * DMatrix::<f64>::identity(4, 4)).norm() < 1e-13);
    }
}
