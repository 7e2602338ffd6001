//! Verifies the warped-product Einstein conditions for the Heisenberg
//! soliton data at several fiber dimensions, including the predicted
//! Ricci operator of the extension and the warping function.
//!
//! Run with: cargo run --example verify_warped_einstein

use homspace::corpus::corpus;
use homspace::extension::warping;
use homspace::lnm::lnm_verify;

fn main() -> homspace::Result<()> {
    let doc = corpus("h3_lnm_extension(2)")?;
    let space = doc.to_space()?;
    let derivation = doc.derivation_matrix()?.unwrap();
    let lambda = doc.lambda.unwrap();

    for m in [2u32, 3, 5] {
        let report = lnm_verify(&space, &derivation, lambda, m)?;
        println!("m = {m}: alpha^2 = {:.6}", report.alpha_squared);
        println!(
            "    conditions (1)-(3): {:.2e} {:.2e} {:.2e}",
            report.cond1_residual, report.cond2_residual, report.cond3_residual
        );
        println!(
            "    predicted vs computed extension Ricci: {:.2e}",
            report.extension_ricci_mismatch
        );
        let alpha = report.alpha_squared.sqrt();
        println!(
            "    warping function w(r) at r = 0, 1, 2: {:.4} {:.4} {:.4}",
            warping(lambda, alpha, 0.0),
            warping(lambda, alpha, 1.0),
            warping(lambda, alpha, 2.0)
        );
    }
    Ok(())
}
