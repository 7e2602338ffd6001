//! Runs the full structural audit: for warped-product Einstein data the
//! base must be an algebraic Ricci soliton, and a long list of operator
//! identities has to hold on the way. Prints every residual.
//!
//! Run with: cargo run --example structure_audit

use homspace::corpus::corpus;
use homspace::lnm::{audit, AUDIT_TOL};

fn main() -> homspace::Result<()> {
    let doc = corpus("h3_lnm_extension(3)")?;
    let space = doc.to_space()?;
    let derivation = doc.derivation_matrix()?.unwrap();
    let report = audit(&space, &derivation, doc.lambda.unwrap(), doc.fiber_dim.unwrap(), AUDIT_TOL)?;

    println!("stratum label spectrum: {:?}", report.label_spectrum);
    for entry in &report.entries {
        println!(
            "  {} {:<46} {:.2e}",
            if entry.pass { "ok " } else { "FAIL" },
            entry.name,
            entry.value
        );
    }
    println!(
        "soliton: c = {:+.4} (residual {:.2e})",
        report.soliton.c, report.soliton.residual
    );
    println!("verdict: {}", if report.verdict { "PASS" } else { "FAIL" });
    Ok(())
}
