//! Runs the moment-map norm gradient flow on perturbations of the
//! Heisenberg bracket and watches the stratum label re-emerge.
//!
//! Run with: cargo run --example stratify_flow

use homspace::corpus::corpus;
use homspace::strata::{beta_estimate, FlowParams};
use nalgebra::DMatrix;

fn main() -> homspace::Result<()> {
    let mu = corpus("h3_soliton")?.to_algebra()?.tensor();

    println!("exact h3 bracket:");
    let label = beta_estimate(&mu, &FlowParams::default())?;
    println!(
        "    {} iterations, gradient {:.2e}, spectrum {:?}",
        label.flow_iterations,
        label.final_gradient_norm,
        label.spectrum().unwrap()
    );

    // Shear the basis: same stratum, different representative.
    for shear in [0.2, 0.5, 0.9] {
        let g = DMatrix::from_row_slice(
            3,
            3,
            &[1.0, shear, 0.0, 0.0, 1.0, shear, shear / 2.0, 0.0, 1.0],
        );
        let perturbed = mu.conjugate(&g);
        let label = beta_estimate(&perturbed, &FlowParams::default())?;
        println!("shear {shear}:");
        println!(
            "    {} iterations, gradient {:.2e}, spectrum {:?}",
            label.flow_iterations,
            label.final_gradient_norm,
            label.spectrum().unwrap()
        );
    }
    Ok(())
}
