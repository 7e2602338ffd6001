//! Builds one-dimensional extensions: the flat plane extended by the
//! identity derivation becomes hyperbolic 3-space, and the Heisenberg
//! soliton extended by diag(1,1,2) at alpha = 1/2 becomes an Einstein
//! solvmanifold.
//!
//! Run with: cargo run --example build_extension

use homspace::algebra::LieAlgebra;
use homspace::corpus::corpus;
use homspace::extension::{extend, extended_mean_curvature};
use homspace::homogeneous::HomogeneousSpace;
use nalgebra::{DMatrix, DVector};

fn main() -> homspace::Result<()> {
    let plane = HomogeneousSpace::trivial_isotropy(LieAlgebra::abelian(2), DMatrix::identity(2, 2))?;
    let hyperbolic = extend(&plane, &DMatrix::identity(2, 2), 1.0)?;
    println!("R^2 extended by D = I:");
    println!("    ricci = {:?}", homspace::linalg::sym_eigenvalues(&hyperbolic.ricci_frame()?));

    let h3 = corpus("h3_soliton")?.to_space()?;
    let d = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0, 2.0]));
    let einstein = extend(&h3, &d, 0.5)?;
    println!("h3 extended by D = diag(1,1,2) at alpha = 1/2:");
    println!("    ricci = {:?}", homspace::linalg::sym_eigenvalues(&einstein.ricci_frame()?));
    let h = extended_mean_curvature(&h3, &d, 0.5)?;
    println!("    mean curvature = {:?}", h.iter().cloned().collect::<Vec<_>>());
    Ok(())
}
