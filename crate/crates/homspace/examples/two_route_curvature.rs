//! Computes the Ricci operator of every corpus space twice: once from the
//! algebraic formula Ric = M_p - B_p/2 - S(ad_p H) and once by assembling
//! the full curvature tensor of the canonical connection.
//!
//! Run with: cargo run --example two_route_curvature

use homspace::corpus::verification_corpus;

fn main() -> homspace::Result<()> {
    for doc in verification_corpus() {
        let space = doc.to_space()?;
        let mismatch = space.ricci_route_mismatch()?;
        let scalar = space.scalar_curvature()?;
        let eigenvalues = homspace::linalg::sym_eigenvalues(&space.ricci_frame()?);
        println!(
            "{:<22} dim {}  scal {:+.4}  routes agree to {:.2e}",
            doc.name,
            space.dim_p(),
            scalar,
            mismatch
        );
        println!("    ricci spectrum: {:?}", eigenvalues);
    }
    Ok(())
}
