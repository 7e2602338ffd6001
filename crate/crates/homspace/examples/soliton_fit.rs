//! Fits Ric = c I + D_p on a few spaces and prints the soliton data.
//!
//! Run with: cargo run --example soliton_fit

use homspace::corpus::corpus;
use homspace::soliton::soliton_fit;

fn main() -> homspace::Result<()> {
    for name in ["h3_soliton", "heisenberg(5)", "hyperbolic(4)", "abelian(3)"] {
        let space = corpus(name)?.to_space()?;
        let fit = soliton_fit(&space)?;
        println!("{name}:");
        println!("    c = {:+.6}, residual = {:.2e}", fit.c, fit.residual);
        println!(
            "    D_p diagonal = {:?}",
            (0..space.dim_p()).map(|i| fit.d_p_frame[(i, i)]).collect::<Vec<_>>()
        );
        if fit.identity_degenerate {
            println!("    (identity lies in the derivation span; c is a convention)");
        }
    }
    Ok(())
}
