//! Parses an algebra document from text, canonicalizes it, and prints the
//! digest that ties reports to inputs.
//!
//! Run with: cargo run --example document_io

use homspace::document::AlgebraDocument;

const DOC: &str = "
# A three-dimensional solvable example with a weighted metric.
name: weighted_hyperbolic
dim: 3
brackets:
  [1, 2, 2, 1]
  [1, 3, 3, 1/2]
metric:
  [1, 0, 0]
  [0, 2, 0]
  [0, 0, 2]
h_part: [1]
n_part: [2, 3]
";

fn main() -> homspace::Result<()> {
    let doc = AlgebraDocument::parse(DOC)?;
    println!("canonical form:\n{}", doc.serialize());
    println!("sha256: {}", doc.digest());

    let space = doc.to_space()?;
    println!("two-route Ricci mismatch: {:.2e}", space.ricci_route_mismatch()?);
    println!("ricci (user basis):\n{:.4}", space.ricci()?);
    Ok(())
}
