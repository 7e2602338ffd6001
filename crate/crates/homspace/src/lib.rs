//! homspace: a numerical workbench for Riemannian homogeneous spaces
//! presented as metric Lie algebra data.
//!
//! A homogeneous space enters as a Lie algebra g with structure constants,
//! an isotropy subalgebra k, the reductive complement p, and an inner
//! product on p. Everything geometric happens at the base point: the
//! moment map term M_p, the mean curvature vector H, and the Ricci
//! operator Ric = M_p - B_p/2 - S(ad_p H), cross-checked against an
//! independent route through the full curvature tensor of the canonical
//! connection. On top of the curvature engine sit the algebraic Ricci
//! soliton fit, the gradient-flow estimate of the stratum label of a
//! nilpotent bracket, one-dimensional extensions, and the verifier plus
//! structural audit for warped-product Einstein data.
//!
//! ## Start with the examples
//!
//! Each major capability has a runnable example:
//!
//! ```text
//! cargo run --example two_route_curvature    # Ricci two ways, whole corpus
//! cargo run --example soliton_fit            # Ric = cI + D_p least squares
//! cargo run --example stratify_flow          # moment-map norm gradient flow
//! cargo run --example build_extension        # R acting on g: metric extensions
//! cargo run --example verify_warped_einstein # the three (lambda,n+m) conditions
//! cargo run --example structure_audit        # the full structural audit
//! cargo run --example document_io            # text format, digests
//! ```
//!
//! The same functionality is scriptable through the `homspace` binary:
//! `homspace <check|curvature|soliton|stratify|extend|verify-lnm|audit|corpus>
//! [flags] [file|corpus:<name>]`.
//!
//! ## Module map
//!
//! - [`algebra`]: structure constants, Killing form, central series,
//!   certified nilradical.
//! - [`derivations`]: Der(g) as an exact null space.
//! - [`bracket`]: dense antisymmetric tensors and the moment map.
//! - [`homogeneous`]: the space model and its orthonormal frame.
//! - [`curvature`]: both Ricci routes, divergence, Nomizu operators.
//! - [`soliton`]: the algebraic soliton fit.
//! - [`strata`]: stratum labels, the gradient flow, E_beta checks.
//! - [`extension`]: one-dimensional extensions and the warping data.
//! - [`lnm`]: warped-product Einstein verification and the audit.
//! - [`document`] / [`corpus`] / [`report`] / [`cli`]: the text format,
//!   built-in examples, and the reporting CLI.

pub mod algebra;
pub mod bracket;
pub mod cli;
pub mod corpus;
pub mod curvature;
pub mod derivations;
pub mod document;
pub mod error;
pub mod extension;
pub mod homogeneous;
pub mod linalg;
pub mod lnm;
pub mod report;
pub mod soliton;
pub mod strata;

pub use error::{Error, Result};
