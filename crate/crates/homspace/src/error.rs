//! Error type shared by the whole crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("bracket index out of range: ({i}, {j}) -> {k} in a {dim}-dimensional algebra")]
    IndexOutOfRange { i: usize, j: usize, k: usize, dim: usize },

    #[error("bracket entries must have i < j, got ({i}, {j})")]
    BadBracketOrder { i: usize, j: usize },

    #[error("duplicate bracket entry for ([e{i}, e{j}], e{k})")]
    DuplicateBracket { i: usize, j: usize, k: usize },

    #[error("Jacobi identity fails: defect {defect:.3e} exceeds tolerance {tolerance:.3e}")]
    JacobiViolation { defect: f64, tolerance: f64 },

    #[error("{what} is not a subspace of the requested space (residual {residual:.3e})")]
    NotASubspace { what: &'static str, residual: f64 },

    #[error("{what} is not a subalgebra (closure residual {residual:.3e})")]
    NotASubalgebra { what: &'static str, residual: f64 },

    #[error("subspace basis is rank deficient: smallest/largest singular value {ratio:.3e}")]
    RankDeficient { ratio: f64 },

    #[error("invariant `{name}` violated: residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    InvariantViolation {
        name: &'static str,
        residual: f64,
        tolerance: f64,
    },

    #[error("internal consistency failure in `{name}`: residual {residual:.3e} exceeds {tolerance:.3e}; this indicates an engine bug, not bad input")]
    EngineMismatch {
        name: &'static str,
        residual: f64,
        tolerance: f64,
    },

    #[error("matrix is not a derivation: residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    NotADerivation { residual: f64, tolerance: f64 },

    #[error("metric is not symmetric positive definite (smallest eigenvalue {eigmin:.3e})")]
    MetricNotPositive { eigmin: f64 },

    #[error("declared nilradical fails certificate: {reason}")]
    NilradicalRejected { reason: String },

    #[error("automatic nilradical computation needs a solvable algebra; declare the nilradical explicitly")]
    NilradicalNeedsDeclaration,

    #[error("homogeneous space has no h/n splitting; supply one or declare the nilradical")]
    MissingSplitting,

    #[error("gradient flow did not converge after {iterations} iterations (last gradient norm {final_gradient_norm:.3e}); trailing (value, gradient) samples: {tail:?}")]
    FlowDidNotConverge {
        iterations: usize,
        final_gradient_norm: f64,
        tail: Vec<(f64, f64)>,
    },

    #[error("no real extension: tr S(D_p) - lambda*m = {radicand:.6e} is not positive")]
    NonPositiveRadicand { radicand: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown corpus entry `{name}`; available: {available}")]
    UnknownCorpus { name: String, available: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
