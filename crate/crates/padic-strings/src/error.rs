//! One error type shared by all modules of the crate.

use thiserror::Error;

/// Everything that can go wrong across the crate.
///
/// The variants are grouped by how a caller should react: `Parse` means the
/// input text was malformed, `Input` and `PrimeMismatch` mean a well-formed
/// but invalid argument, `Model` means the requested object does not define
/// a convergent string, and the remaining variants flag requests outside
/// what the implemented theory supports.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    InvalidPrime(u64),

    #[error("operands belong to different p-adic places (p={0} vs p={1})")]
    PrimeMismatch(u64, u64),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("model error: {0}")]
    Model(String),

    #[error("evaluation at a pole of the zeta function (|Q(z)| below threshold at z={0})")]
    EvalAtPole(num_complex::Complex64),

    #[error("pole of multiplicity {0} is not supported here (simple poles only)")]
    UnsupportedMultiplicity(usize),

    #[error("tube-formula term with omega = 1 is singular")]
    FormulaSingularity,

    #[error("x = {0} is a jump point; the series converges to the midpoint there")]
    JumpPoint(f64),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("series diverges: {0}")]
    Divergence(String),

    #[error("no certified tail bound is available for this spec")]
    TailUnavailable,

    #[error("operation does not apply: {0}")]
    NotApplicable(String),

    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn model(msg: impl Into<String>) -> Self {
        Error::Model(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
