//! Error taxonomy shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The discriminant family this crate supports is -n with n ≡ 11 (mod 24).
    #[error("n must be a positive integer ≡ 11 (mod 24), got {0}")]
    UnsupportedDiscriminant(i64),

    #[error("invalid quadratic form ({a}, {b}, {c}): {reason}")]
    InvalidForm { a: i64, b: i64, c: i64, reason: &'static str },

    #[error("cannot compose forms of discriminants {0} and {1}")]
    DiscriminantMismatch(i64, i64),

    #[error("n = {0} is not squarefree")]
    NotSquarefree(i64),

    #[error("domain error in {op}: {reason}")]
    Domain { op: &'static str, reason: &'static str },

    #[error("divergent argument in {op}: {reason}")]
    Divergent { op: &'static str, reason: &'static str },

    #[error("operation {0} produced a non-finite value")]
    NonFinite(&'static str),

    /// Rounding to an integer failed because the value is too far from ℤ.
    /// Signals that the caller should retry at higher precision.
    #[error("residual {residual} exceeds tolerance {tolerance}; retry at higher precision")]
    Residual { residual: String, tolerance: String },

    #[error("needs more precision: {0}")]
    NeedsMorePrecision(String),

    #[error("precision exhausted after retrying up to {0} bits")]
    PrecisionExhausted(usize),

    #[error("precision context rejected: {0}")]
    InvalidPrecision(String),

    #[error("inconsistency detected: {0}")]
    Inconsistency(String),

    #[error("verification failure: {0}")]
    Verification(String),

    #[error("theorem violation for n={n}: {what}")]
    TheoremViolation { n: i64, what: String },

    #[error("table mismatch for n={n} in field `{field}`: computed {computed}, expected {expected}")]
    TableMismatch { n: i64, field: &'static str, computed: String, expected: String },

    #[error("zero polynomial not allowed in {0}")]
    ZeroPolynomial(&'static str),

    #[error("lattice basis is rank deficient")]
    RankDeficient,

    #[error("cannot factor zero")]
    FactorZero,

    #[error("root finding did not converge for degree {0}")]
    RootsDiverged(usize),

    #[error("embedded dataset is malformed: {0}")]
    Dataset(String),
}
