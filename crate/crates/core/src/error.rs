use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("zero {re}+{im}i lies outside the admissible disc |a| <= 1 - 1e-9")]
    ZeroOutsideDisc { re: f64, im: f64 },

    #[error("zero multiplicity must be positive")]
    ZeroMultiplicity,

    #[error("distinct zeros closer than 1e-7 ({distance:e} apart)")]
    ZerosTooClose { distance: f64 },

    #[error("degree {degree} exceeds the cap of {cap}")]
    DegreeCap { degree: u32, cap: u32 },

    #[error("evaluation point lies outside the open unit disc (|w| = {modulus})")]
    OutsideDisc { modulus: f64 },

    #[error("{divisor} does not divide {dividend}")]
    NotADivisor { divisor: String, dividend: String },

    #[error("model space needs a non-constant inner function")]
    ConstantTheta,

    #[error("kernel Gram matrix is too ill-conditioned (condition number {condition:e})")]
    DegenerateGram { condition: f64 },

    #[error("resolvent I - conj(a)S is singular at a = {re}+{im}i")]
    SingularResolvent { re: f64, im: f64 },

    #[error("subspace is not invariant (residual {residual:e})")]
    NotInvariant { residual: f64 },

    #[error("subspaces live in different ambient spaces")]
    AmbientMismatch,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not annihilated by the reference function (residual {residual:e})")]
    NotAnnihilated { residual: f64 },

    #[error("rank decision is ill-conditioned (singular value gap ratio {ratio:e})")]
    IllConditioned { ratio: f64 },

    #[error("Jordan model is not a divisibility chain at position {position}")]
    NotAChain { position: usize },

    #[error("interleaved models need {needed} copies but only {available} are available")]
    ModelTooLong { needed: usize, available: usize },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("vector is not in the required subspace (residual {residual:e})")]
    NotInSubspace { residual: f64 },

    #[error("compression divisibility fails at index {index}: {tau} does not divide {psi}")]
    DivisibilityFailure { index: usize, tau: String, psi: String },

    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("invalid weight schedule: {0}")]
    InvalidSchedule(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
