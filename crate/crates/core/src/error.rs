use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero binary form where a nonzero one is required")]
    ZeroForm,
    #[error("both forms are zero")]
    BothZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("residues sum to {0}, expected 0")]
    ResidueSumNonzero(String),
    #[error("residue at puncture {0} is zero")]
    ZeroResidue(usize),
    #[error("duplicate puncture {0}")]
    DuplicatePuncture(String),
    #[error("puncture {0} is at infinity; normalize the chart first")]
    InfinitePuncture(usize),
    #[error("point {0} is not a puncture")]
    NotAPuncture(String),
    #[error("empty puncture set")]
    NoPunctures,

    #[error("n = {0} is below the minimum 4")]
    TooFewPunctures(usize),
    #[error("{name} has degree {got}, expected {expected}")]
    DegreeMismatch { name: &'static str, expected: usize, got: usize },
    #[error("g1 and g2 have a common zero (resultant vanishes)")]
    CommonZero,
    #[error("q vanishes at puncture {0}")]
    QVanishesAtPuncture(usize),

    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("matrix is zero")]
    ZeroMatrix,

    #[error("2g - 2 + n = {0} is not positive")]
    NotHyperbolic(i64),
    #[error("invalid weights at puncture {index}: {reason}")]
    InvalidWeights { index: usize, reason: String },
    #[error("slope form and expanded form disagree on {0}")]
    FormDisagreement(&'static str),

    #[error("matrix does not preserve the (2,1) Hermitian form")]
    FormNotPreserved,
    #[error("singular matrix")]
    Singular,
    #[error("loxodromic element has no unit-modulus weight triple")]
    Loxodromic,
    #[error("vector is not a negative line")]
    NotInCh2,
    #[error("{0}")]
    InvalidInput(String),
}
