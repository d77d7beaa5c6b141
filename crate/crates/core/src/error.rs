use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("no convergence after {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix dimension {0} exceeds supported maximum")]
    TooLarge(usize),
    #[error("matrix is singular")]
    Singular,
    #[error("mass matrix is not symmetric positive definite")]
    NotPositiveDefinite,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("metric is not Hermitian")]
    NotHermitian,
    #[error("a4 must be positive for scale normalization")]
    NonPositiveA4,
    #[error("negative radicand in {0}")]
    NegativeRadicand(&'static str),
    #[error("negative radicand for w; point lies outside the real umbrella chart")]
    NegativeWRadicand,
    #[error("no real critical point of the constraint polynomial")]
    NoRealCriticalPoint,
    #[error("invalid constraint: {0}")]
    InvalidConstraint(String),
    #[error("no stability onset found in the scanned range")]
    NoOnsetFound,
    #[error("root is not bracketed on [{lo}, {hi}]")]
    BracketFailure { lo: f64, hi: f64 },
    #[error("radiative model requires q1 and q2 coefficients")]
    MissingRadiativeCoefficients,
    #[error("coefficient table: {0}")]
    Table(String),
    #[error("inertia matrix of the Sobolev top is singular")]
    SingularA,
    #[error("damping closes the resonance window (mu/omega0 > 1/2)")]
    OverdampedWindowClosed,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
