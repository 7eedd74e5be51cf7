use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("graph has {loops} self-loop(s); the identity only holds for loopless graphs")]
    SelfLoopPresent { loops: u64 },

    #[error("degree sum {sum} is odd")]
    OddDegreeSum { sum: u64 },

    #[error("delta = {delta} is out of range (need delta {bound})")]
    DeltaOutOfRange { delta: f64, bound: &'static str },

    #[error("tau = {tau} is out of range (need tau > 2)")]
    TauOutOfRange { tau: f64 },

    #[error("invalid kernel: {0}")]
    KernelInvalid(String),

    #[error("offspring law has mass {mass} at zero; a positive degree law is required")]
    LawSupportsZero { mass: f64 },

    #[error("invalid offspring law: {0}")]
    InvalidLaw(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("x = {x} outside the domain of the asymptote (need x > {bound})")]
    DomainError { x: f64, bound: f64 },

    #[error("could not certify tolerance {tol}: {reason}")]
    TruncationFailure { tol: f64, reason: String },

    #[error("kernel does not match the requested asymptotic case: {0}")]
    CaseMismatch(String),

    #[error("not enough tail mass above x_min = {x_min} to fit an exponent")]
    InsufficientTail { x_min: f64 },

    #[error("malformed edge list at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("malformed configuration: {0}")]
    Config(String),
}

impl Error {
    /// True for errors caused by bad user input rather than a failed computation.
    pub fn is_config(&self) -> bool {
        !matches!(
            self,
            Error::TruncationFailure { .. } | Error::InsufficientTail { .. }
        )
    }
}
