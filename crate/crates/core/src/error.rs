use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("every input vector is degenerate (norm below rank tolerance)")]
    AllDegenerate,

    #[error("simplex vertices are affinely dependent")]
    DegenerateSimplex,

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("the point sets are strictly linearly separable; no common hull point exists")]
    ActuallySeparable,

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("invalid (1,inf) witness: {0}")]
    InvalidWitness(String),

    #[error("brute-force search over {points} points exceeds the cap of {cap}")]
    TooLarge { points: usize, cap: usize },

    #[error("witness search exceeded its cap of {cap} points")]
    WitnessSearchExceeded { cap: usize },

    #[error("not all 2^{k} label combinations are present ({present} found)")]
    NotAllLabels { k: usize, present: usize },

    #[error("property {property} is not strictly linearly separable on the input")]
    NotSeparableInput { property: usize },

    #[error("degenerate position: {0}")]
    DegeneratePosition(String),

    #[error("projected hulls do not intersect")]
    NotIntersecting,

    #[error("too few points: have {have}, need at least {need}")]
    TooFewPoints { have: usize, need: usize },

    #[error("perturbation failed to restore general position after {attempts} attempts")]
    PerturbationFailed { attempts: usize },

    #[error("constraints leave no free direction")]
    EmptySubspace,

    #[error("invalid parameters: {0}")]
    BadParams(String),

    #[error("epsilon {epsilon} too large: wedge census violated ({detail})")]
    EpsilonTooLarge { epsilon: f64, detail: String },

    #[error("sampling failed after {attempts} attempts")]
    SamplingFailed { attempts: usize },

    #[error("linear program: {0}")]
    Lp(#[from] crate::lp::LpError),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
