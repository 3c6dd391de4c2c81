use thiserror::Error;

/// Errors raised by the analysis and synthesis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is singular within tolerance")]
    SingularMatrix,

    #[error("vector is zero within tolerance")]
    ZeroVector,

    #[error("tolerance thresholds must be finite and positive (abs={abs}, rel={rel})")]
    InvalidTolerance { abs: f64, rel: f64 },

    #[error("every matrix in the list is a scalar multiple of the identity")]
    AllIsotropic,

    #[error("direction is not an eigenvector of every matrix")]
    NotCommonEigenvector,

    #[error("no input combination removes the common eigenvector")]
    NoCombinationFound,

    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("system is not nearly controllable")]
    NotNearlyControllable,

    #[error("no escape control moves the state off the singular set")]
    EscapeFailed,

    #[error("input pair is not in the zero-bottom-row class with an admissible drift")]
    NotCanonicalClass,

    #[error("affine input substitution is singular")]
    SingularSubstitution,

    #[error("system verdict forbids the requested transfer")]
    NotControllablePair,

    #[error("initial state in excluded set")]
    InExcludedSet,

    #[error("zero state is outside the controllability domain")]
    ZeroState,

    #[error("control vector has {got} components, system has {expected} inputs")]
    ArityMismatch { expected: usize, got: usize },

    #[error("synthesized plan failed verification (residual {residual:e})")]
    VerificationFailed { residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
