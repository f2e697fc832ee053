use thiserror::Error;

/// Errors surfaced by the series, curve and verification kernels.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by a series that is zero to truncation (trunc {trunc})")]
    DivisionByZeroToTrunc { trunc: String },

    #[error("order indeterminate at truncation while computing {what}")]
    IndeterminateOrder { what: String },

    #[error("orbit entry {index} is zero to truncation before the expected period")]
    TruncationExhausted { index: usize },

    #[error("no limb matches the leading behavior of the branch parameter (residual {residual:.3e})")]
    NoLimbMatch { residual: f64 },

    #[error("sample point sits on a region boundary: {what}")]
    RegionUnresolved { what: String },

    #[error("branch cluster not separated after {depth} Newton-polygon levels")]
    UnresolvedCluster { depth: usize },

    #[error("ball image is the whole projective line (both critical points interior)")]
    ImageIsP1,

    #[error("no periodic ball confirmed for a non-satellite branch (p={p}, candidates {candidates:?})")]
    NoPeriodicBall { p: u32, candidates: Vec<u32> },

    #[error("ill-conditioned root cluster: residual {residual:.3e} above tolerance {tol:.3e}")]
    IllConditioned { residual: f64, tol: f64 },

    #[error("rescaling-limit fit residual {residual:.3e} above tolerance {tol:.3e}")]
    FitResidualTooLarge { residual: f64, tol: f64 },

    #[error("reduced quadratic has critical period {got}, expected {expected}")]
    PeriodMismatch { expected: u32, got: u32 },

    #[error("exact division left a nonzero remainder (internal bug)")]
    NonzeroRemainder,

    #[error("cache io: {0}")]
    Io(#[from] std::io::Error),

    #[error("cache decode: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
