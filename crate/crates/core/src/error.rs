use alloc::string::String;
use alloc::vec::Vec;

/// Errors raised by the algorithms in this crate.
///
/// Variants fall into two classes: domain failures that a caller can react
/// to (enlarge a set, refine a tolerance, pick a bigger modulus), and
/// internal consistency failures that indicate a bug. See
/// [`Error::is_internal`].
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("tiling failed: cover fraction {achieved} below required {required}")]
    TilingFailed { achieved: f64, required: f64 },

    #[error("core too small for tile {tile}: deficit {deficit} not below {gamma}")]
    CoreTooSmall { tile: usize, deficit: f64, gamma: f64 },

    #[error("element not invertible in l1: {reason} (residual {residual}, min |symbol| {min_symbol})")]
    NotInvertible {
        reason: String,
        residual: f64,
        min_symbol: f64,
    },

    #[error("tolerance {requested} is below the certification floor {floor}")]
    Unachievable { requested: f64, floor: f64 },

    #[error("inverse certificate too weak: coordinate error {available} exceeds {required}")]
    RefineInverse { required: f64, available: f64 },

    #[error("configuration is not in X_f: defect {defect} at {at:?}")]
    NotInXf { at: Vec<i64>, defect: f64 },

    #[error("window does not cover coordinate {0:?}")]
    InsufficientWindow(Vec<i64>),

    #[error("quotient matrix is singular: fixed-point set is infinite")]
    InfiniteFixedSet,

    #[error("separation conditions violated: {violations} offending pair(s), first {first:?}")]
    Separation {
        violations: usize,
        first: (usize, usize),
    },

    #[error("pipeline infeasible: {0}")]
    PipelineInfeasible(String),

    #[error("budget exhausted at `{inequality}`: consumed {consumed} against allowance {allowance} (total {total} vs {eps})")]
    BudgetExhausted {
        inequality: String,
        consumed: f64,
        allowance: f64,
        total: f64,
        eps: f64,
    },

    #[error("postcondition failed for window {window} at {at:?}: {achieved} > {bound}")]
    Verification {
        window: usize,
        at: Vec<i64>,
        achieved: f64,
        bound: f64,
    },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// True for failures that can only come from a bug (a verifier tripping
    /// on output that the construction guarantees).
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::Verification { .. } | Error::Internal(_) | Error::InfiniteFixedSet
        )
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid-argument",
            Error::NoConvergence(_) => "no-convergence",
            Error::TilingFailed { .. } => "tiling-failed",
            Error::CoreTooSmall { .. } => "core-too-small",
            Error::NotInvertible { .. } => "not-invertible",
            Error::Unachievable { .. } => "unachievable",
            Error::RefineInverse { .. } => "refine-inverse",
            Error::NotInXf { .. } => "not-in-xf",
            Error::InsufficientWindow(_) => "insufficient-window",
            Error::InfiniteFixedSet => "infinite-fixed-set",
            Error::Separation { .. } => "separation",
            Error::PipelineInfeasible(_) => "pipeline-infeasible",
            Error::BudgetExhausted { .. } => "budget-exhausted",
            Error::Verification { .. } => "verification",
            Error::Internal(_) => "internal",
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
