use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or unusable input supplied by the caller.
    #[error("invalid input: {0}")]
    Input(String),

    #[error("graph is not strongly connected")]
    NotStronglyConnected,

    /// A precondition of an internal operation was violated by its caller.
    #[error("contract violation in {stage}: {detail}")]
    Contract { stage: &'static str, detail: String },

    /// A proven bound or invariant failed to hold at runtime.
    #[error("assertion failed in {stage}: {detail}")]
    Assertion { stage: &'static str, detail: String },

    #[error("iteration cap exceeded in {stage}: {detail}")]
    IterationCap { stage: &'static str, detail: String },

    #[error("budget exceeded: {0}")]
    Budget(String),
}

impl Error {
    pub fn assertion(stage: &'static str, detail: impl Into<String>) -> Self {
        Error::Assertion {
            stage,
            detail: detail.into(),
        }
    }

    pub fn contract(stage: &'static str, detail: impl Into<String>) -> Self {
        Error::Contract {
            stage,
            detail: detail.into(),
        }
    }

    /// True for errors caused by the input rather than by the solver.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Input(_) | Error::NotStronglyConnected | Error::Budget(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Returns an assertion error unless `cond` holds.
#[macro_export]
macro_rules! ensure {
    ($cond:expr, $stage:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err($crate::error::Error::assertion($stage, format!($($fmt)+)));
        }
    };
}
