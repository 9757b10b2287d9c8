use alloc::string::String;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A series was asked for outside the range where it is trusted.
    #[error("series truncation: {0}")]
    Truncation(String),
    /// The domain could not be triangulated at the requested size.
    #[error("mesh error: {0}")]
    Mesh(String),
    /// A linear or eigen solve failed (singular or non-convergent).
    #[error("solver error: {0}")]
    Solver(String),
    /// Should be unreachable; indicates a broken numerical assumption.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! domain_err {
    ($($arg:tt)*) => {
        $crate::error::Error::Domain(alloc::format!($($arg)*))
    };
}
pub(crate) use domain_err;
