use alloc::string::String;
use core::fmt;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument violated a documented precondition.
    Domain(String),
    /// An iterative method failed to reach its tolerance within its cap.
    Convergence(String),
    /// The analytic spectrum solver did not account for exactly `n` roots.
    RootCount { expected: usize, found: usize },
    /// Eigenstate reconstruction hit a (near-)degenerate basis; the caller
    /// should fall back to the dense eigensolver for this root.
    DegenerateBasis { root: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Convergence(msg) => write!(f, "convergence failure: {msg}"),
            Error::RootCount { expected, found } => {
                write!(f, "root accounting failed: expected {expected} roots, found {found}")
            }
            Error::DegenerateBasis { root } => {
                write!(f, "degenerate basis at root x = {root}: use the dense eigenvector")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
