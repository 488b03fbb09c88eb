use thiserror::Error;

/// Errors raised by the numerical core and the experiment harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("DimensionError: {0}")]
    Dimension(String),

    #[error("NotHermitianError: deviation {deviation:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("NotUnitaryError: deviation {deviation:.3e} exceeds tolerance {tol:.3e}")]
    NotUnitary { deviation: f64, tol: f64 },

    #[error("GaugeAmbiguityError: eigenvector {column} has block weights {first:.6} and {second:.6}")]
    GaugeAmbiguity { column: usize, first: f64, second: f64 },

    #[error("BlockMismatchError: block {block} has {expected} indices but {found} eigenvectors are dominated by it")]
    BlockMismatch { block: usize, expected: usize, found: usize },

    #[error("BranchError: {0}")]
    Branch(String),

    #[error("NormalizationError: {0}")]
    Normalization(String),

    #[error("DegeneracyError: levels {i} and {j} have gap {gap:.3e} below tolerance {tol:.3e}")]
    Degeneracy { i: usize, j: usize, gap: f64, tol: f64 },

    #[error("ConvergenceError: {0}")]
    NoConvergence(String),

    #[error("InsufficientDataError: {usable} usable points, need at least {needed}")]
    InsufficientData { usable: usize, needed: usize },

    #[error("ParseError: {0}")]
    Parse(String),

    #[error("IoError: {0}")]
    Io(String),

    #[error("InternalError: {0}")]
    Internal(String),

    #[error("{source} (at lambda = {lambda:e})")]
    AtLambda { lambda: f64, source: Box<Error> },
}

impl Error {
    /// True for errors rooted in the numerics (degeneracies, branch cuts,
    /// non-convergence) rather than in malformed input.
    pub fn is_numerical(&self) -> bool {
        if let Error::AtLambda { source, .. } = self {
            return source.is_numerical();
        }
        matches!(
            self,
            Error::Degeneracy { .. }
                | Error::Branch(_)
                | Error::NoConvergence(_)
                | Error::GaugeAmbiguity { .. }
                | Error::BlockMismatch { .. }
                | Error::InsufficientData { .. }
        )
    }

    /// True for malformed input, files or arguments.
    pub fn is_input(&self) -> bool {
        match self {
            Error::AtLambda { source, .. } => source.is_input(),
            Error::Parse(_)
            | Error::Io(_)
            | Error::Dimension(_)
            | Error::NotHermitian { .. }
            | Error::NotUnitary { .. }
            | Error::Normalization(_) => true,
            _ => false,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
