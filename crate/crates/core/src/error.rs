use std::path::PathBuf;

/// Errors produced by the rounding, interpolation, metric and I/O routines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument is outside the operation's mathematical domain
    /// (non-finite input, zero modulus, zero-variance image, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter violates an operation's precondition.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Two images that must share dimensions do not.
    #[error("dimension mismatch: {left_w}x{left_h} vs {right_w}x{right_h}")]
    DimensionMismatch {
        left_w: usize,
        left_h: usize,
        right_w: usize,
        right_h: usize,
    },

    #[error("unsupported image format in {path}: {reason}")]
    UnsupportedFormat { path: PathBuf, reason: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Short machine-readable tag used by the CLI's error line.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Parameter(_) => "parameter",
            Error::DimensionMismatch { .. } => "dimension",
            Error::UnsupportedFormat { .. } => "format",
            Error::Io { .. } => "io",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
