use std::path::PathBuf;

/// Errors produced by the detector, the harness and the fitting routines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("coordinate ({x}, {y}) lies within the {margin} px border band of a {width}x{height} image")]
    OutOfBounds {
        x: i64,
        y: i64,
        margin: usize,
        width: usize,
        height: usize,
    },

    #[error("image {width}x{height} is smaller than the required {min_width}x{min_height}")]
    ImageTooSmall {
        width: usize,
        height: usize,
        min_width: usize,
        min_height: usize,
    },

    #[error("ring samples carry no orientation (all averaged measures are zero)")]
    NoOrientation,

    #[error("degenerate geometry: {0}")]
    Degenerate(String),

    #[error("cylinder fit did not converge after {iterations} iterations (cost {cost:e})")]
    NotConverged {
        iterations: usize,
        cost: f64,
        last: Box<crate::geomfit::CylinderFit>,
    },

    #[error("malformed PGM: {0}")]
    MalformedPgm(String),

    #[error("unsupported PGM maxval {0}, only 255 is supported")]
    UnsupportedMaxval(u32),

    #[error("malformed point cloud line {line}: {message}")]
    MalformedPoints { line: usize, message: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
