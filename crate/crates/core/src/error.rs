use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{path}: png decode failed: {message}")]
    PngDecode { path: PathBuf, message: String },

    #[error("{path}: png encode failed: {message}")]
    PngEncode { path: PathBuf, message: String },

    #[error("{path}: unsupported channel layout ({layout})")]
    UnsupportedLayout { path: PathBuf, layout: String },

    #[error("{path}: unsupported bit depth ({depth})")]
    UnsupportedBitDepth { path: PathBuf, depth: String },

    #[error("shape mismatch: {left} vs {right}")]
    ShapeMismatch { left: String, right: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("image {width}x{height} is smaller than the required {required}x{required}")]
    ImageTooSmall {
        width: usize,
        height: usize,
        required: usize,
    },

    #[error("feature length mismatch: {left} vs {right}")]
    FeatureLengthMismatch { left: usize, right: usize },

    #[error("no input images found in {0}")]
    EmptyInput(PathBuf),

    #[error("manifest: {0}")]
    Manifest(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
