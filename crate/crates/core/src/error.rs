use std::path::PathBuf;

/// Errors raised by image I/O, enhancement and quality scoring.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("unsupported image {property} in {path}")]
    Format { path: PathBuf, property: String },
    #[error("invalid image: {0}")]
    InvalidImage(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("degenerate distribution: {0}")]
    Degenerate(String),
    #[error("no patches selected: {0}")]
    EmptySelection(String),
    #[error("no usable patches in pristine corpus {}", .0.display())]
    EmptyCorpus(PathBuf),
    #[error("invalid NIQE model: {0}")]
    Model(String),
}

impl Error {
    /// Short machine-readable name of the error class.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Io { .. } => "io",
            Error::Format { .. } => "format",
            Error::InvalidImage(_) => "invalid-image",
            Error::Shape(_) => "shape",
            Error::Config(_) => "config",
            Error::Degenerate(_) => "degenerate",
            Error::EmptySelection(_) => "empty-selection",
            Error::EmptyCorpus(_) => "empty-corpus",
            Error::Model(_) => "model",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
