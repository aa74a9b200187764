use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] tagc::Error),
    #[error("manifest {}: field `{field}`: {message}", path.display())]
    Manifest {
        path: PathBuf,
        field: String,
        message: String,
    },
    #[error("manifest {} references missing files: {}", manifest.display(), join_paths(.missing))]
    MissingFiles {
        manifest: PathBuf,
        missing: Vec<PathBuf>,
    },
    #[error("dataset `{dataset}` is {found}, expected {expected}")]
    Mode {
        dataset: String,
        expected: &'static str,
        found: &'static str,
    },
    #[error("every image in `{dataset}` failed; first failure: {first}")]
    AllFailed { dataset: String, first: String },
    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn join_paths(paths: &[PathBuf]) -> String {
    paths
        .iter()
        .map(|p| p.display().to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

impl HarnessError {
    /// Short machine-readable name of the error class.
    pub fn kind(&self) -> &'static str {
        match self {
            HarnessError::Core(e) => e.kind(),
            HarnessError::Manifest { .. } => "manifest",
            HarnessError::MissingFiles { .. } => "missing-files",
            HarnessError::Mode { .. } => "mode",
            HarnessError::AllFailed { .. } => "all-failed",
            HarnessError::Write { .. } => "io",
        }
    }
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;
