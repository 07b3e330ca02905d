use std::path::PathBuf;

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),

    #[error("alpha = {alpha}: {source}")]
    Spectrum {
        alpha: f64,
        #[source]
        source: glvar_core::Error,
    },

    #[error("{what} needs {missing}; {hint}")]
    MissingPrerequisite {
        what: String,
        missing: String,
        hint: String,
    },

    #[error(transparent)]
    Core(#[from] glvar_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}
