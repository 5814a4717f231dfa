use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot load {path}: {source}")]
    Load {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("build error: {0}")]
    Build(String),

    #[error("unknown document id `{0}`")]
    Lookup(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("evaluation error: {0}")]
    Evaluation(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json error on {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("stage `{stage}`{}: {source}", artifact.as_ref().map(|a| format!(" (artifact {a})")).unwrap_or_default())]
    Stage {
        stage: &'static str,
        artifact: Option<String>,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Wraps an error with the pipeline stage (and optionally the artifact) it came from.
    pub fn in_stage(self, stage: &'static str, artifact: Option<&str>) -> Self {
        Error::Stage {
            stage,
            artifact: artifact.map(str::to_owned),
            source: Box::new(self),
        }
    }

    /// Process exit code: 2 for configuration and input validation problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Load { .. }
            | Error::Validation(_)
            | Error::Parse { .. }
            | Error::Config(_)
            | Error::Json { .. } => 2,
            Error::Stage { source, .. } => source.exit_code(),
            Error::Build(_)
            | Error::Lookup(_)
            | Error::Numeric(_)
            | Error::Evaluation(_)
            | Error::Io { .. } => 1,
        }
    }
}
