use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    /// Bad arguments, config or input; exit code 2.
    #[error("{0}")]
    Usage(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Solver(#[from] pcfr::Error),
}

impl BenchError {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        BenchError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Usage(_) => 2,
            BenchError::Solver(e) => match e {
                pcfr::Error::Config(_)
                | pcfr::Error::UnknownGame(_)
                | pcfr::Error::UnknownAlgorithm(_)
                | pcfr::Error::Budget(_)
                | pcfr::Error::Matrix(_) => 2,
                pcfr::Error::InconsistentInfoset { .. } => 1,
            },
            BenchError::Io { .. } | BenchError::Csv(_) => 1,
        }
    }
}

pub type Result<T, E = BenchError> = std::result::Result<T, E>;
