use thiserror::Error;

/// Errors raised while building games, parsing inputs or configuring solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid game configuration: {0}")]
    Config(String),

    #[error("unknown game id `{0}` (valid ids: kuhn, leduc, leduc5)")]
    UnknownGame(String),

    #[error("unknown algorithm id `{0}` (valid ids: cfr, cfrplus, pcfr, sync-pcfr)")]
    UnknownAlgorithm(String),

    #[error("infoset `{key}` is inconsistent: {reason}")]
    InconsistentInfoset { key: String, reason: String },

    #[error("malformed matrix game: {0}")]
    Matrix(String),

    #[error("invalid budget: {0}")]
    Budget(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
