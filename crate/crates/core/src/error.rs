use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),

    #[error("level mismatch: expected {expected}, found {found}")]
    LevelMismatch { expected: u32, found: u32 },

    #[error("rank mismatch: module has rank {module}, free module has rank {free}")]
    RankMismatch { module: usize, free: usize },

    #[error("not a submodule: generator {0} of the smaller module is not in the larger one")]
    NotSubmodule(String),

    #[error("pair rank mismatch: sub-module rank {sub}, super-module rank {sup}")]
    PairRankMismatch { sub: usize, sup: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not converged: {0}")]
    NotConverged(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
