use thiserror::Error;

use crate::functor::Violation;

/// Errors raised by the engine, the logic and the file layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown state `{0}`")]
    UnknownState(String),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("observations range over different alphabets")]
    AlphabetMismatch,

    #[error("functor mismatch: {0}")]
    FunctorMismatch(String),

    #[error("F2 is infinite for probabilistic systems")]
    InfiniteF2,

    #[error("invalid system: {}", join_violations(.0))]
    Invalid(Vec<Violation>),

    #[error("states {0} and {1} are bisimilar; the spoiler has no winning strategy")]
    Bisimilar(String, String),

    #[error("modality set is not strongly separating")]
    NotStronglySeparating,

    #[error("recoding unsupported: {0}")]
    RecodeUnsupported(String),

    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("line {line}: {message}")]
    Syntax { line: u64, message: String },

    #[error("out-of-turn move: expected a {expected} move")]
    OutOfTurn { expected: &'static str },

    #[error("illegal move: {0}")]
    IllegalMove(String),

    #[error("game is over")]
    GameOver,

    #[error("i/o error: {0}")]
    Io(String),
}

fn join_violations(vs: &[Violation]) -> String {
    vs.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
