use thiserror::Error;

use crate::words::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("exponent budget exceeded: value needs {needed} bits, budget is {budget} bits")]
    Budget { needed: String, budget: u64 },

    #[error("invalid presentation: {0}")]
    Schema(String),

    #[error("unknown relator family `{0}`")]
    UnknownFamily(String),

    #[error("relators {first} and {second} coincide up to rotation and inversion")]
    DuplicateRelator { first: String, second: String },

    #[error("no relators within the length bound {0}")]
    EmptyRelatorSet(String),

    #[error("invalid set spec `{spec}`: {reason}")]
    SetSpec { spec: String, reason: String },

    #[error("enumeration of an infinite set needs a depth or length bound")]
    Unbounded,

    #[error("reduction did not finish within {0} steps")]
    StepLimit(usize),

    #[error("the empty word has no witness")]
    EmptyWord,

    #[error("word is not majority-reduced: it contains {v_len} letters of relator {relator_index} (length {relator_len})")]
    NotMajorityReduced {
        relator_index: usize,
        v_len: String,
        relator_len: String,
    },

    #[error("presentation is not C'({lambda}): a piece reaches ratio {max_ratio}")]
    NotSmallCancellation { max_ratio: String, lambda: String },

    #[error("invalid set of positive integers: {0}")]
    NatSet(String),

    #[error("cannot compose witnesses: {0}")]
    Composition(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
