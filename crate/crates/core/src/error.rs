use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: String, right: String },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("parse error at position {pos} near `{token}`: {msg}")]
    Parse { token: String, pos: usize, msg: String },

    #[error("bound of {bound} states exceeded")]
    BoundExceeded { bound: usize },

    #[error("no terminal value reached after {iters} iterations")]
    Diverged { iters: usize },

    #[error("set is not state-closed: restriction of {state} at letter {letter} is missing")]
    NotStateClosed { state: String, letter: u8 },

    #[error("coset data inconsistent: {0}")]
    Coset(String),

    #[error("branch ambiguity near {0}")]
    BranchAmbiguity(String),

    #[error("point {0} too close to a puncture")]
    NearPuncture(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
