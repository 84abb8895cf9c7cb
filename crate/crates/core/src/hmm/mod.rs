//! First-order HMM over tags with ambiguity classes as observations.

mod barrier;
pub mod fixtures;
mod inventory;
mod params;
mod train;
mod viterbi;

pub use barrier::{split_at_barriers, BarrierSplit};
pub use inventory::{class_name_for, AmbiguityClass, Inventory};
pub use params::{HmmParams, LogProb};
pub use train::{train_from_tagged, TrainOptions, DEFAULT_SMOOTHING};
pub use viterbi::{joint_prob, viterbi, viterbi_segmented, Mode, TIE_TOLERANCE};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HmmError {
    #[error("invalid model: {0}")]
    Invalid(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("training corpus is empty")]
    EmptyCorpus,
    #[error("tag not in class at position {position}{}", .sentence.map(|s| format!(" of sentence {s}")).unwrap_or_default())]
    TagNotInClass { position: usize, sentence: Option<usize> },
    #[error("{classes} classes but {tags} tags")]
    LengthMismatch { classes: usize, tags: usize },
    #[error("every tag sequence has probability zero")]
    NoPath,
    #[error("class sequence does not end with an unambiguous class")]
    NoTerminalBarrier,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
