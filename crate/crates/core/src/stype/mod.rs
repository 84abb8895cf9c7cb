//! s-type transducers: exact Viterbi taggings of stored class
//! subsequences, joined at unambiguous classes.
//!
//! A sentence splits at its unambiguous classes into an initial piece
//! `c_a* c_u` and extended middles `c_u c_a* c_u`. Each stored piece is
//! tagged once with Viterbi, and the sentence model concatenates an
//! initial with any number of middles whose opening barrier matches the
//! class before them. Pieces absent from the store fall back to an n-type
//! model after [`complete`].

mod assemble;
mod complete;
mod extract;
mod subseq;

pub use assemble::{
    assemble_from_unions, assemble_sentence_model, class_alphabet, concatenation_constraint, paired_union,
};
pub use complete::{complete, joint_union};
pub use extract::{extract_initial_union, extract_middle_union};
pub use subseq::{
    disambiguate, disambiguate_all, enumerate_subsequences, extract_subsequences, mark_extension,
    read_subsequences, write_subsequences, ClassSubsequence, Kind, PairedSubsequence, SubsequenceSet,
};

use thiserror::Error;

use crate::fsm::{ClassId, Fst, FstError};
use crate::hmm::HmmParams;
use crate::ntype::NTypeError;

#[derive(Debug, Error)]
pub enum STypeError {
    #[error("sentence {sentence} does not end with an unambiguous class")]
    NoTerminalBarrier { sentence: usize },
    #[error("no tagging with nonzero probability for class sequence {0:?}")]
    NoPath(Vec<ClassId>),
    #[error("only unmarked middle subsequences of two or more classes can be marked")]
    WrongKind,
    #[error("no initial or no middle subsequence to build from")]
    EmptyUnion,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Fst(#[from] FstError),
    #[error(transparent)]
    NType(#[from] NTypeError),
}

/// Tags the retained subsequences and completes them with `n`.
pub fn build_completed(p: &HmmParams, set: &SubsequenceSet, n: &Fst) -> Result<Fst, STypeError> {
    let (initials, middles) = disambiguate_all(p, set)?;
    complete(&paired_union(&initials), &paired_union(&middles), n, p.inventory())
}
