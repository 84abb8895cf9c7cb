//! Finite-state transducers over class and tag symbols, with the rational
//! operations needed to assemble tagging transducers.

mod apply;
mod compose;
mod determinize;
mod fst;
pub mod ops;
mod symbol;
mod text;

pub use apply::ApplyStats;
pub use compose::compose;
pub use determinize::{canonical, determinize_pairs, is_pair_deterministic, minimize};
pub use fst::{Arc, Fst, Side, StateId};
pub use ops::{
    concat, cross_pair, delete_marked, difference, identity, intersect, invert, kleene_star,
    not_contains_factor, one_level, project, two_level, union, union_all,
};
pub use symbol::{Atom, ClassId, Symbol, TagId};
pub use text::{format_symbol, parse_symbol, SymbolNames};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FstError {
    #[error("sequence lengths differ: {upper} upper vs {lower} lower symbols")]
    LengthMismatch { upper: usize, lower: usize },
    #[error("state {0} is not pair-deterministic")]
    NotDeterministic(StateId),
    #[error("operation requires automata, got a relation")]
    NotAutomaton,
    #[error("malformed alphabet: {0}")]
    MalformedAlphabet(String),
    #[error("no accepting path (input rejected at position {position})")]
    NoPath { position: usize },
    #[error("two accepting paths with different outputs (diverging at position {position})")]
    Ambiguous { position: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
