//! Finite-state approximations of HMM part-of-speech taggers.
//!
//! An HMM tagger maps a sentence's sequence of ambiguity classes to a tag
//! sequence. This crate compiles that mapping into unweighted transducers:
//!
//! * n-type: greedy, irreversible per-word decisions ([`ntype`]);
//! * s-type: exact Viterbi tagging of stored class subsequences between
//!   unambiguous classes, completed with an n-type fallback ([`stype`]).
//!
//! [`tagger`] runs any of them over a token stream, and [`eval`] measures
//! them against the HMM they approximate.

pub mod corpus;
pub mod eval;
pub mod fsm;
pub mod hmm;
pub mod ntype;
pub mod stype;
pub mod tagger;

pub use fsm::{ClassId, Fst, Symbol, TagId};
pub use hmm::{HmmParams, Inventory};
