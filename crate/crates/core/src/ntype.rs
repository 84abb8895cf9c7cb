//! n-type transducers: one greedy tag decision per class, conditioned on
//! the previous decision (n1) or on nothing (n0).

use std::collections::HashMap;

use thiserror::Error;

use crate::fsm::{canonical, Arc, ClassId, Fst, StateId, Symbol, TagId};
use crate::hmm::{HmmParams, LogProb};

#[derive(Debug, Error)]
pub enum NTypeError {
    #[error("no tag of class {0:?} has a nonzero score")]
    NoFiniteScore(ClassId),
    #[error("{0} is not supported")]
    Unsupported(&'static str),
}

/// Which approximation to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NType {
    N0,
    N1,
    /// Conditioning on two previous tags. Reserved; building it fails.
    N2,
}

/// A class with the tag chosen for it and the score that won.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairChoice {
    pub class: ClassId,
    pub tag: TagId,
    pub score: LogProb,
}

fn argmax(
    p: &HmmParams,
    c: ClassId,
    score: impl Fn(TagId) -> LogProb,
) -> Result<PairChoice, NTypeError> {
    let mut best: Option<PairChoice> = None;
    for &t in p.inventory().class_tags(c) {
        let s = score(t);
        if s > best.map_or(f64::NEG_INFINITY, |b| b.score) {
            best = Some(PairChoice { class: c, tag: t, score: s });
        }
    }
    best.ok_or(NTypeError::NoFiniteScore(c))
}

/// Best pair for `c` at sentence start: `argmax pi(t) b(c|t)`.
pub fn best_pair_initial(p: &HmmParams, c: ClassId) -> Result<PairChoice, NTypeError> {
    argmax(p, c, |t| p.pi(t) + p.emit(c, t))
}

/// Best pair for `c` after `prev`: `argmax a(t|prev) b(c|t)`.
pub fn best_pair_transition(p: &HmmParams, c: ClassId, prev: TagId) -> Result<PairChoice, NTypeError> {
    argmax(p, c, |t| p.trans(prev, t) + p.emit(c, t))
}

/// Best pair for `c` from class probabilities alone: `argmax b(c|t)`.
pub fn best_pair_unconditioned(p: &HmmParams, c: ClassId) -> Result<PairChoice, NTypeError> {
    argmax(p, c, |t| p.emit(c, t))
}

fn arc(choice: PairChoice, target: StateId) -> Arc {
    Arc::new(Symbol::Class(choice.class), Symbol::Tag(choice.tag), target)
}

/// The unminimized n1 network: an initial state plus one final state per
/// (class, member tag) pair. Every state has one arc per class, leading to
/// the state of the pair chosen for that class.
pub fn build_n1_raw(p: &HmmParams) -> Result<Fst, NTypeError> {
    let inv = p.inventory();
    let mut fst = Fst::empty();
    fst.set_final(0, true);
    let mut state_of: HashMap<(ClassId, TagId), StateId> = HashMap::new();
    let mut pairs = Vec::new();
    for c in inv.class_ids() {
        for &t in inv.class_tags(c) {
            let s = fst.add_state();
            fst.set_final(s, true);
            state_of.insert((c, t), s);
            pairs.push((s, t));
        }
    }
    for c in inv.class_ids() {
        let choice = best_pair_initial(p, c)?;
        fst.add_arc(0, arc(choice, state_of[&(c, choice.tag)]));
    }
    for &(s, prev) in &pairs {
        for c in inv.class_ids() {
            let choice = best_pair_transition(p, c, prev)?;
            fst.add_arc(s, arc(choice, state_of[&(c, choice.tag)]));
        }
    }
    Ok(fst)
}

/// The unminimized n0 network: an initial state plus one state per class
/// for its chosen pair, all with the same outgoing arcs.
pub fn build_n0_raw(p: &HmmParams) -> Result<Fst, NTypeError> {
    let inv = p.inventory();
    let choices = inv
        .class_ids()
        .map(|c| best_pair_unconditioned(p, c))
        .collect::<Result<Vec<_>, _>>()?;
    let mut fst = Fst::empty();
    fst.set_final(0, true);
    for _ in &choices {
        let s = fst.add_state();
        fst.set_final(s, true);
    }
    for s in fst.states().collect::<Vec<_>>() {
        for (i, &choice) in choices.iter().enumerate() {
            fst.add_arc(s, arc(choice, i as StateId + 1));
        }
    }
    Ok(fst)
}

pub fn build_n1(p: &HmmParams) -> Result<Fst, NTypeError> {
    Ok(canonical(&build_n1_raw(p)?))
}

pub fn build_n0(p: &HmmParams) -> Result<Fst, NTypeError> {
    Ok(canonical(&build_n0_raw(p)?))
}

pub fn build(p: &HmmParams, kind: NType) -> Result<Fst, NTypeError> {
    match kind {
        NType::N0 => build_n0(p),
        NType::N1 => build_n1(p),
        NType::N2 => Err(NTypeError::Unsupported("the n2-type approximation")),
    }
}

/// The tags an n1 tagger assigns, computed decision by decision.
pub fn greedy_n1_tags(p: &HmmParams, classes: &[ClassId]) -> Result<Vec<TagId>, NTypeError> {
    let mut out: Vec<TagId> = Vec::with_capacity(classes.len());
    for &c in classes {
        let choice = match out.last() {
            None => best_pair_initial(p, c)?,
            Some(&prev) => best_pair_transition(p, c, prev)?,
        };
        out.push(choice.tag);
    }
    Ok(out)
}
