//! Building sentence models from subsequence unions.

use std::collections::{BTreeSet, HashMap};

use crate::fsm::{
    canonical, compose, concat, delete_marked, kleene_star, Arc, ClassId, Fst, Side, StateId, Symbol,
};
use crate::hmm::Inventory;

use super::subseq::PairedSubsequence;
use super::STypeError;

/// Union of the single-path transducers of `subs`, built as a trie over
/// arc labels and minimized.
pub fn paired_union(subs: &[PairedSubsequence]) -> Fst {
    let mut fst = Fst::empty();
    let mut children: HashMap<(StateId, Symbol, Symbol), StateId> = HashMap::new();
    for s in subs {
        let mut at = fst.initial();
        for (u, l) in s.upper().into_iter().zip(s.lower()) {
            at = match children.get(&(at, u, l)) {
                Some(&next) => next,
                None => {
                    let next = fst.add_state();
                    fst.add_arc(at, Arc::new(u, l, next));
                    children.insert((at, u, l), next);
                    next
                }
            };
        }
        fst.set_final(at, true);
    }
    canonical(&fst)
}

/// Upper-side constraint: a marked class must directly follow an unmarked
/// occurrence of the same class, unless it opens the string.
///
/// States: 0 at the start, 1 after anything that licenses no marked
/// class, and one state per unambiguous class after reading it.
pub fn concatenation_constraint(alphabet: &BTreeSet<Symbol>) -> Fst {
    let barriers: BTreeSet<ClassId> = alphabet
        .iter()
        .filter_map(|s| match s {
            Symbol::MarkedClass(c) => Some(*c),
            _ => None,
        })
        .collect();
    let mut fst = Fst::empty();
    fst.set_final(0, true);
    let other = fst.add_state();
    fst.set_final(other, true);
    let mut after = HashMap::new();
    for &c in &barriers {
        let s = fst.add_state();
        fst.set_final(s, true);
        after.insert(c, s);
    }
    let sources: Vec<StateId> = fst.states().collect();
    for &from in &sources {
        for &sym in alphabet {
            let to = match sym {
                Symbol::Class(c) => after.get(&c).copied().unwrap_or(other),
                Symbol::MarkedClass(c) if from == 0 || after.get(&c) == Some(&from) => other,
                Symbol::MarkedClass(_) | Symbol::Epsilon => continue,
                _ => other,
            };
            fst.add_arc(from, Arc::new(sym, sym, to));
        }
    }
    fst.normalize()
}

/// Sentence model from an initial union and a marked middle union:
/// initials followed by any number of middles, with each middle's marked
/// class matched against the barrier before it and then deleted.
pub fn assemble_from_unions(initials: &Fst, middles: &Fst) -> Result<Fst, STypeError> {
    if initials.is_empty() {
        return Err(STypeError::EmptyUnion);
    }
    let prelim = concat(initials, &kleene_star(middles));
    let upper = prelim.side_alphabet(Side::Upper);
    let constrained = compose(&concatenation_constraint(&upper), &prelim);
    let marked_classes: BTreeSet<Symbol> = upper.iter().copied().filter(|s| s.is_marked()).collect();
    let marked_tags: BTreeSet<Symbol> =
        prelim.side_alphabet(Side::Lower).into_iter().filter(|s| s.is_marked()).collect();
    let deleted = delete_marked(&delete_marked(&constrained, Side::Upper, &marked_classes), Side::Lower, &marked_tags);
    Ok(canonical(&deleted))
}

/// The s-type sentence model of disambiguated subsequences. `middles`
/// must already be marked.
pub fn assemble_sentence_model(
    initials: &[PairedSubsequence],
    middles: &[PairedSubsequence],
) -> Result<Fst, STypeError> {
    if initials.is_empty() || middles.is_empty() {
        return Err(STypeError::EmptyUnion);
    }
    if middles.iter().any(|m| !m.marked) {
        return Err(STypeError::WrongKind);
    }
    assemble_from_unions(&paired_union(initials), &paired_union(middles))
}

/// Upper-side symbols a sentence model over `inv` may read.
pub fn class_alphabet(inv: &Inventory) -> BTreeSet<Symbol> {
    inv.class_ids().map(Symbol::Class).collect()
}
