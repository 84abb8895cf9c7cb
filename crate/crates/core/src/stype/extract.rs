//! Reading subsequence unions back out of sentence models.

use std::collections::BTreeSet;

use crate::fsm::{compose, one_level, project, two_level, Arc, Atom, Fst, Side, Symbol};
use crate::hmm::Inventory;

use super::STypeError;

fn is_barrier_pair(inv: &Inventory, atom: Symbol) -> bool {
    matches!(atom, Symbol::Pair(Atom::Class(c), _) if inv.is_unambiguous(c))
}

fn marked_copy(atom: Symbol) -> Symbol {
    match atom {
        Symbol::Pair(Atom::Class(c), Atom::Tag(t)) => Symbol::Pair(Atom::MarkedClass(c), Atom::MarkedTag(t)),
        other => other,
    }
}

fn pair_alphabet(t: &Fst) -> BTreeSet<Symbol> {
    t.side_alphabet(Side::Upper).into_iter().filter(|s| s.is_pair()).collect()
}

/// Copies pairs up to and including the first barrier pair, then deletes
/// the rest.
fn initial_filter(inv: &Inventory, alphabet: &BTreeSet<Symbol>) -> Fst {
    let mut f = Fst::empty();
    let done = f.add_state();
    f.set_final(done, true);
    for &x in alphabet {
        let to = if is_barrier_pair(inv, x) { done } else { 0 };
        f.add_arc(0, Arc::new(x, x, to));
        f.add_arc(done, Arc::new(x, Symbol::Epsilon, done));
    }
    f.normalize()
}

/// Deletes a prefix, turns a barrier pair into its marked copy, copies
/// ambiguous pairs up to and including the next barrier pair, and deletes
/// the rest.
fn middle_filter(inv: &Inventory, alphabet: &BTreeSet<Symbol>) -> Fst {
    let mut f = Fst::empty();
    let open = f.add_state();
    let done = f.add_state();
    f.set_final(done, true);
    for &x in alphabet {
        f.add_arc(0, Arc::new(x, Symbol::Epsilon, 0));
        f.add_arc(done, Arc::new(x, Symbol::Epsilon, done));
        if is_barrier_pair(inv, x) {
            f.add_arc(0, Arc::new(x, marked_copy(x), open));
            f.add_arc(open, Arc::new(x, x, done));
        } else {
            f.add_arc(open, Arc::new(x, x, open));
        }
    }
    f.normalize()
}

fn extract(t: &Fst, filter: impl Fn(&BTreeSet<Symbol>) -> Fst) -> Result<Fst, STypeError> {
    let flat = one_level(t)?;
    let filtered = compose(&flat, &filter(&pair_alphabet(&flat)));
    Ok(crate::fsm::canonical(&two_level(&project(&filtered, Side::Lower))?))
}

/// The union of initial subsequences (`c_a* c_u` with their tags) read
/// along the paths of a sentence model.
pub fn extract_initial_union(t: &Fst, inv: &Inventory) -> Result<Fst, STypeError> {
    extract(t, |a| initial_filter(inv, a))
}

/// The union of marked extended middles (`c_u^0 c_a* c_u`) read along the
/// paths of a sentence model.
pub fn extract_middle_union(t: &Fst, inv: &Inventory) -> Result<Fst, STypeError> {
    extract(t, |a| middle_filter(inv, a))
}
