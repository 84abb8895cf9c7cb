//! Rational operations on transducers.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::determinize::determinize_pairs;
use super::fst::{Arc, Fst, Side, StateId};
use super::symbol::Symbol;
use super::FstError;

/// Copies `src` into `dst`, returning the id offset of its states.
fn embed(dst: &mut Fst, src: &Fst) -> StateId {
    let offset = dst.num_states() as StateId;
    for s in src.states() {
        let n = dst.add_state();
        dst.set_final(n, src.is_final(s));
    }
    for s in src.states() {
        for a in src.arcs(s) {
            dst.add_arc(offset + s, Arc { target: a.target + offset, ..*a });
        }
    }
    offset
}

fn eps_arc(target: StateId) -> Arc {
    Arc::new(Symbol::Epsilon, Symbol::Epsilon, target)
}

/// Union of two relations.
pub fn union(a: &Fst, b: &Fst) -> Fst {
    union_all([a, b])
}

/// Union of any number of relations.
pub fn union_all<'a>(parts: impl IntoIterator<Item = &'a Fst>) -> Fst {
    let mut out = Fst::with_capacity(1);
    let start = out.add_state();
    for part in parts {
        let off = embed(&mut out, part);
        out.add_arc(start, eps_arc(off + part.initial()));
    }
    out.normalize()
}

/// Concatenation: every path of `a` followed by every path of `b`.
pub fn concat(a: &Fst, b: &Fst) -> Fst {
    let mut out = Fst::with_capacity(a.num_states() + b.num_states());
    let off_a = embed(&mut out, a);
    let off_b = embed(&mut out, b);
    out.set_initial(off_a + a.initial());
    for s in a.finals() {
        out.set_final(off_a + s, false);
        out.add_arc(off_a + s, eps_arc(off_b + b.initial()));
    }
    out.normalize()
}

/// Kleene star: zero or more repetitions of `a`.
pub fn kleene_star(a: &Fst) -> Fst {
    let mut out = Fst::with_capacity(a.num_states() + 1);
    let start = out.add_state();
    out.set_final(start, true);
    let off = embed(&mut out, a);
    out.add_arc(start, eps_arc(off + a.initial()));
    for s in a.finals() {
        out.add_arc(off + s, eps_arc(start));
    }
    out.normalize()
}

/// Cross product of two equal-length symbol sequences: a single path whose
/// i-th arc is `upper[i]:lower[i]`.
pub fn cross_pair(upper: &[Symbol], lower: &[Symbol]) -> Result<Fst, FstError> {
    if upper.len() != lower.len() || upper.is_empty() {
        return Err(FstError::LengthMismatch { upper: upper.len(), lower: lower.len() });
    }
    Ok(Fst::from_pairs(upper.iter().copied().zip(lower.iter().copied())))
}

/// The automaton of one side of a relation.
pub fn project(r: &Fst, side: Side) -> Fst {
    r.map_labels(|i, o| {
        let s = match side {
            Side::Upper => i,
            Side::Lower => o,
        };
        (s, s)
    })
}

/// Swaps the upper and lower side.
pub fn invert(r: &Fst) -> Fst {
    r.map_labels(|i, o| (o, i))
}

/// Intersection of two automata.
pub fn intersect(a: &Fst, b: &Fst) -> Result<Fst, FstError> {
    if !a.is_automaton() || !b.is_automaton() {
        return Err(FstError::NotAutomaton);
    }
    let mut out = Fst::with_capacity(1);
    let mut index: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let mut queue = VecDeque::new();
    let start = (a.initial(), b.initial());
    index.insert(start, out.add_state());
    queue.push_back(start);
    while let Some((p, q)) = queue.pop_front() {
        let from = index[&(p, q)];
        out.set_final(from, a.is_final(p) && b.is_final(q));
        for x in a.arcs(p) {
            for y in b.arcs(q).iter().filter(|y| y.input == x.input) {
                let key = (x.target, y.target);
                let to = *index.entry(key).or_insert_with(|| {
                    queue.push_back(key);
                    out.add_state()
                });
                out.add_arc(from, Arc::new(x.input, x.input, to));
            }
        }
    }
    Ok(out.normalize())
}

/// Strings of automaton `a` that are not in automaton `b`.
///
/// `b` is determinized; a missing transition of `b` stands for the sink
/// state of its completion over the joint alphabet, whose complement is
/// final.
pub fn difference(a: &Fst, b: &Fst) -> Result<Fst, FstError> {
    if !a.is_automaton() || !b.is_automaton() {
        return Err(FstError::NotAutomaton);
    }
    let b = determinize_pairs(b);
    let mut out = Fst::with_capacity(1);
    let mut index: HashMap<(StateId, Option<StateId>), StateId> = HashMap::new();
    let mut queue = VecDeque::new();
    let start = (a.initial(), Some(b.initial()));
    index.insert(start, out.add_state());
    queue.push_back(start);
    while let Some((p, q)) = queue.pop_front() {
        let from = index[&(p, q)];
        let b_final = q.is_some_and(|q| b.is_final(q));
        out.set_final(from, a.is_final(p) && !b_final);
        for x in a.arcs(p) {
            let next_q = q.and_then(|q| {
                let arcs = b.arcs(q);
                let i = arcs.partition_point(|y| y.input < x.input);
                arcs.get(i).filter(|y| y.input == x.input).map(|y| y.target)
            });
            let key = (x.target, next_q);
            let to = *index.entry(key).or_insert_with(|| {
                queue.push_back(key);
                out.add_state()
            });
            out.add_arc(from, Arc::new(x.input, x.input, to));
        }
    }
    Ok(out.normalize())
}

/// Automaton over `alphabet` accepting the strings that do not contain
/// `factor` as a contiguous substring.
pub fn not_contains_factor(factor: &[Symbol], alphabet: &BTreeSet<Symbol>) -> Fst {
    assert!(!factor.is_empty(), "factor must be nonempty");
    // KMP failure function; state k = longest factor prefix matched
    let m = factor.len();
    let mut fail = vec![0usize; m];
    let mut k = 0;
    for i in 1..m {
        while k > 0 && factor[i] != factor[k] {
            k = fail[k - 1];
        }
        if factor[i] == factor[k] {
            k += 1;
        }
        fail[i] = k;
    }
    let step = |mut k: usize, s: Symbol| -> usize {
        loop {
            if factor[k] == s {
                return k + 1;
            }
            if k == 0 {
                return 0;
            }
            k = fail[k - 1];
        }
    };
    let mut out = Fst::with_capacity(m);
    for _ in 0..m {
        let s = out.add_state();
        out.set_final(s, true);
    }
    for k in 0..m {
        for &s in alphabet.iter().filter(|s| !s.is_epsilon()) {
            let next = step(k, s);
            if next < m {
                out.add_arc(k as StateId, Arc::new(s, s, next as StateId));
            }
        }
    }
    out.normalize()
}

/// Replaces every occurrence of a symbol from `marked` on `side` by
/// epsilon, leaving the other side untouched.
pub fn delete_marked(r: &Fst, side: Side, marked: &BTreeSet<Symbol>) -> Fst {
    r.map_labels(|i, o| match side {
        Side::Upper if marked.contains(&i) => (Symbol::Epsilon, o),
        Side::Lower if marked.contains(&o) => (i, Symbol::Epsilon),
        _ => (i, o),
    })
}

/// 1-level form: each arc `x:y` becomes the automaton arc `<x,y>:<x,y>`.
pub fn one_level(r: &Fst) -> Result<Fst, FstError> {
    let mut bad = None;
    let out = r.map_labels(|i, o| match Symbol::pair(i, o) {
        Some(p) => (p, p),
        None => {
            bad.get_or_insert((i, o));
            (i, o)
        }
    });
    match bad {
        Some((i, o)) => Err(FstError::MalformedAlphabet(format!("cannot pair {i}:{o}"))),
        None => Ok(out),
    }
}

/// 2-level form, the inverse of [`one_level`].
pub fn two_level(a: &Fst) -> Result<Fst, FstError> {
    let mut bad = None;
    let out = a.map_labels(|i, o| match (i.split_pair(), i == o) {
        (Some(pair), true) => pair,
        _ => {
            bad.get_or_insert((i, o));
            (i, o)
        }
    });
    match bad {
        Some((i, o)) => Err(FstError::MalformedAlphabet(format!("not a pair atom arc {i}:{o}"))),
        None => Ok(out),
    }
}

/// Identity relation over an alphabet, `(a:a)*`.
pub fn identity(alphabet: &BTreeSet<Symbol>) -> Fst {
    Fst::universal(alphabet)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fsm::symbol::{ClassId, TagId};

    fn x() -> Symbol {
        Symbol::Class(ClassId(0))
    }
    fn y() -> Symbol {
        Symbol::Class(ClassId(1))
    }
    fn z() -> Symbol {
        Symbol::Class(ClassId(2))
    }
    fn lang(strings: &[&[Symbol]]) -> Fst {
        let parts: Vec<Fst> = strings.iter().map(|s| Fst::from_string(s)).collect();
        union_all(parts.iter())
    }
    fn strings(f: &Fst, n: usize) -> BTreeSet<Vec<Symbol>> {
        f.relation_up_to(n).into_iter().map(|(u, _)| u).collect()
    }

    #[test]
    fn union_with_empty_is_identity() {
        let a = Fst::from_pairs([(x(), y())]);
        assert_eq!(union(&a, &Fst::empty()).relation_up_to(3), a.relation_up_to(3));
    }

    #[test]
    fn union_of_two_pairs_accepts_both() {
        let u = union(&Fst::from_pairs([(x(), y())]), &Fst::from_pairs([(x(), z())]));
        assert_eq!(
            u.relation_up_to(1),
            BTreeSet::from([(vec![x()], vec![y()]), (vec![x()], vec![z()])])
        );
        assert_eq!(union(&u, &u).relation_up_to(3), u.relation_up_to(3));
    }

    #[test]
    fn concat_examples() {
        let xy = concat(&lang(&[&[x()]]), &lang(&[&[y()]]));
        assert_eq!(strings(&xy, 4), BTreeSet::from([vec![x(), y()]]));
        assert!(concat(&lang(&[&[x()]]), &Fst::empty()).is_empty());
        let r = concat(&lang(&[&[x()], &[x(), y()]]), &lang(&[&[y()]]));
        assert_eq!(strings(&r, 3), BTreeSet::from([vec![x(), y()], vec![x(), y(), y()]]));
    }

    #[test]
    fn star_examples() {
        let s = kleene_star(&lang(&[&[x()]]));
        assert!(s.accepts(&[]) && s.accepts(&[x()]) && s.accepts(&[x(), x()]));
        assert_eq!(kleene_star(&Fst::empty()).relation_up_to(3), BTreeSet::from([(vec![], vec![])]));
        let t = kleene_star(&Fst::from_pairs([(x(), y())]));
        assert!(t.relation_up_to(2).contains(&(vec![x(), x()], vec![y(), y()])));
    }

    #[test]
    fn cross_pair_builds_chain() {
        let det = Symbol::Class(ClassId(0));
        let adj_noun = Symbol::Class(ClassId(1));
        let f = cross_pair(&[det, adj_noun], &[Symbol::Tag(TagId(0)), Symbol::Tag(TagId(1))]).unwrap();
        assert_eq!(f.num_states(), 3);
        assert_eq!(
            f.relation_up_to(2),
            BTreeSet::from([(vec![det, adj_noun], vec![Symbol::Tag(TagId(0)), Symbol::Tag(TagId(1))])])
        );
        assert_eq!(cross_pair(&[x(), y(), z()], &[x(), y(), z()]).unwrap().num_states(), 4);
        assert_eq!(cross_pair(&[x()], &[y()]).unwrap().num_arcs(), 1);
        assert!(matches!(cross_pair(&[x()], &[x(), y()]), Err(FstError::LengthMismatch { .. })));
    }

    #[test]
    fn projections() {
        let r = Fst::from_pairs([(x(), y())]);
        assert_eq!(strings(&project(&r, Side::Upper), 2), BTreeSet::from([vec![x()]]));
        assert_eq!(strings(&project(&r, Side::Lower), 2), BTreeSet::from([vec![y()]]));
    }

    #[test]
    fn difference_examples() {
        let d = difference(&lang(&[&[x()], &[y()]]), &lang(&[&[y()]])).unwrap();
        assert_eq!(strings(&d, 3), BTreeSet::from([vec![x()]]));
        let a = lang(&[&[x()], &[x(), x()], &[x(), y()]]);
        assert_eq!(difference(&a, &Fst::empty()).unwrap().relation_up_to(3), a.relation_up_to(3));
        let d = difference(&a, &kleene_star(&lang(&[&[x()]]))).unwrap();
        assert_eq!(strings(&d, 3), BTreeSet::from([vec![x(), y()]]));
        assert!(matches!(
            difference(&Fst::from_pairs([(x(), y())]), &a),
            Err(FstError::NotAutomaton)
        ));
    }

    #[test]
    fn factor_constraint_examples() {
        let (p, q, m) = (x(), y(), z());
        let alphabet = BTreeSet::from([p, q, m]);
        let f = not_contains_factor(&[q, m], &alphabet);
        assert!(f.accepts(&[p, q]) && f.accepts(&[m, p]) && f.accepts(&[]));
        assert!(!f.accepts(&[q, m]) && !f.accepts(&[p, q, m]));
        assert!(not_contains_factor(&[p, q, m, p], &alphabet).accepts(&[p, q, m]));
    }

    #[test]
    fn one_level_round_trip() {
        let r = Fst::from_pairs([(x(), y()), (z(), z())]);
        let one = one_level(&r).unwrap();
        assert!(one.is_automaton());
        assert_eq!(
            strings(&one, 2),
            BTreeSet::from([vec![Symbol::pair(x(), y()).unwrap(), Symbol::pair(z(), z()).unwrap()]])
        );
        assert_eq!(two_level(&one).unwrap().relation_up_to(3), r.relation_up_to(3));
        assert!(one_level(&one).is_err());
        assert!(two_level(&r).is_err());
    }

    #[test]
    fn delete_marked_touches_one_side() {
        let mc = Symbol::MarkedClass(ClassId(0));
        let mt = Symbol::MarkedTag(TagId(0));
        let r = Fst::from_pairs([(mc, mt), (y(), Symbol::Tag(TagId(1)))]);
        let up = delete_marked(&r, Side::Upper, &BTreeSet::from([mc]));
        assert_eq!(
            up.relation_up_to(3),
            BTreeSet::from([(vec![y()], vec![mt, Symbol::Tag(TagId(1))])])
        );
        let both = delete_marked(&up, Side::Lower, &BTreeSet::from([mt]));
        assert_eq!(
            both.relation_up_to(3),
            BTreeSet::from([(vec![y()], vec![Symbol::Tag(TagId(1))])])
        );
        assert_eq!(delete_marked(&r, Side::Upper, &BTreeSet::new()).relation_up_to(3), r.relation_up_to(3));
    }
}
