//! Random transducers and set-level oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use hmmfst::fsm::{Arc, StateId};
use hmmfst::{ClassId, Fst, Symbol};
use rand::Rng;

pub type Rel = BTreeSet<(Vec<Symbol>, Vec<Symbol>)>;

/// Three classes and one marked class.
pub fn alphabet() -> Vec<Symbol> {
    vec![
        Symbol::Class(ClassId(0)),
        Symbol::Class(ClassId(1)),
        Symbol::Class(ClassId(2)),
        Symbol::MarkedClass(ClassId(0)),
    ]
}

#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub max_states: usize,
    pub max_arcs_per_state: usize,
    /// Chance that a side of an arc is epsilon. Never both.
    pub eps: f64,
    /// Arcs carry the same symbol on both sides.
    pub automaton: bool,
}

impl Default for Shape {
    fn default() -> Self {
        Shape { max_states: 5, max_arcs_per_state: 2, eps: 0.15, automaton: false }
    }
}

pub fn random_fst(rng: &mut impl Rng, sigma: &[Symbol], shape: Shape) -> Fst {
    let n = rng.random_range(1..=shape.max_states);
    let mut f = Fst::empty();
    for _ in 1..n {
        f.add_state();
    }
    for s in 0..n as StateId {
        f.set_final(s, rng.random_bool(0.4));
        for _ in 0..rng.random_range(0..=shape.max_arcs_per_state) {
            let target = rng.random_range(0..n) as StateId;
            let pick = |rng: &mut dyn rand::RngCore| sigma[rng.random_range(0..sigma.len())];
            let (i, o) = if shape.automaton {
                let x = pick(rng);
                (x, x)
            } else {
                let mut i = pick(rng);
                let mut o = pick(rng);
                match (rng.random_bool(shape.eps), rng.random_bool(shape.eps)) {
                    (true, false) => i = Symbol::Epsilon,
                    (false, true) => o = Symbol::Epsilon,
                    _ => {}
                }
                (i, o)
            };
            f.add_arc(s, Arc::new(i, o, target));
        }
    }
    f
}

/// Random string of length `0..=max_len`.
pub fn random_string(rng: &mut impl Rng, sigma: &[Symbol], max_len: usize) -> Vec<Symbol> {
    let len = rng.random_range(0..=max_len);
    (0..len).map(|_| sigma[rng.random_range(0..sigma.len())]).collect()
}

/// The relation of `f` restricted to both sides of length at most
/// `max_len`, after erasing the symbols rejected by `keep_upper` or
/// `keep_lower`. Breadth-first over (state, upper, lower).
pub fn relation_mapped(
    f: &Fst,
    max_len: usize,
    keep_upper: impl Fn(Symbol) -> bool,
    keep_lower: impl Fn(Symbol) -> bool,
) -> Rel {
    let mut seen: HashSet<(StateId, Vec<Symbol>, Vec<Symbol>)> = HashSet::new();
    let mut queue = VecDeque::new();
    let start = (f.initial(), Vec::new(), Vec::new());
    seen.insert(start.clone());
    queue.push_back(start);
    let mut out = Rel::new();
    while let Some((q, u, l)) = queue.pop_front() {
        if f.is_final(q) {
            out.insert((u.clone(), l.clone()));
        }
        for a in f.arcs(q) {
            let mut u2 = u.clone();
            let mut l2 = l.clone();
            if !a.input.is_epsilon() && keep_upper(a.input) {
                u2.push(a.input);
            }
            if !a.output.is_epsilon() && keep_lower(a.output) {
                l2.push(a.output);
            }
            if u2.len() > max_len || l2.len() > max_len {
                continue;
            }
            let next = (a.target, u2, l2);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    out
}

pub fn relation(f: &Fst, max_len: usize) -> Rel {
    relation_mapped(f, max_len, |_| true, |_| true)
}

pub fn strings(f: &Fst, max_len: usize) -> BTreeSet<Vec<Symbol>> {
    relation(f, max_len).into_iter().map(|(u, _)| u).collect()
}

pub fn concat_rel(a: &Rel, b: &Rel, max_len: usize) -> Rel {
    let mut out = Rel::new();
    for (u1, l1) in a {
        for (u2, l2) in b {
            if u1.len() + u2.len() <= max_len && l1.len() + l2.len() <= max_len {
                out.insert(([u1.as_slice(), u2].concat(), [l1.as_slice(), l2].concat()));
            }
        }
    }
    out
}

pub fn star_rel(a: &Rel, max_len: usize) -> Rel {
    let mut out = Rel::from([(Vec::new(), Vec::new())]);
    let mut frontier = out.clone();
    while !frontier.is_empty() {
        let next: Rel = concat_rel(&frontier, a, max_len).difference(&out).cloned().collect();
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Composition by the set definition: pairs `(u, l)` with some `m` such
/// that `(u, m)` is in `a` and `(m, l)` in `b`.
pub fn compose_rel(a: &Rel, b: &Rel) -> Rel {
    let mut out = Rel::new();
    for (u, m) in a {
        for (m2, l) in b {
            if m == m2 {
                out.insert((u.clone(), l.clone()));
            }
        }
    }
    out
}

/// Drops every arc with an epsilon side, so that both sides of every path
/// have the path's length.
pub fn letter_to_letter(f: &Fst) -> Fst {
    let mut out = Fst::empty();
    for _ in 1..f.num_states() {
        out.add_state();
    }
    out.set_initial(f.initial());
    for s in f.states() {
        out.set_final(s, f.is_final(s));
        for a in f.arcs(s).iter().filter(|a| !a.input.is_epsilon() && !a.output.is_epsilon()) {
            out.add_arc(s, *a);
        }
    }
    out
}

/// All strings over `sigma` of length at most `max_len`.
pub fn all_strings(sigma: &[Symbol], max_len: usize) -> Vec<Vec<Symbol>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|s: &Vec<Symbol>| {
                sigma.iter().map(move |&x| {
                    let mut t = s.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}
