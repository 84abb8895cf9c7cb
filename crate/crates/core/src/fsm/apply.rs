//! Running a transducer on an input string.

use std::collections::HashMap;

use super::fst::{Arc, Fst, StateId};
use super::symbol::Symbol;
use super::FstError;

/// Counters collected by [`Fst::apply_traced`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ApplyStats {
    /// States entered during the search, counting revisits.
    pub visited: usize,
    /// Arcs abandoned after their subtree failed to accept.
    pub backtracks: usize,
}

impl Fst {
    /// First state with two arcs on the same input symbol, or with an
    /// epsilon-input arc competing with other arcs.
    pub fn input_nondeterministic_state(&self) -> Option<StateId> {
        self.states().find(|&s| {
            let arcs = self.arcs(s);
            let has_eps = arcs.iter().any(|a| a.input.is_epsilon());
            (has_eps && arcs.len() > 1) || arcs.windows(2).any(|w| w[0].input == w[1].input)
        })
    }

    pub fn is_input_deterministic(&self) -> bool {
        self.input_nondeterministic_state().is_none()
    }

    /// Output of the unique accepting path whose upper side is `input`,
    /// with epsilons stripped.
    pub fn apply(&self, input: &[Symbol]) -> Result<Vec<Symbol>, FstError> {
        self.apply_traced(input).map(|(out, _)| out)
    }

    pub fn apply_traced(&self, input: &[Symbol]) -> Result<(Vec<Symbol>, ApplyStats), FstError> {
        if self.is_input_deterministic() {
            self.apply_deterministic(input)
        } else {
            self.apply_search(input)
        }
    }

    fn find_input(&self, state: StateId, sym: Symbol) -> Option<&Arc> {
        let arcs = self.arcs(state);
        let i = arcs.partition_point(|a| a.input < sym);
        arcs.get(i).filter(|a| a.input == sym)
    }

    pub(crate) fn apply_search(&self, input: &[Symbol]) -> Result<(Vec<Symbol>, ApplyStats), FstError> {
        Search::new(self, input).run()
    }

    pub(crate) fn apply_deterministic(&self, input: &[Symbol]) -> Result<(Vec<Symbol>, ApplyStats), FstError> {
        let mut stats = ApplyStats { visited: 1, backtracks: 0 };
        let mut out = Vec::with_capacity(input.len());
        let mut state = self.initial();
        let follow_eps = |state: &mut StateId, out: &mut Vec<Symbol>, stats: &mut ApplyStats| {
            let mut steps = 0;
            while let [a] = self.arcs(*state) {
                if !a.input.is_epsilon() || steps > self.num_states() {
                    break;
                }
                if !a.output.is_epsilon() {
                    out.push(a.output);
                }
                *state = a.target;
                stats.visited += 1;
                steps += 1;
            }
        };
        for (pos, &sym) in input.iter().enumerate() {
            follow_eps(&mut state, &mut out, &mut stats);
            let arc = self.find_input(state, sym).ok_or(FstError::NoPath { position: pos })?;
            if !arc.output.is_epsilon() {
                out.push(arc.output);
            }
            state = arc.target;
            stats.visited += 1;
        }
        if !self.is_final(state) {
            follow_eps(&mut state, &mut out, &mut stats);
        }
        if self.is_final(state) {
            Ok((out, stats))
        } else {
            Err(FstError::NoPath { position: input.len() })
        }
    }
}

/// Depth-first search over accepting paths, memoizing the outcome of every
/// `(position, state)` configuration.
struct Search<'a> {
    fst: &'a Fst,
    input: &'a [Symbol],
    /// Suffix output (reversed) of each finished configuration; `None` if dead.
    memo: HashMap<(usize, StateId), Option<Vec<Symbol>>>,
    on_stack: Vec<(usize, StateId)>,
    stats: ApplyStats,
    furthest: usize,
}

impl<'a> Search<'a> {
    fn new(fst: &'a Fst, input: &'a [Symbol]) -> Self {
        Search {
            fst,
            input,
            memo: HashMap::new(),
            on_stack: Vec::new(),
            stats: ApplyStats::default(),
            furthest: 0,
        }
    }

    fn run(mut self) -> Result<(Vec<Symbol>, ApplyStats), FstError> {
        match self.suffix(0, self.fst.initial())? {
            Some(mut out) => {
                out.reverse();
                Ok((out, self.stats))
            }
            None => Err(FstError::NoPath { position: self.furthest }),
        }
    }

    fn suffix(&mut self, pos: usize, state: StateId) -> Result<Option<Vec<Symbol>>, FstError> {
        let key = (pos, state);
        if let Some(done) = self.memo.get(&key) {
            return Ok(done.clone());
        }
        if self.on_stack.contains(&key) {
            // epsilon-input cycle
            return Ok(None);
        }
        self.stats.visited += 1;
        self.furthest = self.furthest.max(pos);
        self.on_stack.push(key);
        let mut found: Option<Vec<Symbol>> = None;
        if pos == self.input.len() && self.fst.is_final(state) {
            found = Some(Vec::new());
        }
        for arc in self.fst.arcs(state) {
            let next_pos = if arc.input.is_epsilon() {
                pos
            } else if pos < self.input.len() && arc.input == self.input[pos] {
                pos + 1
            } else {
                continue;
            };
            let Some(mut rest) = self.suffix(next_pos, arc.target)? else {
                self.stats.backtracks += 1;
                continue;
            };
            if !arc.output.is_epsilon() {
                rest.push(arc.output);
            }
            match &found {
                None => found = Some(rest),
                Some(prev) if *prev != rest => {
                    return Err(FstError::Ambiguous { position: pos });
                }
                Some(_) => {}
            }
        }
        self.on_stack.pop();
        self.memo.insert(key, found.clone());
        Ok(found)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fsm::ops::union_all;
    use crate::fsm::symbol::{ClassId, TagId};

    fn c(i: u32) -> Symbol {
        Symbol::Class(ClassId(i))
    }
    fn t(i: u32) -> Symbol {
        Symbol::Tag(TagId(i))
    }

    #[test]
    fn empty_transducer_is_deterministic() {
        assert!(Fst::empty().is_input_deterministic());
        assert!(matches!(Fst::empty().apply(&[c(0)]), Err(FstError::NoPath { .. })));
    }

    #[test]
    fn competing_inputs_are_nondeterministic() {
        let mut f = Fst::epsilon();
        let q = f.add_state();
        f.add_arc(0, Arc::new(c(0), t(0), q));
        f.add_arc(0, Arc::new(c(0), t(1), q));
        assert_eq!(f.input_nondeterministic_state(), Some(0));
    }

    #[test]
    fn backtracks_to_the_path_decided_later() {
        // c0 c1 -> t0 t1, c0 c2 -> t5 t2: the first tag depends on the second class
        let a = Fst::from_pairs([(c(0), t(0)), (c(1), t(1))]);
        let b = Fst::from_pairs([(c(0), t(5)), (c(2), t(2))]);
        let u = union_all([&a, &b]);
        assert!(!u.is_input_deterministic());
        assert_eq!(u.apply(&[c(0), c(2)]).unwrap(), vec![t(5), t(2)]);
        assert_eq!(u.apply(&[c(0), c(1)]).unwrap(), vec![t(0), t(1)]);
        assert!(matches!(u.apply(&[c(0), c(0)]), Err(FstError::NoPath { .. })));
    }

    #[test]
    fn detects_ambiguity() {
        let a = Fst::from_pairs([(c(0), t(0))]);
        let b = Fst::from_pairs([(c(0), t(1))]);
        let u = union_all([&a, &b]);
        assert!(matches!(u.apply(&[c(0)]), Err(FstError::Ambiguous { .. })));
    }

    #[test]
    fn deterministic_path_visits_linear_states() {
        let f = Fst::from_pairs([(c(0), t(0)), (c(1), t(1)), (c(2), t(2))]);
        let (out, stats) = f.apply_traced(&[c(0), c(1), c(2)]).unwrap();
        assert_eq!(out, vec![t(0), t(1), t(2)]);
        assert!(stats.visited <= 4);
    }
}
