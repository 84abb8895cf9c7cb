use std::collections::{BTreeSet, VecDeque};

use super::symbol::Symbol;

pub type StateId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arc {
    pub input: Symbol,
    pub output: Symbol,
    pub target: StateId,
}

impl Arc {
    pub fn new(input: Symbol, output: Symbol, target: StateId) -> Self {
        Arc { input, output, target }
    }

    pub fn label(&self) -> (Symbol, Symbol) {
        (self.input, self.output)
    }

    fn is_double_epsilon(&self) -> bool {
        self.input.is_epsilon() && self.output.is_epsilon()
    }
}

/// Which side of a relation an operation looks at.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Upper,
    Lower,
}

/// An unweighted finite-state transducer.
///
/// States are dense indices. A freshly built `Fst` may contain
/// `epsilon:epsilon` arcs; every public operation returns a normalized
/// transducer (no such arcs, trimmed, arcs sorted by label).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fst {
    arcs: Vec<Vec<Arc>>,
    finals: Vec<bool>,
    initial: StateId,
}

impl Default for Fst {
    fn default() -> Self {
        Fst::empty()
    }
}

impl Fst {
    /// The empty relation: a single non-final initial state.
    pub fn empty() -> Self {
        Fst { arcs: vec![Vec::new()], finals: vec![false], initial: 0 }
    }

    /// The relation containing only the empty string pair.
    pub fn epsilon() -> Self {
        Fst { arcs: vec![Vec::new()], finals: vec![true], initial: 0 }
    }

    /// Empty builder with no states at all; the caller must add an initial.
    pub(crate) fn with_capacity(states: usize) -> Self {
        Fst {
            arcs: Vec::with_capacity(states),
            finals: Vec::with_capacity(states),
            initial: 0,
        }
    }

    /// Automaton accepting exactly the given string.
    pub fn from_string(symbols: &[Symbol]) -> Self {
        Fst::from_pairs(symbols.iter().map(|&s| (s, s)))
    }

    /// Single-path transducer over the given arc labels.
    pub fn from_pairs(labels: impl IntoIterator<Item = (Symbol, Symbol)>) -> Self {
        let mut fst = Fst::with_capacity(0);
        let mut cur = fst.add_state();
        for (i, o) in labels {
            let next = fst.add_state();
            fst.add_arc(cur, Arc::new(i, o, next));
            cur = next;
        }
        fst.set_final(cur, true);
        fst.normalize()
    }

    /// Single-state automaton accepting every string over `alphabet`.
    pub fn universal(alphabet: &BTreeSet<Symbol>) -> Self {
        let mut fst = Fst::epsilon();
        for &s in alphabet.iter().filter(|s| !s.is_epsilon()) {
            fst.add_arc(0, Arc::new(s, s, 0));
        }
        fst.sort_arcs();
        fst
    }

    pub fn add_state(&mut self) -> StateId {
        self.arcs.push(Vec::new());
        self.finals.push(false);
        (self.arcs.len() - 1) as StateId
    }

    pub fn add_arc(&mut self, from: StateId, arc: Arc) {
        debug_assert!((arc.target as usize) < self.arcs.len() || arc.target == from);
        self.arcs[from as usize].push(arc);
    }

    pub fn set_final(&mut self, state: StateId, is_final: bool) {
        self.finals[state as usize] = is_final;
    }

    pub fn set_initial(&mut self, state: StateId) {
        self.initial = state;
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn is_final(&self, state: StateId) -> bool {
        self.finals[state as usize]
    }

    pub fn num_states(&self) -> usize {
        self.arcs.len()
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.iter().map(Vec::len).sum()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        0..self.arcs.len() as StateId
    }

    pub fn arcs(&self, state: StateId) -> &[Arc] {
        &self.arcs[state as usize]
    }

    pub fn finals(&self) -> impl Iterator<Item = StateId> + '_ {
        self.states().filter(move |&s| self.is_final(s))
    }

    /// True when the relation is empty.
    pub fn is_empty(&self) -> bool {
        let t = self.clone().trimmed();
        !t.is_final(t.initial) && t.arcs(t.initial).is_empty()
    }

    /// An automaton is a transducer whose every arc has input = output.
    pub fn is_automaton(&self) -> bool {
        self.arcs.iter().flatten().all(|a| a.input == a.output)
    }

    /// All non-epsilon symbols occurring on either side.
    pub fn alphabet(&self) -> BTreeSet<Symbol> {
        let mut set = BTreeSet::new();
        for a in self.arcs.iter().flatten() {
            set.insert(a.input);
            set.insert(a.output);
        }
        set.remove(&Symbol::Epsilon);
        set
    }

    /// Non-epsilon symbols of one side.
    pub fn side_alphabet(&self, side: Side) -> BTreeSet<Symbol> {
        let mut set: BTreeSet<Symbol> = self
            .arcs
            .iter()
            .flatten()
            .map(|a| match side {
                Side::Upper => a.input,
                Side::Lower => a.output,
            })
            .collect();
        set.remove(&Symbol::Epsilon);
        set
    }

    /// Rewrites every arc label; targets are kept.
    pub fn map_labels(&self, mut f: impl FnMut(Symbol, Symbol) -> (Symbol, Symbol)) -> Fst {
        let mut out = self.clone();
        for arcs in &mut out.arcs {
            for a in arcs.iter_mut() {
                let (i, o) = f(a.input, a.output);
                a.input = i;
                a.output = o;
            }
        }
        out.normalize()
    }

    pub(crate) fn sort_arcs(&mut self) {
        for arcs in &mut self.arcs {
            arcs.sort_unstable();
            arcs.dedup();
        }
    }

    /// Removes `epsilon:epsilon` arcs, trims useless states and sorts arcs.
    pub fn normalize(self) -> Fst {
        let has_eps = self.arcs.iter().flatten().any(Arc::is_double_epsilon);
        let fst = if has_eps { self.remove_epsilons() } else { self };
        let mut fst = fst.trimmed();
        fst.sort_arcs();
        fst
    }

    fn remove_epsilons(&self) -> Fst {
        let n = self.num_states();
        let mut out = Fst {
            arcs: vec![Vec::new(); n],
            finals: vec![false; n],
            initial: self.initial,
        };
        let mut seen = vec![usize::MAX; n];
        let mut stack = Vec::new();
        for s in 0..n {
            // epsilon closure of s
            stack.push(s as StateId);
            seen[s] = s;
            while let Some(q) = stack.pop() {
                if self.finals[q as usize] {
                    out.finals[s] = true;
                }
                for a in &self.arcs[q as usize] {
                    if a.is_double_epsilon() {
                        if seen[a.target as usize] != s {
                            seen[a.target as usize] = s;
                            stack.push(a.target);
                        }
                    } else {
                        out.arcs[s].push(*a);
                    }
                }
            }
        }
        out
    }

    /// Keeps only states that are both accessible and co-accessible.
    fn trimmed(self) -> Fst {
        let n = self.num_states();
        let mut fwd = vec![false; n];
        let mut queue = VecDeque::from([self.initial]);
        fwd[self.initial as usize] = true;
        while let Some(s) = queue.pop_front() {
            for a in &self.arcs[s as usize] {
                if !fwd[a.target as usize] {
                    fwd[a.target as usize] = true;
                    queue.push_back(a.target);
                }
            }
        }
        let mut rev: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for (s, arcs) in self.arcs.iter().enumerate() {
            if fwd[s] {
                for a in arcs {
                    rev[a.target as usize].push(s as StateId);
                }
            }
        }
        let mut bwd = vec![false; n];
        for s in 0..n {
            if fwd[s] && self.finals[s] {
                bwd[s] = true;
                queue.push_back(s as StateId);
            }
        }
        while let Some(s) = queue.pop_front() {
            for &p in &rev[s as usize] {
                if !bwd[p as usize] {
                    bwd[p as usize] = true;
                    queue.push_back(p);
                }
            }
        }
        if !bwd[self.initial as usize] {
            return Fst::empty();
        }
        let keep: Vec<bool> = (0..n).map(|s| fwd[s] && bwd[s]).collect();
        if keep.iter().all(|&k| k) {
            return self;
        }
        let mut remap = vec![StateId::MAX; n];
        // initial state gets id 0
        let mut order = vec![self.initial as usize];
        order.extend((0..n).filter(|&s| keep[s] && s != self.initial as usize));
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new as StateId;
        }
        let mut out = Fst::with_capacity(order.len());
        for &old in &order {
            let s = out.add_state();
            out.finals[s as usize] = self.finals[old];
        }
        for &old in &order {
            let from = remap[old];
            for a in &self.arcs[old] {
                if keep[a.target as usize] {
                    out.arcs[from as usize].push(Arc { target: remap[a.target as usize], ..*a });
                }
            }
        }
        out.initial = 0;
        out
    }

    /// Every `(upper, lower)` string pair of the relation with both sides
    /// of length at most `max_len`, epsilons stripped.
    ///
    /// Requires the absence of `epsilon:epsilon` cycles, which holds for
    /// every normalized transducer.
    pub fn relation_up_to(&self, max_len: usize) -> BTreeSet<(Vec<Symbol>, Vec<Symbol>)> {
        let mut out = BTreeSet::new();
        let mut upper = Vec::new();
        let mut lower = Vec::new();
        self.enumerate(self.initial, max_len, &mut upper, &mut lower, &mut out, 0);
        out
    }

    fn enumerate(
        &self,
        state: StateId,
        max_len: usize,
        upper: &mut Vec<Symbol>,
        lower: &mut Vec<Symbol>,
        out: &mut BTreeSet<(Vec<Symbol>, Vec<Symbol>)>,
        eps_depth: usize,
    ) {
        if self.is_final(state) {
            out.insert((upper.clone(), lower.clone()));
        }
        for a in self.arcs(state) {
            let du = !a.input.is_epsilon();
            let dl = !a.output.is_epsilon();
            if (du && upper.len() >= max_len) || (dl && lower.len() >= max_len) {
                continue;
            }
            let depth = if du || dl { 0 } else { eps_depth + 1 };
            if depth > self.num_states() {
                continue;
            }
            if du {
                upper.push(a.input);
            }
            if dl {
                lower.push(a.output);
            }
            self.enumerate(a.target, max_len, upper, lower, out, depth);
            if du {
                upper.pop();
            }
            if dl {
                lower.pop();
            }
        }
    }

    /// True when the string is in the upper language of the relation.
    pub fn accepts(&self, input: &[Symbol]) -> bool {
        let mut current = BTreeSet::from([self.initial]);
        current = self.input_epsilon_closure(current);
        for &sym in input {
            let next: BTreeSet<StateId> = current
                .iter()
                .flat_map(|&s| self.arcs(s).iter().filter(|a| a.input == sym).map(|a| a.target))
                .collect();
            current = self.input_epsilon_closure(next);
            if current.is_empty() {
                return false;
            }
        }
        current.iter().any(|&s| self.is_final(s))
    }

    fn input_epsilon_closure(&self, mut set: BTreeSet<StateId>) -> BTreeSet<StateId> {
        let mut stack: Vec<StateId> = set.iter().copied().collect();
        while let Some(s) = stack.pop() {
            for a in self.arcs(s) {
                if a.input.is_epsilon() && set.insert(a.target) {
                    stack.push(a.target);
                }
            }
        }
        set
    }
}
