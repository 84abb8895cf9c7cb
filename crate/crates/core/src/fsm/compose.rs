use std::collections::{HashMap, VecDeque};

use super::fst::{Arc, Fst, StateId};
use super::symbol::Symbol;

/// Epsilon filter state of the composition.
///
/// `Both` allows any move. After `r` moves alone on an epsilon output the
/// filter is `Left` and `q` may not move alone until a real match; `Right`
/// is the mirror case. A path `x:eps` in `r` followed by `eps:z` in `q` is
/// therefore only produced by the simultaneous move, never by the two
/// single-sided orders.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Filter {
    Both,
    Left,
    Right,
}

type Key = (StateId, StateId, Filter);

struct Product {
    out: Fst,
    index: HashMap<Key, StateId>,
    queue: VecDeque<(Key, StateId)>,
}

impl Product {
    fn state(&mut self, key: Key) -> StateId {
        if let Some(&id) = self.index.get(&key) {
            return id;
        }
        let id = self.out.add_state();
        self.index.insert(key, id);
        self.queue.push_back((key, id));
        id
    }

    fn arc(&mut self, from: StateId, key: Key, input: Symbol, output: Symbol) {
        let to = self.state(key);
        self.out.add_arc(from, Arc::new(input, output, to));
    }
}

/// Relation composition `r .o. q`: pairs `(u, w)` such that `r` maps `u`
/// to some `v` and `q` maps `v` to `w`.
pub fn compose(r: &Fst, q: &Fst) -> Fst {
    let r = r.clone().normalize();
    let q = q.clone().normalize();
    let mut prod = Product {
        out: Fst::with_capacity(r.num_states().max(q.num_states())),
        index: HashMap::new(),
        queue: VecDeque::new(),
    };
    prod.state((r.initial(), q.initial(), Filter::Both));

    while let Some(((p, s, f), from)) = prod.queue.pop_front() {
        prod.out.set_final(from, r.is_final(p) && q.is_final(s));
        // arcs are sorted by input, epsilon first
        let q_arcs = q.arcs(s);
        let q_eps = || q_arcs.iter().take_while(|b| b.input.is_epsilon());
        for a in r.arcs(p) {
            if a.output.is_epsilon() {
                if f != Filter::Right {
                    prod.arc(from, (a.target, s, Filter::Left), a.input, Symbol::Epsilon);
                }
                if f == Filter::Both {
                    for b in q_eps() {
                        prod.arc(from, (a.target, b.target, Filter::Both), a.input, b.output);
                    }
                }
                continue;
            }
            let lo = q_arcs.partition_point(|b| b.input < a.output);
            for b in q_arcs[lo..].iter().take_while(|b| b.input == a.output) {
                prod.arc(from, (a.target, b.target, Filter::Both), a.input, b.output);
            }
        }
        if f != Filter::Left {
            for b in q_eps() {
                prod.arc(from, (p, b.target, Filter::Right), Symbol::Epsilon, b.output);
            }
        }
    }
    prod.out.normalize()
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::fsm::ops::identity;
    use crate::fsm::symbol::ClassId;

    fn s(i: u32) -> Symbol {
        Symbol::Class(ClassId(i))
    }

    #[test]
    fn chains_through_middle_symbol() {
        let r = Fst::from_pairs([(s(0), s(1))]);
        let q = Fst::from_pairs([(s(1), s(2))]);
        assert_eq!(
            compose(&r, &q).relation_up_to(2),
            BTreeSet::from([(vec![s(0)], vec![s(2)])])
        );
    }

    #[test]
    fn identity_is_neutral() {
        let r = Fst::from_pairs([(s(0), s(1)), (s(2), s(1))]);
        let id = identity(&r.alphabet());
        assert_eq!(compose(&r, &id).relation_up_to(4), r.relation_up_to(4));
        assert_eq!(compose(&id, &r).relation_up_to(4), r.relation_up_to(4));
    }

    #[test]
    fn deleting_relation_drops_marker() {
        let (x, m) = (s(0), s(9));
        // (x:x | m:eps)*
        let mut del = Fst::epsilon();
        del.add_arc(0, Arc::new(x, x, 0));
        del.add_arc(0, Arc::new(m, Symbol::Epsilon, 0));
        let path = Fst::from_string(&[x, m, x]);
        let out = compose(&path, &del);
        assert_eq!(out.relation_up_to(3), BTreeSet::from([(vec![x, m, x], vec![x, x])]));
    }

    #[test]
    fn epsilon_sides_meet_without_duplicate_paths() {
        let (x, z) = (s(0), s(2));
        let r = Fst::from_pairs([(x, Symbol::Epsilon)]);
        let q = Fst::from_pairs([(Symbol::Epsilon, z)]);
        let c = compose(&r, &q);
        assert_eq!(c.relation_up_to(2), BTreeSet::from([(vec![x], vec![z])]));
        // only the simultaneous move survives the filter
        let mut paths = 0;
        let mut stack = vec![c.initial()];
        while let Some(st) = stack.pop() {
            if c.is_final(st) {
                paths += 1;
            }
            stack.extend(c.arcs(st).iter().map(|a| a.target));
        }
        assert_eq!(paths, 1);
    }
}
