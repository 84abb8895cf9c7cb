//! Subset construction over label pairs and partition-refinement
//! minimization.

use std::collections::{BTreeMap, HashMap};

use super::fst::{Arc, Fst, StateId};
use super::symbol::Symbol;
use super::FstError;

/// Pair-deterministic equivalent of `a`: each `input:output` label is one
/// atomic symbol, and no state has two arcs with the same label.
pub fn determinize_pairs(a: &Fst) -> Fst {
    // normalized transducers carry no epsilon:epsilon arcs
    let a = a.clone().normalize();
    if is_pair_deterministic(&a) {
        return a;
    }
    let mut out = Fst::with_capacity(a.num_states());
    let mut index: HashMap<Vec<StateId>, StateId> = HashMap::new();
    let mut subsets: Vec<Vec<StateId>> = Vec::new();
    let start = vec![a.initial()];
    index.insert(start.clone(), out.add_state());
    subsets.push(start);
    let mut next = 0;
    let mut moves: BTreeMap<(Symbol, Symbol), Vec<StateId>> = BTreeMap::new();
    while next < subsets.len() {
        let from = next as StateId;
        let subset = subsets[next].clone();
        next += 1;
        out.set_final(from, subset.iter().any(|&s| a.is_final(s)));
        moves.clear();
        for &s in &subset {
            for arc in a.arcs(s) {
                moves.entry(arc.label()).or_default().push(arc.target);
            }
        }
        for (&(i, o), targets) in moves.iter_mut() {
            targets.sort_unstable();
            targets.dedup();
            let to = match index.get(targets.as_slice()) {
                Some(&t) => t,
                None => {
                    let t = out.add_state();
                    index.insert(targets.clone(), t);
                    subsets.push(targets.clone());
                    t
                }
            };
            out.add_arc(from, Arc::new(i, o, to));
        }
    }
    out.normalize()
}

/// True when no state has two arcs with the same label pair and there
/// are no `epsilon:epsilon` arcs.
pub fn is_pair_deterministic(a: &Fst) -> bool {
    first_pair_conflict(a).is_none()
}

fn first_pair_conflict(a: &Fst) -> Option<StateId> {
    a.states().find(|&s| {
        let arcs = a.arcs(s);
        let mut labels: Vec<(Symbol, Symbol)> = arcs.iter().map(Arc::label).collect();
        labels.sort_unstable();
        labels.windows(2).any(|w| w[0] == w[1])
            || labels.iter().any(|&(i, o)| i.is_epsilon() && o.is_epsilon())
    })
}

/// Minimal pair-deterministic equivalent of a pair-deterministic `a`.
pub fn minimize(a: &Fst) -> Result<Fst, FstError> {
    if let Some(state) = first_pair_conflict(a) {
        return Err(FstError::NotDeterministic(state));
    }
    let a = a.clone().normalize();
    let n = a.num_states();
    let mut block: Vec<u32> = a.states().map(|s| u32::from(a.is_final(s))).collect();
    let mut num_blocks = block.iter().collect::<std::collections::HashSet<_>>().len();
    let mut signatures: HashMap<(u32, Vec<(Symbol, Symbol, u32)>), u32> = HashMap::new();
    loop {
        signatures.clear();
        let mut refined = vec![0u32; n];
        for s in a.states() {
            let sig: Vec<(Symbol, Symbol, u32)> = a
                .arcs(s)
                .iter()
                .map(|arc| (arc.input, arc.output, block[arc.target as usize]))
                .collect();
            let len = signatures.len() as u32;
            refined[s as usize] = *signatures.entry((block[s as usize], sig)).or_insert(len);
        }
        let count = signatures.len();
        block = refined;
        if count == num_blocks {
            break;
        }
        num_blocks = count;
    }

    let mut out = Fst::with_capacity(num_blocks);
    // relabel so the initial block comes first
    let mut order = vec![u32::MAX; num_blocks];
    let mut rep = vec![StateId::MAX; num_blocks];
    let mut next = 0u32;
    let mut assign = |b: u32, s: StateId, order: &mut Vec<u32>, rep: &mut Vec<StateId>| {
        if order[b as usize] == u32::MAX {
            order[b as usize] = next;
            rep[next as usize] = s;
            next += 1;
        }
    };
    assign(block[a.initial() as usize], a.initial(), &mut order, &mut rep);
    for s in a.states() {
        assign(block[s as usize], s, &mut order, &mut rep);
    }
    for _ in 0..num_blocks {
        out.add_state();
    }
    for (new, &s) in rep.iter().enumerate() {
        out.set_final(new as StateId, a.is_final(s));
        for arc in a.arcs(s) {
            let t = order[block[arc.target as usize] as usize];
            out.add_arc(new as StateId, Arc { target: t, ..*arc });
        }
    }
    out.set_initial(0);
    Ok(out.normalize())
}

/// Determinize over pairs, then minimize.
pub fn canonical(a: &Fst) -> Fst {
    minimize(&determinize_pairs(a)).expect("determinized transducer is pair-deterministic")
}
