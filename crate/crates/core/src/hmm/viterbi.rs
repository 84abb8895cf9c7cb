use crate::fsm::{ClassId, TagId};

use super::barrier::split_at_barriers;
use super::{HmmError, HmmParams, LogProb};

/// Which terms open the product.
///
/// `Whole` and `Initial` start with `pi(t1) b(c1|t1)`. `Middle` scores an
/// extended middle subsequence: its first position follows a barrier whose
/// tag is already fixed, so only `b(c1|t1)` is counted there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Whole,
    Initial,
    Middle,
}

pub fn joint_prob(
    p: &HmmParams,
    classes: &[ClassId],
    tags: &[TagId],
    mode: Mode,
) -> Result<LogProb, HmmError> {
    if classes.len() != tags.len() || classes.is_empty() {
        return Err(HmmError::LengthMismatch { classes: classes.len(), tags: tags.len() });
    }
    let inv = p.inventory();
    if let Some(i) = (0..classes.len()).find(|&i| !inv.contains(classes[i], tags[i])) {
        return Err(HmmError::TagNotInClass { position: i, sentence: None });
    }
    let mut lp = match mode {
        Mode::Middle => 0.0,
        Mode::Whole | Mode::Initial => p.pi(tags[0]),
    };
    lp += p.emit(classes[0], tags[0]);
    for i in 1..classes.len() {
        lp += p.trans(tags[i - 1], tags[i]);
        lp += p.emit(classes[i], tags[i]);
    }
    Ok(lp)
}

/// Log scores closer than this count as equal. Paths that use the same
/// transitions in a different order tie exactly in theory but not after
/// rounding, and the rounding differs between scoring a whole sentence
/// and scoring one of its segments.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// Most probable tag sequence for `classes`.
///
/// Candidates at each position are the members of its class. Equal scores
/// (within [`TIE_TOLERANCE`]) resolve to the lowest `TagId`, both for the
/// final tag and for every backpointer.
pub fn viterbi(p: &HmmParams, classes: &[ClassId], mode: Mode) -> Result<Vec<TagId>, HmmError> {
    if classes.is_empty() {
        return Ok(Vec::new());
    }
    let inv = p.inventory();
    let first = inv.class_tags(classes[0]);
    let mut delta: Vec<LogProb> = first
        .iter()
        .map(|&t| {
            let start = if mode == Mode::Middle { 0.0 } else { p.pi(t) };
            start + p.emit(classes[0], t)
        })
        .collect();
    // back[i][j]: index into class_tags(classes[i-1]) for tag j of classes[i]
    let mut back: Vec<Vec<u32>> = Vec::with_capacity(classes.len() - 1);
    let mut prev_tags = first;
    for &c in &classes[1..] {
        let tags = inv.class_tags(c);
        let mut next = Vec::with_capacity(tags.len());
        let mut ptr = Vec::with_capacity(tags.len());
        for &t in tags {
            let mut best = f64::NEG_INFINITY;
            let mut arg = 0u32;
            for (k, &u) in prev_tags.iter().enumerate() {
                let s = delta[k] + p.trans(u, t);
                if s > best + TIE_TOLERANCE {
                    best = s;
                    arg = k as u32;
                }
            }
            next.push(best + p.emit(c, t));
            ptr.push(arg);
        }
        back.push(ptr);
        delta = next;
        prev_tags = tags;
    }
    let mut best = f64::NEG_INFINITY;
    let mut arg = None;
    for (k, &s) in delta.iter().enumerate() {
        if s > best + TIE_TOLERANCE {
            best = s;
            arg = Some(k);
        }
    }
    let mut k = arg.ok_or(HmmError::NoPath)?;
    let mut out = vec![TagId(0); classes.len()];
    for i in (0..classes.len()).rev() {
        out[i] = inv.class_tags(classes[i])[k];
        if i > 0 {
            k = back[i - 1][k] as usize;
        }
    }
    Ok(out)
}

/// Viterbi decoding one barrier-delimited segment at a time: the initial
/// subsequence in `Initial` mode, then each extended middle in `Middle`
/// mode with its first (shared) tag dropped.
pub fn viterbi_segmented(p: &HmmParams, classes: &[ClassId]) -> Result<Vec<TagId>, HmmError> {
    let split = split_at_barriers(p.inventory(), classes)?;
    let mut tags = viterbi(p, &split.initial, Mode::Initial)?;
    for m in &split.middles {
        tags.extend_from_slice(&viterbi(p, m, Mode::Middle)?[1..]);
    }
    Ok(tags)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hmm::fixtures::toy3;
    use crate::hmm::Inventory;
    use proptest::prelude::*;

    /// Exhaustive argmax. Among scores equal within the tolerance it keeps
    /// the sequence that is smallest when compared from the last position
    /// backwards, which is what lowest-id backpointers produce.
    pub(crate) fn brute_force(p: &HmmParams, classes: &[ClassId], mode: Mode) -> Option<Vec<TagId>> {
        let inv = p.inventory();
        let mut best: Option<(f64, Vec<TagId>)> = None;
        let mut idx = vec![0usize; classes.len()];
        loop {
            let tags: Vec<TagId> = idx.iter().zip(classes).map(|(&k, &c)| inv.class_tags(c)[k]).collect();
            let lp = joint_prob(p, classes, &tags, mode).unwrap();
            let better = match &best {
                None => lp > f64::NEG_INFINITY,
                Some((b, bt)) => {
                    lp > *b + TIE_TOLERANCE
                        || ((lp - *b).abs() <= TIE_TOLERANCE && tags.iter().rev().lt(bt.iter().rev()))
                }
            };
            if better {
                best = Some((lp, tags));
            }
            let mut i = 0;
            loop {
                if i == idx.len() {
                    return best.map(|(_, t)| t);
                }
                idx[i] += 1;
                if idx[i] < inv.class_tags(classes[i]).len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }

    fn ids(p: &HmmParams, names: &[&str]) -> Vec<ClassId> {
        names.iter().map(|n| p.inventory().class_id(n).unwrap()).collect()
    }

    #[test]
    fn joint_prob_terms() {
        let p = toy3();
        let inv = p.inventory();
        let (det, adj) = (inv.tag_id("DET").unwrap(), inv.tag_id("ADJ").unwrap());
        let c = ids(&p, &["[DET]", "[ADJ,NOUN]"]);
        let want = 0.5f64.ln() + 1.0f64.ln() + 0.45f64.ln() + 1.0f64.ln();
        let got = joint_prob(&p, &c, &[det, adj], Mode::Whole).unwrap();
        assert!((got - want).abs() < 1e-12);
        let mid = joint_prob(&p, &c[..1], &[det], Mode::Middle).unwrap();
        assert_eq!(mid, 0.0);
        assert!(matches!(
            joint_prob(&p, &c, &[det], Mode::Whole),
            Err(HmmError::LengthMismatch { .. })
        ));
        assert!(matches!(
            joint_prob(&p, &c, &[adj, adj], Mode::Whole),
            Err(HmmError::TagNotInClass { position: 0, .. })
        ));
    }

    #[test]
    fn toy3_matches_enumeration() {
        let p = toy3();
        for names in [
            vec!["[DET]", "[ADJ,NOUN]", "[NOUN]"],
            vec!["[DET]", "[ADJ,NOUN]", "[DET]"],
            vec!["[DET]", "[ADJ,NOUN]", "[ADJ,NOUN]", "[NOUN]"],
        ] {
            let c = ids(&p, &names);
            for mode in [Mode::Whole, Mode::Middle] {
                assert_eq!(viterbi(&p, &c, mode).ok(), brute_force(&p, &c, mode), "{names:?} {mode:?}");
            }
        }
    }

    #[test]
    fn forced_on_unambiguous_input() {
        let p = toy3();
        let c = ids(&p, &["[DET]", "[NOUN]", "[NOUN]"]);
        let names: Vec<&str> = viterbi(&p, &c, Mode::Whole).unwrap().iter().map(|&t| p.inventory().tag(t)).collect();
        assert_eq!(names, ["DET", "NOUN", "NOUN"]);
    }

    #[test]
    fn zero_probability_is_no_path() {
        let mut inv = Inventory::new();
        let a = inv.add_tag("A").unwrap();
        let b = inv.add_tag("B").unwrap();
        let ca = inv.intern_class(&[a]).unwrap();
        let cb = inv.intern_class(&[b]).unwrap();
        // A never follows A
        let p = HmmParams::new(inv, vec![0.0, f64::NEG_INFINITY], vec![f64::NEG_INFINITY, 0.0, 0.0, f64::NEG_INFINITY], vec![0.0, f64::NEG_INFINITY, f64::NEG_INFINITY, 0.0], cb)
            .unwrap();
        assert!(matches!(viterbi(&p, &[ca, ca], Mode::Whole), Err(HmmError::NoPath)));
        assert_eq!(viterbi(&p, &[ca, cb], Mode::Whole).unwrap(), vec![a, b]);
    }

    proptest! {
        #[test]
        fn matches_brute_force_on_random_models(
            seed in any::<u64>(),
            raw in proptest::collection::vec(0usize..64, 1..6),
            middle in any::<bool>(),
        ) {
            let p = crate::eval::random_params(seed, 4, 3);
            let classes: Vec<ClassId> = raw.iter().map(|&r| ClassId((r % p.num_classes()) as u32)).collect();
            let mode = if middle { Mode::Middle } else { Mode::Whole };
            let got = viterbi(&p, &classes, mode).ok();
            prop_assert_eq!(got.clone(), brute_force(&p, &classes, mode));
            if let Some(tags) = got {
                for (t, c) in tags.iter().zip(&classes) {
                    prop_assert!(p.inventory().contains(*c, *t));
                }
            }
        }
    }
}
