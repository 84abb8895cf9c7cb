//! Class subsequences between barriers and their Viterbi taggings.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use crate::fsm::{ClassId, Symbol, TagId};
use crate::hmm::{split_at_barriers, viterbi, BarrierSplit, HmmParams, Inventory, Mode};

use super::STypeError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    /// `c_a* c_u`: from sentence start to the first unambiguous class.
    Initial,
    /// `c_u c_a* c_u`: an extended middle, opening with the barrier it
    /// follows.
    Middle,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassSubsequence {
    pub kind: Kind,
    pub classes: Vec<ClassId>,
    pub frequency: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairedSubsequence {
    pub kind: Kind,
    pub classes: Vec<ClassId>,
    pub tags: Vec<TagId>,
    /// The first position is the extension and carries marked symbols.
    pub marked: bool,
}

impl PairedSubsequence {
    pub fn upper(&self) -> Vec<Symbol> {
        let mut out: Vec<Symbol> = self.classes.iter().map(|&c| Symbol::Class(c)).collect();
        if self.marked {
            out[0] = Symbol::MarkedClass(self.classes[0]);
        }
        out
    }

    pub fn lower(&self) -> Vec<Symbol> {
        let mut out: Vec<Symbol> = self.tags.iter().map(|&t| Symbol::Tag(t)).collect();
        if self.marked {
            out[0] = Symbol::MarkedTag(self.tags[0]);
        }
        out
    }
}

/// Retained initial and extended middle subsequences, each sorted by
/// class sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SubsequenceSet {
    pub initials: Vec<ClassSubsequence>,
    pub middles: Vec<ClassSubsequence>,
}

impl SubsequenceSet {
    pub fn len(&self) -> usize {
        self.initials.len() + self.middles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, kind: Kind, classes: &[ClassId]) -> bool {
        let pool = match kind {
            Kind::Initial => &self.initials,
            Kind::Middle => &self.middles,
        };
        pool.binary_search_by(|s| s.classes.as_slice().cmp(classes)).is_ok()
    }

    /// Whether each piece of `split` is retained: the initial first, then
    /// every middle.
    pub fn coverage(&self, split: &BarrierSplit) -> Vec<bool> {
        std::iter::once(self.contains(Kind::Initial, &split.initial))
            .chain(split.middles.iter().map(|m| self.contains(Kind::Middle, m)))
            .collect()
    }
}

fn pool(counts: BTreeMap<Vec<ClassId>, usize>, kind: Kind, threshold: usize) -> Vec<ClassSubsequence> {
    counts
        .into_iter()
        .filter(|&(_, f)| f >= threshold)
        .map(|(classes, frequency)| ClassSubsequence { kind, classes, frequency })
        .collect()
}

/// Collects the initial and extended middle subsequences of every
/// sentence, keeping those seen at least `threshold` times. The two
/// kinds are counted and thresholded separately.
pub fn extract_subsequences<S: AsRef<[ClassId]>>(
    inv: &Inventory,
    sentences: &[S],
    threshold: usize,
) -> Result<SubsequenceSet, STypeError> {
    let mut initials: BTreeMap<Vec<ClassId>, usize> = BTreeMap::new();
    let mut middles: BTreeMap<Vec<ClassId>, usize> = BTreeMap::new();
    for (i, s) in sentences.iter().enumerate() {
        let split = split_at_barriers(inv, s.as_ref()).map_err(|_| STypeError::NoTerminalBarrier { sentence: i })?;
        *initials.entry(split.initial).or_default() += 1;
        for m in split.middles {
            *middles.entry(m).or_default() += 1;
        }
    }
    Ok(SubsequenceSet {
        initials: pool(initials, Kind::Initial, threshold.max(1)),
        middles: pool(middles, Kind::Middle, threshold.max(1)),
    })
}

/// Every `c_a^j c_u` and `c_u c_a^j c_u` with `j + 1 <= max_len`.
pub fn enumerate_subsequences(inv: &Inventory, max_len: usize) -> SubsequenceSet {
    let amb: Vec<ClassId> = inv.ambiguous_classes().collect();
    let unamb: Vec<ClassId> = inv.unambiguous_classes().collect();
    let mut runs: Vec<Vec<ClassId>> = vec![Vec::new()];
    let mut all_runs = Vec::new();
    for _ in 0..max_len {
        all_runs.extend(runs.iter().cloned());
        runs = runs
            .iter()
            .flat_map(|r| amb.iter().map(move |&c| [r.as_slice(), &[c]].concat()))
            .collect();
    }
    let mut initials = Vec::new();
    let mut middles = Vec::new();
    for run in &all_runs {
        for &u in &unamb {
            initials.push([run.as_slice(), &[u]].concat());
            for &v in &unamb {
                middles.push([&[v], run.as_slice(), &[u]].concat());
            }
        }
    }
    initials.sort();
    middles.sort();
    let wrap = |kind, v: Vec<Vec<ClassId>>| {
        v.into_iter().map(|classes| ClassSubsequence { kind, classes, frequency: 1 }).collect()
    };
    SubsequenceSet { initials: wrap(Kind::Initial, initials), middles: wrap(Kind::Middle, middles) }
}

/// Tags a subsequence with the Viterbi path: `pi`-initial scoring for
/// initials, barrier-conditioned scoring for middles.
pub fn disambiguate(p: &HmmParams, sub: &ClassSubsequence) -> Result<PairedSubsequence, STypeError> {
    let mode = match sub.kind {
        Kind::Initial => Mode::Initial,
        Kind::Middle => Mode::Middle,
    };
    let tags = viterbi(p, &sub.classes, mode).map_err(|_| STypeError::NoPath(sub.classes.clone()))?;
    Ok(PairedSubsequence { kind: sub.kind, classes: sub.classes.clone(), tags, marked: false })
}

pub fn mark_extension(sub: &PairedSubsequence) -> Result<PairedSubsequence, STypeError> {
    if sub.kind != Kind::Middle || sub.marked || sub.classes.len() < 2 {
        return Err(STypeError::WrongKind);
    }
    Ok(PairedSubsequence { marked: true, ..sub.clone() })
}

/// Disambiguates a whole set, marking the middles.
pub fn disambiguate_all(
    p: &HmmParams,
    set: &SubsequenceSet,
) -> Result<(Vec<PairedSubsequence>, Vec<PairedSubsequence>), STypeError> {
    let initials = set.initials.iter().map(|s| disambiguate(p, s)).collect::<Result<Vec<_>, _>>()?;
    let middles = set
        .middles
        .iter()
        .map(|s| mark_extension(&disambiguate(p, s)?))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((initials, middles))
}

/// One line per subsequence: `I c1 c2 ... | t1 t2 ...` or `M ...`.
pub fn write_subsequences<'a>(
    inv: &Inventory,
    subs: impl IntoIterator<Item = &'a PairedSubsequence>,
    mut w: impl Write,
) -> std::io::Result<()> {
    for s in subs {
        let kind = match s.kind {
            Kind::Initial => "I",
            Kind::Middle => "M",
        };
        let classes: Vec<&str> = s.classes.iter().map(|&c| inv.class(c).name.as_str()).collect();
        let tags: Vec<&str> = s.tags.iter().map(|&t| inv.tag(t)).collect();
        writeln!(w, "{kind} {} | {}", classes.join(" "), tags.join(" "))?;
    }
    Ok(())
}

/// Reads the dump format back; middles come back marked.
pub fn read_subsequences(inv: &Inventory, r: impl BufRead) -> Result<Vec<PairedSubsequence>, STypeError> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line.map_err(|e| STypeError::Parse { line: i + 1, msg: e.to_string() })?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: String| STypeError::Parse { line: i + 1, msg };
        let (head, tags) = line.split_once('|').ok_or_else(|| bad("missing '|'".into()))?;
        let mut head = head.split_whitespace();
        let kind = match head.next() {
            Some("I") => Kind::Initial,
            Some("M") => Kind::Middle,
            other => return Err(bad(format!("bad kind {other:?}"))),
        };
        let classes = head
            .map(|n| inv.class_id(n).ok_or_else(|| bad(format!("unknown class {n}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let tags = tags
            .split_whitespace()
            .map(|n| inv.tag_id(n).ok_or_else(|| bad(format!("unknown tag {n}"))))
            .collect::<Result<Vec<_>, _>>()?;
        if classes.is_empty() || classes.len() != tags.len() {
            return Err(bad("class and tag counts differ".into()));
        }
        out.push(PairedSubsequence { kind, classes, tags, marked: kind == Kind::Middle });
    }
    Ok(out)
}
