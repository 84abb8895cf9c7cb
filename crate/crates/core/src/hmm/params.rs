use std::io::{BufRead, Write};

use crate::fsm::{ClassId, TagId};

use super::inventory::Inventory;
use super::HmmError;

/// Natural-log probability. `f64::NEG_INFINITY` is the zero probability.
pub type LogProb = f64;

const NORM_TOLERANCE: f64 = 1e-9;

/// First-order HMM over tags emitting ambiguity classes.
///
/// `pi[t]`, `a(prev, t)` and `b(c | t)` are stored in the log domain;
/// `b` is normalized per tag over classes and is `-inf` whenever the tag is
/// not a member of the class.
#[derive(Clone, Debug, PartialEq)]
pub struct HmmParams {
    inventory: Inventory,
    pi: Vec<LogProb>,
    trans: Vec<LogProb>,
    emit: Vec<LogProb>,
    sentence_end: ClassId,
}

impl HmmParams {
    /// Validates and wraps log-probability tables.
    ///
    /// `trans` is row-major `[prev][tag]`; `emit` is row-major `[class][tag]`.
    pub fn new(
        inventory: Inventory,
        pi: Vec<LogProb>,
        trans: Vec<LogProb>,
        emit: Vec<LogProb>,
        sentence_end: ClassId,
    ) -> Result<Self, HmmError> {
        let params = HmmParams { inventory, pi, trans, emit, sentence_end };
        params.validate()?;
        Ok(params)
    }

    fn validate(&self) -> Result<(), HmmError> {
        let inv = &self.inventory;
        let (n, k) = (inv.num_tags(), inv.num_classes());
        let invalid = |m: String| Err(HmmError::Invalid(m));
        if n == 0 || k == 0 {
            return invalid("empty tag or class inventory".into());
        }
        if self.pi.len() != n || self.trans.len() != n * n || self.emit.len() != k * n {
            return invalid("table sizes do not match the inventory".into());
        }
        let all = self.pi.iter().chain(&self.trans).chain(&self.emit);
        if all.into_iter().any(|&v| v.is_nan() || v > 1e-12) {
            return invalid("log-probabilities must be <= 0 and not NaN".into());
        }
        let sums_to_one = |xs: &mut dyn Iterator<Item = LogProb>| {
            let s: f64 = xs.map(f64::exp).sum();
            (s - 1.0).abs() <= NORM_TOLERANCE
        };
        if !sums_to_one(&mut self.pi.iter().copied()) {
            return invalid("initial probabilities do not sum to 1".into());
        }
        for prev in inv.tag_ids() {
            if !sums_to_one(&mut inv.tag_ids().map(|t| self.trans(prev, t))) {
                return invalid(format!("transition row of {} does not sum to 1", inv.tag(prev)));
            }
        }
        for t in inv.tag_ids() {
            if !sums_to_one(&mut inv.class_ids().map(|c| self.emit(c, t))) {
                return invalid(format!("class probabilities of tag {} do not sum to 1", inv.tag(t)));
            }
        }
        for c in inv.class_ids() {
            for t in inv.tag_ids() {
                if !inv.contains(c, t) && self.emit(c, t) != f64::NEG_INFINITY {
                    return invalid(format!(
                        "b({}|{}) must be zero: tag not in class",
                        inv.class(c).name,
                        inv.tag(t)
                    ));
                }
            }
            if inv.class_tags(c).iter().all(|&t| self.emit(c, t) == f64::NEG_INFINITY) {
                return invalid(format!("class {} has no member with b > 0", inv.class(c).name));
            }
        }
        if self.sentence_end.index() >= k || !inv.is_unambiguous(self.sentence_end) {
            return invalid("sentence-end class must be an unambiguous class".into());
        }
        Ok(())
    }

    pub fn inventory(&self) -> &Inventory {
        &self.inventory
    }

    pub fn sentence_end(&self) -> ClassId {
        self.sentence_end
    }

    pub fn num_tags(&self) -> usize {
        self.inventory.num_tags()
    }

    pub fn num_classes(&self) -> usize {
        self.inventory.num_classes()
    }

    #[inline]
    pub fn pi(&self, t: TagId) -> LogProb {
        self.pi[t.index()]
    }

    #[inline]
    pub fn trans(&self, prev: TagId, t: TagId) -> LogProb {
        self.trans[prev.index() * self.num_tags() + t.index()]
    }

    #[inline]
    pub fn emit(&self, c: ClassId, t: TagId) -> LogProb {
        self.emit[c.index() * self.num_tags() + t.index()]
    }

    /// Writes the line-oriented parameter file.
    pub fn write_to(&self, mut w: impl Write) -> std::io::Result<()> {
        let inv = &self.inventory;
        let tags: Vec<&str> = inv.tag_ids().map(|t| inv.tag(t)).collect();
        writeln!(w, "TAGS {}", tags.join(" "))?;
        for c in inv.class_ids() {
            let class = inv.class(c);
            let members: Vec<&str> = class.tags.iter().map(|&t| inv.tag(t)).collect();
            writeln!(w, "CLASS {} = {}", class.name, members.join(","))?;
        }
        writeln!(w, "SENT_END {}", inv.class(self.sentence_end).name)?;
        for t in inv.tag_ids() {
            write_prob(&mut w, &format!("PI {}", inv.tag(t)), self.pi(t))?;
        }
        for prev in inv.tag_ids() {
            for t in inv.tag_ids() {
                write_prob(&mut w, &format!("A {} {}", inv.tag(prev), inv.tag(t)), self.trans(prev, t))?;
            }
        }
        for c in inv.class_ids() {
            for &t in inv.class_tags(c) {
                write_prob(&mut w, &format!("B {} {}", inv.class(c).name, inv.tag(t)), self.emit(c, t))?;
            }
        }
        Ok(())
    }

    /// Reads and validates a parameter file. Missing `PI`/`A`/`B` entries
    /// are zero probabilities.
    pub fn read_from(r: impl BufRead) -> Result<Self, HmmError> {
        let mut inv = Inventory::new();
        let mut sentence_end = None;
        let mut pi = Vec::new();
        let mut trans = Vec::new();
        let mut emit = Vec::new();
        let mut sized = false;
        for (i, line) in r.lines().enumerate() {
            let lineno = i + 1;
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: String| HmmError::Parse { line: lineno, msg };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let keyword = fields[0];
            if !sized && matches!(keyword, "PI" | "A" | "B") {
                let (n, k) = (inv.num_tags(), inv.num_classes());
                pi = vec![f64::NEG_INFINITY; n];
                trans = vec![f64::NEG_INFINITY; n * n];
                emit = vec![f64::NEG_INFINITY; k * n];
                sized = true;
            }
            let tag = |name: &str| inv.tag_id(name).ok_or_else(|| bad(format!("unknown tag {name}")));
            let class = |name: &str| inv.class_id(name).ok_or_else(|| bad(format!("unknown class {name}")));
            let prob = |s: &str| -> Result<LogProb, HmmError> {
                let p: f64 = s.parse().map_err(|_| bad(format!("bad probability {s}")))?;
                if !(0.0..=1.0 + NORM_TOLERANCE).contains(&p) {
                    return Err(bad(format!("probability out of range: {s}")));
                }
                Ok(p.ln())
            };
            match (keyword, fields.len()) {
                ("TAGS", _) if !sized => {
                    for name in &fields[1..] {
                        inv.add_tag(name).map_err(|e| bad(e.to_string()))?;
                    }
                }
                ("CLASS", 4) if !sized && fields[2] == "=" => {
                    let members = fields[3]
                        .split(',')
                        .map(tag)
                        .collect::<Result<Vec<_>, _>>()?;
                    inv.add_class(fields[1], &members).map_err(|e| bad(e.to_string()))?;
                }
                ("SENT_END", 2) => sentence_end = Some(class(fields[1])?),
                ("PI", 3) => pi[tag(fields[1])?.index()] = prob(fields[2])?,
                ("A", 4) => {
                    let n = inv.num_tags();
                    trans[tag(fields[1])?.index() * n + tag(fields[2])?.index()] = prob(fields[3])?;
                }
                ("B", 4) => {
                    let n = inv.num_tags();
                    emit[class(fields[1])?.index() * n + tag(fields[2])?.index()] = prob(fields[3])?;
                }
                _ => return Err(bad(format!("unexpected line: {line}"))),
            }
        }
        let sentence_end = sentence_end.ok_or_else(|| HmmError::Invalid("missing SENT_END".into()))?;
        HmmParams::new(inv, pi, trans, emit, sentence_end)
    }
}

fn write_prob(w: &mut impl Write, key: &str, lp: LogProb) -> std::io::Result<()> {
    if lp == f64::NEG_INFINITY {
        return Ok(());
    }
    writeln!(w, "{key} {}", lp.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hmm::fixtures::toy3;

    #[test]
    fn file_round_trip_is_lossless() {
        let p = toy3();
        let mut buf = Vec::new();
        p.write_to(&mut buf).unwrap();
        let q = HmmParams::read_from(buf.as_slice()).unwrap();
        assert_eq!(p.inventory(), q.inventory());
        for t in p.inventory().tag_ids() {
            assert!((p.pi(t) - q.pi(t)).abs() < 1e-12);
            for u in p.inventory().tag_ids() {
                assert!((p.trans(t, u) - q.trans(t, u)).abs() < 1e-12);
            }
            for c in p.inventory().class_ids() {
                let (x, y) = (p.emit(c, t), q.emit(c, t));
                assert!(x == y || (x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_unnormalized_rows() {
        let mut buf = Vec::new();
        toy3().write_to(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap().replace("PI DET 0.5", "PI DET 0.6");
        assert!(matches!(HmmParams::read_from(text.as_bytes()), Err(HmmError::Invalid(_))));
    }

    #[test]
    fn rejects_ambiguous_sentence_end() {
        let mut buf = Vec::new();
        toy3().write_to(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap().replace("SENT_END [NOUN]", "SENT_END [ADJ,NOUN]");
        assert!(HmmParams::read_from(text.as_bytes()).is_err());
    }
}
