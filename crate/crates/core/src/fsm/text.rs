//! Line-oriented text dump of a transducer.
//!
//! ```text
//! FST <#states> <#arcs> <initial>
//! F <state>
//! A <src> <in> <out> <dst>
//! ```
//!
//! Symbols are written as `c:[T1,T2]` (class), `mc:[..]` (marked class),
//! `t:TAG`, `mt:TAG`, `p:<in>|<out>` (pair atom) and `_eps_`.

use std::io::{BufRead, Write};

use super::fst::{Arc, Fst, StateId};
use super::symbol::{ClassId, Symbol, TagId};
use super::FstError;

/// Name lookup for the ids inside symbols.
pub trait SymbolNames {
    fn tag_name(&self, tag: TagId) -> &str;
    fn class_name(&self, class: ClassId) -> &str;
    fn tag_by_name(&self, name: &str) -> Option<TagId>;
    fn class_by_name(&self, name: &str) -> Option<ClassId>;
}

pub fn format_symbol(sym: Symbol, names: &impl SymbolNames) -> String {
    match sym {
        Symbol::Pair(u, l) => format!(
            "p:{}|{}",
            format_symbol(u.into(), names),
            format_symbol(l.into(), names)
        ),
        Symbol::Epsilon => "_eps_".to_string(),
        Symbol::Class(c) => format!("c:{}", names.class_name(c)),
        Symbol::MarkedClass(c) => format!("mc:{}", names.class_name(c)),
        Symbol::Tag(t) => format!("t:{}", names.tag_name(t)),
        Symbol::MarkedTag(t) => format!("mt:{}", names.tag_name(t)),
    }
}

pub fn parse_symbol(text: &str, names: &impl SymbolNames) -> Result<Symbol, String> {
    if text == "_eps_" {
        return Ok(Symbol::Epsilon);
    }
    if let Some(rest) = text.strip_prefix("p:") {
        let (u, l) = rest.split_once('|').ok_or_else(|| format!("bad pair atom {text}"))?;
        let u = parse_symbol(u, names)?;
        let l = parse_symbol(l, names)?;
        return Symbol::pair(u, l).ok_or_else(|| format!("bad pair atom {text}"));
    }
    let (kind, name) = text.split_once(':').ok_or_else(|| format!("bad symbol {text}"))?;
    let class = || names.class_by_name(name).ok_or_else(|| format!("unknown class {name}"));
    let tag = || names.tag_by_name(name).ok_or_else(|| format!("unknown tag {name}"));
    Ok(match kind {
        "c" => Symbol::Class(class()?),
        "mc" => Symbol::MarkedClass(class()?),
        "t" => Symbol::Tag(tag()?),
        "mt" => Symbol::MarkedTag(tag()?),
        _ => return Err(format!("bad symbol kind {kind}")),
    })
}

impl Fst {
    pub fn write_text(&self, names: &impl SymbolNames, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "FST {} {} {}", self.num_states(), self.num_arcs(), self.initial())?;
        for s in self.finals() {
            writeln!(w, "F {s}")?;
        }
        for s in self.states() {
            for a in self.arcs(s) {
                writeln!(
                    w,
                    "A {} {} {} {}",
                    s,
                    format_symbol(a.input, names),
                    format_symbol(a.output, names),
                    a.target
                )?;
            }
        }
        Ok(())
    }

    pub fn read_text(names: &impl SymbolNames, r: impl BufRead) -> Result<Fst, FstError> {
        let err = |line: usize, msg: String| FstError::Parse { line, msg };
        let mut fst: Option<Fst> = None;
        let mut expected_arcs = 0;
        for (i, line) in r.lines().enumerate() {
            let lineno = i + 1;
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| -> Result<StateId, FstError> {
                s.parse().map_err(|_| err(lineno, format!("bad number {s}")))
            };
            match (fields[0], fst.as_mut()) {
                ("FST", None) if fields.len() == 4 => {
                    let states = num(fields[1])? as usize;
                    expected_arcs = num(fields[2])? as usize;
                    let initial = num(fields[3])?;
                    if states == 0 || initial as usize >= states {
                        return Err(err(lineno, "initial state out of range".into()));
                    }
                    let mut f = Fst::with_capacity(states);
                    for _ in 0..states {
                        f.add_state();
                    }
                    f.set_initial(initial);
                    fst = Some(f);
                }
                ("F", Some(f)) if fields.len() == 2 => {
                    let s = num(fields[1])?;
                    if s as usize >= f.num_states() {
                        return Err(err(lineno, format!("state {s} out of range")));
                    }
                    f.set_final(s, true);
                }
                ("A", Some(f)) if fields.len() == 5 => {
                    let (src, dst) = (num(fields[1])?, num(fields[4])?);
                    if src as usize >= f.num_states() || dst as usize >= f.num_states() {
                        return Err(err(lineno, "arc state out of range".into()));
                    }
                    let input = parse_symbol(fields[2], names).map_err(|m| err(lineno, m))?;
                    let output = parse_symbol(fields[3], names).map_err(|m| err(lineno, m))?;
                    f.add_arc(src, Arc::new(input, output, dst));
                }
                _ => return Err(err(lineno, format!("unexpected line: {line}"))),
            }
        }
        let mut fst = fst.ok_or_else(|| err(0, "missing FST header".into()))?;
        if fst.num_arcs() != expected_arcs {
            return Err(err(0, format!("expected {expected_arcs} arcs, found {}", fst.num_arcs())));
        }
        fst.sort_arcs();
        Ok(fst)
    }
}

impl std::fmt::Display for Fst {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "FST {} {} {}", self.num_states(), self.num_arcs(), self.initial())?;
        for s in self.finals() {
            writeln!(f, "F {s}")?;
        }
        for s in self.states() {
            for a in self.arcs(s) {
                writeln!(f, "A {} {} {} {}", s, a.input, a.output, a.target)?;
            }
        }
        Ok(())
    }
}
