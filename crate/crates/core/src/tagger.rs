//! Tagging pre-tokenized text: word to class by lexicon, suffix guesser
//! or the unknown class, then class sequence to tag sequence one sentence
//! at a time.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use thiserror::Error;

use crate::fsm::{ClassId, Fst, FstError, Symbol, TagId};
use crate::hmm::{viterbi, HmmParams, Inventory, Mode};

#[derive(Debug, Error)]
pub enum TagError {
    #[error("sentence {sentence}: no tagging for the class sequence (position {position})")]
    NoPath { sentence: usize, position: usize },
    #[error("sentence {sentence}: {source}")]
    Model { sentence: usize, source: FstError },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Word form to class.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: HashMap<String, ClassId>,
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an entry; a word keeps the class it was first given.
    pub fn insert(&mut self, word: &str, class: ClassId) {
        self.entries.entry(word.to_string()).or_insert(class);
    }

    pub fn get(&self, word: &str) -> Option<ClassId> {
        self.entries.get(word).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, ClassId)> {
        self.entries.iter().map(|(w, &c)| (w.as_str(), c))
    }

    /// `word<TAB>class-name` lines, sorted by word.
    pub fn write(&self, inv: &Inventory, mut w: impl Write) -> std::io::Result<()> {
        let mut entries: Vec<_> = self.iter().collect();
        entries.sort_unstable();
        for (word, c) in entries {
            writeln!(w, "{word}\t{}", inv.class(c).name)?;
        }
        Ok(())
    }

    pub fn read(inv: &Inventory, r: impl BufRead) -> Result<Self, TagError> {
        let mut lex = Lexicon::new();
        for (key, c) in read_mapping(inv, r)? {
            lex.insert(&key, c);
        }
        Ok(lex)
    }
}

fn read_mapping(inv: &Inventory, r: impl BufRead) -> Result<Vec<(String, ClassId)>, TagError> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let bad = |msg: String| TagError::Parse { line: i + 1, msg };
        let (key, class) = line.split_once('\t').ok_or_else(|| bad("expected key<TAB>class".into()))?;
        let c = inv.class_id(class.trim()).ok_or_else(|| bad(format!("unknown class {class}")))?;
        out.push((key.to_string(), c));
    }
    Ok(out)
}

/// Longest-suffix class guesser.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Guesser {
    max_len: usize,
    suffixes: HashMap<String, ClassId>,
}

impl Default for Guesser {
    fn default() -> Self {
        Guesser { max_len: Self::MAX_SUFFIX, suffixes: HashMap::new() }
    }
}

impl Guesser {
    pub const MAX_SUFFIX: usize = 5;
    pub const MIN_SUPPORT: usize = 2;

    /// Keeps the proper suffixes of up to `max_len` characters that occur
    /// in at least `min_support` lexicon words, all of one class.
    pub fn compile(lex: &Lexicon, max_len: usize, min_support: usize) -> Self {
        let mut seen: HashMap<&str, (Option<ClassId>, usize)> = HashMap::new();
        for (word, c) in lex.iter() {
            let starts: Vec<usize> = word.char_indices().map(|(i, _)| i).skip(1).collect();
            for &start in starts.iter().rev().take(max_len) {
                let e = seen.entry(&word[start..]).or_insert((Some(c), 0));
                if e.0 != Some(c) {
                    e.0 = None;
                }
                e.1 += 1;
            }
        }
        let suffixes = seen
            .into_iter()
            .filter_map(|(s, (c, n))| c.filter(|_| n >= min_support).map(|c| (s.to_string(), c)))
            .collect();
        Guesser { max_len, suffixes }
    }

    pub fn guess(&self, word: &str) -> Option<ClassId> {
        let starts: Vec<usize> = word.char_indices().map(|(i, _)| i).collect();
        starts
            .iter()
            .rev()
            .take(self.max_len)
            .rev()
            .find_map(|&start| self.suffixes.get(&word[start..]).copied())
    }

    pub fn len(&self) -> usize {
        self.suffixes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.suffixes.is_empty()
    }

    /// `suffix<TAB>class-name` lines, longest suffixes first.
    pub fn write(&self, inv: &Inventory, mut w: impl Write) -> std::io::Result<()> {
        let mut entries: Vec<_> = self.suffixes.iter().collect();
        entries.sort_unstable_by(|a, b| b.0.chars().count().cmp(&a.0.chars().count()).then(a.0.cmp(b.0)));
        for (s, &c) in entries {
            writeln!(w, "{s}\t{}", inv.class(c).name)?;
        }
        Ok(())
    }

    pub fn read(inv: &Inventory, r: impl BufRead) -> Result<Self, TagError> {
        let suffixes: HashMap<String, ClassId> = read_mapping(inv, r)?.into_iter().collect();
        let max_len = suffixes.keys().map(|s| s.chars().count()).max().unwrap_or(0).max(1);
        Ok(Guesser { max_len, suffixes })
    }
}

/// Lexicon hit, else guesser hit, else `unknown`.
pub fn classify(lex: &Lexicon, guesser: &Guesser, unknown: ClassId, word: &str) -> ClassId {
    lex.get(word).or_else(|| guesser.guess(word)).unwrap_or(unknown)
}

/// Maps a class sequence to a tag sequence.
pub trait ClassTagger {
    fn tag_classes(&self, classes: &[ClassId]) -> Result<Vec<TagId>, FstError>;
}

/// Exact Viterbi decoding.
pub struct HmmTagger<'a> {
    params: &'a HmmParams,
}

impl<'a> HmmTagger<'a> {
    pub fn new(params: &'a HmmParams) -> Self {
        HmmTagger { params }
    }
}

impl ClassTagger for HmmTagger<'_> {
    fn tag_classes(&self, classes: &[ClassId]) -> Result<Vec<TagId>, FstError> {
        viterbi(self.params, classes, Mode::Whole).map_err(|_| FstError::NoPath { position: 0 })
    }
}

const NO_ARC: u32 = u32::MAX;

/// Runs a transducer built by this crate.
///
/// An input-deterministic transducer whose arcs are all `class:tag` is
/// compiled into a dense `state x class` table; anything else goes through
/// [`Fst::apply`].
pub struct FstTagger {
    fst: Fst,
    deterministic: bool,
    table: Option<DenseTable>,
}

struct DenseTable {
    classes: usize,
    /// `(target, tag)` per `state * classes + class`.
    cells: Vec<(u32, u32)>,
    finals: Vec<bool>,
    initial: u32,
}

impl DenseTable {
    fn compile(fst: &Fst) -> Option<Self> {
        let mut classes = 0;
        for s in fst.states() {
            for a in fst.arcs(s) {
                match (a.input, a.output) {
                    (Symbol::Class(c), Symbol::Tag(_)) => classes = classes.max(c.index() + 1),
                    _ => return None,
                }
            }
        }
        let mut cells = vec![(NO_ARC, NO_ARC); fst.num_states() * classes];
        for s in fst.states() {
            for a in fst.arcs(s) {
                if let (Symbol::Class(c), Symbol::Tag(t)) = (a.input, a.output) {
                    cells[s as usize * classes + c.index()] = (a.target, t.0);
                }
            }
        }
        Some(DenseTable {
            classes,
            cells,
            finals: fst.states().map(|s| fst.is_final(s)).collect(),
            initial: fst.initial(),
        })
    }

    fn run(&self, input: &[ClassId], out: &mut Vec<TagId>) -> Result<(), FstError> {
        let mut state = self.initial;
        for (pos, c) in input.iter().enumerate() {
            let cell = if c.index() < self.classes {
                self.cells[state as usize * self.classes + c.index()]
            } else {
                (NO_ARC, NO_ARC)
            };
            if cell.0 == NO_ARC {
                return Err(FstError::NoPath { position: pos });
            }
            out.push(TagId(cell.1));
            state = cell.0;
        }
        if self.finals[state as usize] {
            Ok(())
        } else {
            Err(FstError::NoPath { position: input.len() })
        }
    }
}

impl FstTagger {
    pub fn new(fst: Fst) -> Self {
        let deterministic = fst.is_input_deterministic();
        let table = if deterministic { DenseTable::compile(&fst) } else { None };
        FstTagger { fst, deterministic, table }
    }

    pub fn fst(&self) -> &Fst {
        &self.fst
    }

    pub fn is_compiled(&self) -> bool {
        self.table.is_some()
    }
}

impl ClassTagger for FstTagger {
    fn tag_classes(&self, classes: &[ClassId]) -> Result<Vec<TagId>, FstError> {
        if let Some(table) = &self.table {
            let mut out = Vec::with_capacity(classes.len());
            table.run(classes, &mut out)?;
            return Ok(out);
        }
        let input: Vec<Symbol> = classes.iter().map(|&c| Symbol::Class(c)).collect();
        let (out, _) = if self.deterministic {
            self.fst.apply_deterministic(&input)?
        } else {
            self.fst.apply_search(&input)?
        };
        let tags: Vec<TagId> = out
            .into_iter()
            .filter_map(|s| match s {
                Symbol::Tag(t) => Some(t),
                _ => None,
            })
            .collect();
        if tags.len() != classes.len() {
            return Err(FstError::MalformedAlphabet("model output is not one tag per class".into()));
        }
        Ok(tags)
    }
}

/// Tags one sentence, pairing each word with its tag.
pub fn tag_sentence<'w>(
    tagger: &dyn ClassTagger,
    classes: &[ClassId],
    words: &'w [String],
) -> Result<Vec<(&'w str, TagId)>, FstError> {
    let tags = tagger.tag_classes(classes)?;
    Ok(words.iter().map(String::as_str).zip(tags).collect())
}

/// Everything `tag_stream` needs besides the input and output.
pub struct StreamTagger<'a> {
    pub tagger: &'a dyn ClassTagger,
    pub inventory: &'a Inventory,
    pub lexicon: &'a Lexicon,
    pub guesser: &'a Guesser,
    pub unknown: ClassId,
    pub sentence_end: ClassId,
    pub show_classes: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StreamStats {
    pub sentences: usize,
    pub tokens: usize,
    pub unknown: usize,
    /// Trailing sentences closed without a sentence-end token.
    pub unterminated: usize,
}

impl StreamTagger<'_> {
    /// Reads one token per line (first tab-separated field), tags each
    /// sentence once its sentence-end token arrives and writes
    /// `word<TAB>tag` lines with a blank line after every sentence.
    pub fn tag_stream(&self, r: impl BufRead, mut w: impl Write) -> Result<StreamStats, TagError> {
        let mut stats = StreamStats::default();
        let mut words: Vec<String> = Vec::new();
        let mut classes: Vec<ClassId> = Vec::new();
        for line in r.lines() {
            let line = line?;
            let word = line.split('\t').next().unwrap_or("").trim();
            if word.is_empty() {
                continue;
            }
            let c = match self.lexicon.get(word).or_else(|| self.guesser.guess(word)) {
                Some(c) => c,
                None => {
                    stats.unknown += 1;
                    self.unknown
                }
            };
            words.push(word.to_string());
            classes.push(c);
            if c == self.sentence_end {
                self.flush(&words, &classes, &mut w, &mut stats)?;
                words.clear();
                classes.clear();
            }
        }
        if !words.is_empty() {
            classes.push(self.sentence_end);
            self.flush(&words, &classes, &mut w, &mut stats)?;
            stats.unterminated += 1;
        }
        Ok(stats)
    }

    fn flush(
        &self,
        words: &[String],
        classes: &[ClassId],
        w: &mut impl Write,
        stats: &mut StreamStats,
    ) -> Result<(), TagError> {
        let sentence = stats.sentences;
        let tags = self.tagger.tag_classes(classes).map_err(|e| match e {
            FstError::NoPath { position } => TagError::NoPath { sentence, position },
            source => TagError::Model { sentence, source },
        })?;
        for ((word, &c), &t) in words.iter().zip(classes).zip(&tags) {
            if self.show_classes {
                writeln!(w, "{word}\t{}\t{}", self.inventory.class(c).name, self.inventory.tag(t))?;
            } else {
                writeln!(w, "{word}\t{}", self.inventory.tag(t))?;
            }
        }
        writeln!(w)?;
        stats.sentences += 1;
        stats.tokens += words.len();
        Ok(())
    }
}
