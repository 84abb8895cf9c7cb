//! Token-per-line corpora.
//!
//! Each non-blank line holds a word and optionally its class and its tag,
//! separated by tabs: `word`, `word<TAB>tag`, `word<TAB>class` or
//! `word<TAB>class<TAB>tag`. Class names are recognized by their leading
//! `[`. A blank line ends a sentence.

use std::io::{BufRead, Write};

use thiserror::Error;

use crate::fsm::{ClassId, TagId};
use crate::hmm::Inventory;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("sentence {sentence}, token {token}: {msg}")]
    Resolve { sentence: usize, token: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A token as read from a file, before name resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawToken {
    pub word: String,
    pub class: Option<String>,
    pub tag: Option<String>,
}

/// A word with its ambiguity class and gold tag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaggedToken {
    pub word: String,
    pub class: ClassId,
    pub tag: TagId,
}

pub type TaggedSentence = Vec<TaggedToken>;

pub fn read_raw(r: impl BufRead) -> Result<Vec<Vec<RawToken>>, CorpusError> {
    let mut sentences = Vec::new();
    let mut current = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches(['\r', '\n']);
        if line.trim().is_empty() {
            if !current.is_empty() {
                sentences.push(std::mem::take(&mut current));
            }
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let err = |msg: &str| CorpusError::Format { line: i + 1, msg: msg.to_string() };
        let word = fields[0].to_string();
        if word.is_empty() {
            return Err(err("empty word"));
        }
        let (class, tag) = match &fields[1..] {
            [] => (None, None),
            [x] if x.starts_with('[') => (Some(x.to_string()), None),
            [x] => (None, Some(x.to_string())),
            [c, t] if c.starts_with('[') => (Some(c.to_string()), Some(t.to_string())),
            _ => return Err(err("expected word[\\tclass][\\ttag]")),
        };
        current.push(RawToken { word, class, tag });
    }
    if !current.is_empty() {
        sentences.push(current);
    }
    Ok(sentences)
}

/// Resolves fully annotated tokens against an inventory.
pub fn resolve_tagged(
    inventory: &Inventory,
    raw: &[Vec<RawToken>],
) -> Result<Vec<TaggedSentence>, CorpusError> {
    raw.iter()
        .enumerate()
        .map(|(si, sentence)| {
            sentence
                .iter()
                .enumerate()
                .map(|(ti, tok)| {
                    let err = |msg: String| CorpusError::Resolve { sentence: si, token: ti, msg };
                    let class_name = tok.class.as_deref().ok_or_else(|| err("missing class".into()))?;
                    let tag_name = tok.tag.as_deref().ok_or_else(|| err("missing tag".into()))?;
                    let class = inventory
                        .class_id(class_name)
                        .ok_or_else(|| err(format!("unknown class {class_name}")))?;
                    let tag = inventory
                        .tag_id(tag_name)
                        .ok_or_else(|| err(format!("unknown tag {tag_name}")))?;
                    Ok(TaggedToken { word: tok.word.clone(), class, tag })
                })
                .collect()
        })
        .collect()
}

pub fn read_tagged(inventory: &Inventory, r: impl BufRead) -> Result<Vec<TaggedSentence>, CorpusError> {
    resolve_tagged(inventory, &read_raw(r)?)
}

/// Writes `word<TAB>class<TAB>tag` lines with a blank line after each sentence.
pub fn write_tagged(
    inventory: &Inventory,
    corpus: &[TaggedSentence],
    mut w: impl Write,
) -> std::io::Result<()> {
    for sentence in corpus {
        for tok in sentence {
            writeln!(w, "{}\t{}\t{}", tok.word, inventory.class(tok.class).name, inventory.tag(tok.tag))?;
        }
        writeln!(w)?;
    }
    Ok(())
}

pub fn class_sequence(sentence: &[TaggedToken]) -> Vec<ClassId> {
    sentence.iter().map(|t| t.class).collect()
}

pub fn tag_sequence(sentence: &[TaggedToken]) -> Vec<TagId> {
    sentence.iter().map(|t| t.tag).collect()
}

pub fn num_tokens(corpus: &[TaggedSentence]) -> usize {
    corpus.iter().map(Vec::len).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hmm::fixtures::{toy3, TOY3_CORPUS};

    #[test]
    fn reads_columns_and_sentence_breaks() {
        let raw = read_raw("The\n\nshare\t[NN,VB]\nof\tIN\nx\t[A]\tA\n".as_bytes()).unwrap();
        assert_eq!(raw.len(), 2);
        assert_eq!(raw[0][0], RawToken { word: "The".into(), class: None, tag: None });
        assert_eq!(raw[1][0].class.as_deref(), Some("[NN,VB]"));
        assert_eq!(raw[1][1].tag.as_deref(), Some("IN"));
        assert_eq!(raw[1][2].class.as_deref(), Some("[A]"));
        assert_eq!(raw[1][2].tag.as_deref(), Some("A"));
    }

    #[test]
    fn toy_corpus_round_trips() {
        let p = toy3();
        let corpus = read_tagged(p.inventory(), TOY3_CORPUS.as_bytes()).unwrap();
        assert_eq!(corpus.len(), 4);
        let mut buf = Vec::new();
        write_tagged(p.inventory(), &corpus, &mut buf).unwrap();
        assert_eq!(read_tagged(p.inventory(), buf.as_slice()).unwrap(), corpus);
    }
}
