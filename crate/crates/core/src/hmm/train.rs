//! Supervised estimation from a tagged corpus by smoothed relative
//! frequencies.

use std::collections::HashMap;

use crate::corpus::TaggedSentence;
use crate::fsm::ClassId;

use super::{HmmError, HmmParams, Inventory};

/// Additive smoothing constant applied when none is given.
pub const DEFAULT_SMOOTHING: f64 = 0.001;

#[derive(Clone, Copy, Debug)]
pub struct TrainOptions {
    /// Added to every initial, transition and member emission count.
    pub smoothing: f64,
    /// Class given to unknown words. Its emission counts come from the
    /// tokens of words that occur exactly once in the corpus.
    pub unknown_class: Option<ClassId>,
}

impl Default for TrainOptions {
    fn default() -> Self {
        TrainOptions { smoothing: DEFAULT_SMOOTHING, unknown_class: None }
    }
}

pub fn train_from_tagged(
    inventory: Inventory,
    sentence_end: ClassId,
    corpus: &[TaggedSentence],
    opts: TrainOptions,
) -> Result<HmmParams, HmmError> {
    let eps = opts.smoothing;
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(HmmError::Invalid(format!("bad smoothing constant {eps}")));
    }
    let tokens: usize = corpus.iter().map(Vec::len).sum();
    if tokens == 0 && eps == 0.0 {
        return Err(HmmError::EmptyCorpus);
    }
    let n = inventory.num_tags();
    let k = inventory.num_classes();
    let mut pi = vec![0.0; n];
    let mut trans = vec![0.0; n * n];
    let mut emit = vec![0.0; k * n];

    let mut word_freq: HashMap<&str, usize> = HashMap::new();
    for tok in corpus.iter().flatten() {
        *word_freq.entry(tok.word.as_str()).or_default() += 1;
    }
    for (si, sentence) in corpus.iter().enumerate() {
        for (ti, tok) in sentence.iter().enumerate() {
            if !inventory.contains(tok.class, tok.tag) {
                return Err(HmmError::TagNotInClass { position: ti, sentence: Some(si) });
            }
            let t = tok.tag.index();
            if ti == 0 {
                pi[t] += 1.0;
            } else {
                trans[sentence[ti - 1].tag.index() * n + t] += 1.0;
            }
            emit[tok.class.index() * n + t] += 1.0;
            if let Some(unk) = opts.unknown_class {
                if word_freq[tok.word.as_str()] == 1 && inventory.contains(unk, tok.tag) {
                    emit[unk.index() * n + t] += 1.0;
                }
            }
        }
    }

    let pi = normalize(&pi.iter().map(|c| c + eps).collect::<Vec<_>>());
    let mut log_trans = Vec::with_capacity(n * n);
    for row in trans.chunks(n) {
        log_trans.extend(normalize(&row.iter().map(|c| c + eps).collect::<Vec<_>>()));
    }
    let mut log_emit = vec![f64::NEG_INFINITY; k * n];
    for t in inventory.tag_ids() {
        let members: Vec<ClassId> = inventory.class_ids().filter(|&c| inventory.contains(c, t)).collect();
        let counts: Vec<f64> = members.iter().map(|c| emit[c.index() * n + t.index()] + eps).collect();
        for (c, lp) in members.iter().zip(normalize(&counts)) {
            log_emit[c.index() * n + t.index()] = lp;
        }
    }
    HmmParams::new(inventory, pi, log_trans, log_emit, sentence_end)
}

/// Log relative frequencies; an all-zero row becomes uniform.
fn normalize(counts: &[f64]) -> Vec<f64> {
    let total: f64 = counts.iter().sum();
    if total <= 0.0 {
        let u = -(counts.len() as f64).ln();
        return vec![u; counts.len()];
    }
    counts
        .iter()
        .map(|&c| if c > 0.0 { (c / total).ln() } else { f64::NEG_INFINITY })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{read_tagged, TaggedToken};
    use crate::fsm::TagId;
    use crate::hmm::fixtures::{toy3, TOY3_CORPUS};

    fn det_noun_inventory() -> (Inventory, ClassId, ClassId) {
        let mut inv = Inventory::new();
        let det = inv.add_tag("DET").unwrap();
        let noun = inv.add_tag("NOUN").unwrap();
        let cd = inv.intern_class(&[det]).unwrap();
        let cn = inv.intern_class(&[noun]).unwrap();
        (inv, cd, cn)
    }

    #[test]
    fn forced_counts_without_smoothing() {
        let (inv, cd, cn) = det_noun_inventory();
        let corpus = vec![vec![
            TaggedToken { word: "the".into(), class: cd, tag: TagId(0) },
            TaggedToken { word: "dog".into(), class: cn, tag: TagId(1) },
        ]];
        let p = train_from_tagged(inv, cn, &corpus, TrainOptions { smoothing: 0.0, unknown_class: None })
            .unwrap();
        assert_eq!(p.pi(TagId(0)), 0.0);
        assert_eq!(p.trans(TagId(0), TagId(1)), 0.0);
        assert_eq!(p.trans(TagId(0), TagId(0)), f64::NEG_INFINITY);
        // unseen NOUN row falls back to uniform
        assert!((p.trans(TagId(1), TagId(0)) - 0.5f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn prior_only_is_uniform() {
        let mut inv = Inventory::new();
        let tags: Vec<TagId> = ["A", "B", "C"].iter().map(|t| inv.add_tag(t).unwrap()).collect();
        let end = inv.intern_class(&[tags[2]]).unwrap();
        inv.intern_class(&[tags[0]]).unwrap();
        inv.intern_class(&[tags[1]]).unwrap();
        let p = train_from_tagged(inv, end, &[], TrainOptions { smoothing: 1.0, unknown_class: None }).unwrap();
        for t in tags {
            assert!((p.pi(t).exp() - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_corpus_without_smoothing_fails() {
        let (inv, _, cn) = det_noun_inventory();
        let r = train_from_tagged(inv, cn, &[], TrainOptions { smoothing: 0.0, unknown_class: None });
        assert!(matches!(r, Err(HmmError::EmptyCorpus)));
    }

    #[test]
    fn rejects_tag_outside_class() {
        let (inv, cd, cn) = det_noun_inventory();
        let corpus = vec![vec![TaggedToken { word: "x".into(), class: cd, tag: TagId(1) }]];
        let r = train_from_tagged(inv, cn, &corpus, TrainOptions::default());
        assert!(matches!(r, Err(HmmError::TagNotInClass { .. })));
    }

    /// Expected values frozen from an independent exact-fraction count of
    /// fixtures/toy3_corpus.txt with smoothing 0.5.
    #[test]
    fn toy3_corpus_matches_counts() {
        let base = toy3();
        let corpus = read_tagged(base.inventory(), TOY3_CORPUS.as_bytes()).unwrap();
        let p = train_from_tagged(
            base.inventory().clone(),
            base.sentence_end(),
            &corpus,
            TrainOptions { smoothing: 0.5, unknown_class: None },
        )
        .unwrap();
        let inv = p.inventory();
        let t = |n: &str| inv.tag_id(n).unwrap();
        let c = |n: &str| inv.class_id(n).unwrap();
        let close = |lp: f64, want: f64| assert!((lp.exp() - want).abs() < 1e-12, "{} vs {want}", lp.exp());
        close(p.pi(t("DET")), 7.0 / 11.0);
        close(p.pi(t("ADJ")), 3.0 / 11.0);
        close(p.pi(t("NOUN")), 1.0 / 11.0);
        close(p.trans(t("DET"), t("DET")), 1.0 / 9.0);
        close(p.trans(t("DET"), t("ADJ")), 5.0 / 9.0);
        close(p.trans(t("DET"), t("NOUN")), 1.0 / 3.0);
        close(p.trans(t("ADJ"), t("ADJ")), 1.0 / 9.0);
        close(p.trans(t("ADJ"), t("NOUN")), 7.0 / 9.0);
        close(p.trans(t("NOUN"), t("DET")), 1.0 / 7.0);
        close(p.trans(t("NOUN"), t("NOUN")), 5.0 / 7.0);
        close(p.emit(c("[ADJ,NOUN]"), t("NOUN")), 0.5);
        close(p.emit(c("[NOUN]"), t("NOUN")), 0.5);
        close(p.emit(c("[ADJ,NOUN]"), t("ADJ")), 1.0);
        close(p.emit(c("[DET]"), t("DET")), 1.0);
        assert_eq!(p.emit(c("[DET]"), t("NOUN")), f64::NEG_INFINITY);
    }

    #[test]
    fn hapax_words_feed_unknown_class() {
        let base = toy3();
        let mut inv = base.inventory().clone();
        let (adj, noun) = (inv.tag_id("ADJ").unwrap(), inv.tag_id("NOUN").unwrap());
        let unk = inv.add_class("[UNKNOWN]", &[adj, noun]).unwrap();
        let text = "x\t[ADJ,NOUN]\tADJ\ny\t[NOUN]\tNOUN\n\ny\t[NOUN]\tNOUN\n";
        let corpus = read_tagged(&inv, text.as_bytes()).unwrap();
        let p = train_from_tagged(
            inv,
            base.sentence_end(),
            &corpus,
            TrainOptions { smoothing: 0.0, unknown_class: Some(unk) },
        )
        .unwrap();
        // "x" is the only hapax
        assert!((p.emit(unk, adj).exp() - 0.5).abs() < 1e-12);
        assert_eq!(p.emit(unk, noun), f64::NEG_INFINITY);
    }
}
