use std::time::Instant;

use crate::fsm::{canonical, ClassId, Fst, TagId};
use crate::tagger::ClassTagger;

use super::EvalError;

/// Tags every sentence.
pub fn tag_corpus(tagger: &dyn ClassTagger, corpus: &[Vec<ClassId>]) -> Result<Vec<Vec<TagId>>, EvalError> {
    corpus
        .iter()
        .enumerate()
        .map(|(i, s)| tagger.tag_classes(s).map_err(|source| EvalError::Tag { sentence: i, source }))
        .collect()
}

/// Share of tokens whose predicted tag equals the reference tag. Every
/// token counts, sentence-end tokens included.
pub fn accuracy(pred: &[Vec<TagId>], gold: &[Vec<TagId>]) -> Result<f64, EvalError> {
    if pred.len() != gold.len() {
        return Err(EvalError::AlignmentMismatch { sentence: pred.len().min(gold.len()) });
    }
    let mut hit = 0usize;
    let mut total = 0usize;
    for (i, (p, g)) in pred.iter().zip(gold).enumerate() {
        if p.len() != g.len() {
            return Err(EvalError::AlignmentMismatch { sentence: i });
        }
        hit += p.iter().zip(g).filter(|(a, b)| a == b).count();
        total += g.len();
    }
    Ok(if total == 0 { 1.0 } else { hit as f64 / total as f64 })
}

/// Accuracy against the HMM's own output instead of gold tags.
pub fn agreement(pred: &[Vec<TagId>], hmm: &[Vec<TagId>]) -> Result<f64, EvalError> {
    accuracy(pred, hmm)
}

/// States and arcs of the minimal pair-deterministic equivalent.
pub fn size_report(t: &Fst) -> (usize, usize) {
    let m = canonical(t);
    (m.num_states(), m.num_arcs())
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchResult {
    pub name: String,
    /// Median words per second.
    pub words_per_sec: f64,
    pub runs: Vec<f64>,
}

/// Times each tagger over `corpus` `runs` times (at least 3) on the
/// calling thread and reports the median throughput. Each tagger is run
/// once untimed first; every timed run must reproduce that output.
pub fn benchmark(
    taggers: &[(&str, &dyn ClassTagger)],
    corpus: &[Vec<ClassId>],
    runs: usize,
) -> Result<Vec<BenchResult>, EvalError> {
    let words: usize = corpus.iter().map(Vec::len).sum();
    let mut out = Vec::new();
    for &(name, tagger) in taggers {
        let reference = tag_corpus(tagger, corpus)?;
        let mut rates = Vec::new();
        for _ in 0..runs.max(3) {
            let start = Instant::now();
            let tagged = tag_corpus(tagger, corpus)?;
            let secs = start.elapsed().as_secs_f64().max(1e-9);
            if tagged != reference {
                return Err(EvalError::OutputMismatch(name.to_string()));
            }
            rates.push(words as f64 / secs);
        }
        let mut sorted = rates.clone();
        sorted.sort_by(f64::total_cmp);
        out.push(BenchResult { name: name.to_string(), words_per_sec: sorted[sorted.len() / 2], runs: rates });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fsm::FstError;
    use std::cell::Cell;

    #[test]
    fn counts_matching_tokens() {
        let t = |v: &[u32]| v.iter().map(|&x| TagId(x)).collect::<Vec<_>>();
        let gold = vec![t(&[1, 2]), t(&[3, 4])];
        assert_eq!(accuracy(&gold, &gold).unwrap(), 1.0);
        assert_eq!(accuracy(&[t(&[1, 2]), t(&[3, 0])], &gold).unwrap(), 0.75);
        assert!(matches!(
            accuracy(&[t(&[1, 2]), t(&[3])], &gold),
            Err(EvalError::AlignmentMismatch { sentence: 1 })
        ));
        assert!(accuracy(&gold[..1], &gold).is_err());
    }

    #[test]
    fn empty_fst_size() {
        assert_eq!(size_report(&Fst::empty()), (1, 0));
    }

    struct Flaky(Cell<u32>);

    impl ClassTagger for Flaky {
        fn tag_classes(&self, classes: &[ClassId]) -> Result<Vec<TagId>, FstError> {
            self.0.set(self.0.get() + 1);
            Ok(vec![TagId(self.0.get()); classes.len()])
        }
    }

    #[test]
    fn unstable_output_is_reported() {
        let f = Flaky(Cell::new(0));
        let corpus = vec![vec![ClassId(0)]];
        assert!(matches!(benchmark(&[("flaky", &f)], &corpus, 3), Err(EvalError::OutputMismatch(n)) if n == "flaky"));
    }
}
