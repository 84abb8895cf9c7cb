//! Building every tagger for one model and measuring them side by side.

use std::time::Instant;

use crate::corpus::{class_sequence, tag_sequence, TaggedSentence};
use crate::fsm::{ClassId, Fst};
use crate::hmm::HmmParams;
use crate::ntype::{build_n0, build_n1};
use crate::stype::{build_completed, enumerate_subsequences, extract_subsequences, SubsequenceSet};
use crate::tagger::{ClassTagger, FstTagger, HmmTagger};

use super::metrics::{accuracy, benchmark, tag_corpus};
use super::report::{EvalReport, ReportRow};
use super::EvalError;

/// Where an s-type model's subsequences come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    /// Extracted from a class-annotated corpus, kept if seen this often.
    Corpus { min_freq: usize },
    /// Every subsequence up to this length.
    Enumerate { max_len: usize },
}

impl Source {
    pub fn label(&self) -> String {
        match self {
            Source::Corpus { min_freq } => format!("s+n1(F={min_freq})"),
            Source::Enumerate { max_len } => format!("s+n1(<={max_len})"),
        }
    }
}

/// The subsequence set a source selects.
pub fn select_subsequences(
    p: &HmmParams,
    source: Source,
    corpus: &[Vec<ClassId>],
) -> Result<SubsequenceSet, EvalError> {
    Ok(match source {
        Source::Corpus { min_freq } => extract_subsequences(p.inventory(), corpus, min_freq)?,
        Source::Enumerate { max_len } => enumerate_subsequences(p.inventory(), max_len),
    })
}

/// An s-type model completed with n1.
pub fn build_s_plus_n1(
    p: &HmmParams,
    source: Source,
    corpus: &[Vec<ClassId>],
) -> Result<(Fst, SubsequenceSet), EvalError> {
    let set = select_subsequences(p, source, corpus)?;
    let n1 = build_n1(p)?;
    Ok((build_completed(p, &set, &n1)?, set))
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub sources: Vec<Source>,
    pub bench_runs: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig { sources: vec![Source::Corpus { min_freq: 1 }], bench_runs: 3 }
    }
}

/// Builds the HMM, n0, n1 and one s+n1 tagger per source, and scores each
/// on `test` against its gold tags and against the HMM.
pub fn run_experiment(
    p: &HmmParams,
    train: &[TaggedSentence],
    test: &[TaggedSentence],
    cfg: &ExperimentConfig,
) -> Result<EvalReport, EvalError> {
    let train_classes: Vec<Vec<ClassId>> = train.iter().map(|s| class_sequence(s)).collect();
    let test_classes: Vec<Vec<ClassId>> = test.iter().map(|s| class_sequence(s)).collect();
    let gold: Vec<_> = test.iter().map(|s| tag_sequence(s)).collect();

    let hmm = HmmTagger::new(p);
    let hmm_tags = tag_corpus(&hmm, &test_classes)?;

    let mut models: Vec<(String, Fst, f64)> = Vec::new();
    let timed = |f: &dyn Fn() -> Result<Fst, EvalError>| -> Result<(Fst, f64), EvalError> {
        let start = Instant::now();
        let fst = f()?;
        Ok((fst, start.elapsed().as_secs_f64()))
    };
    let (n0, t) = timed(&|| Ok(build_n0(p)?))?;
    models.push(("n0".into(), n0, t));
    let (n1, t) = timed(&|| Ok(build_n1(p)?))?;
    models.push(("n1".into(), n1, t));
    for &source in &cfg.sources {
        let (s, t) = timed(&|| Ok(build_s_plus_n1(p, source, &train_classes)?.0))?;
        models.push((source.label(), s, t));
    }

    let mut rows = Vec::new();
    let hmm_speed = benchmark(&[("hmm", &hmm)], &test_classes, cfg.bench_runs)?[0].words_per_sec;
    rows.push(ReportRow {
        tagger: "hmm".into(),
        accuracy: accuracy(&hmm_tags, &gold)?,
        agreement_with_hmm: 1.0,
        words_per_sec: hmm_speed,
        size: None,
        build_secs: 0.0,
    });
    for (name, fst, build_secs) in models {
        let size = (fst.num_states(), fst.num_arcs());
        let tagger = FstTagger::new(fst);
        let tags = tag_corpus(&tagger, &test_classes)?;
        let speed = benchmark(&[(name.as_str(), &tagger as &dyn ClassTagger)], &test_classes, cfg.bench_runs)?[0]
            .words_per_sec;
        rows.push(ReportRow {
            tagger: name,
            accuracy: accuracy(&tags, &gold)?,
            agreement_with_hmm: accuracy(&tags, &hmm_tags)?,
            words_per_sec: speed,
            size: Some(size),
            build_secs,
        });
    }
    Ok(EvalReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{gen_synthetic, random_world, WorldConfig};
    use crate::hmm::{train_from_tagged, TrainOptions};

    #[test]
    fn small_end_to_end_report() {
        let world = random_world(&WorldConfig { tags: 5, ambiguous_classes: 6, ..WorldConfig::default() }, 2);
        let train = gen_synthetic(&world, 300, 3, 30, 1);
        let test = gen_synthetic(&world, 100, 3, 30, 2);
        let p = train_from_tagged(world.inventory().clone(), world.sentence_end(), &train, TrainOptions::default())
            .unwrap();
        let cfg = ExperimentConfig {
            sources: vec![Source::Corpus { min_freq: 1 }, Source::Corpus { min_freq: 2 }, Source::Enumerate { max_len: 2 }],
            bench_runs: 3,
        };
        let report = run_experiment(&p, &train, &test, &cfg).unwrap();
        assert_eq!(report.rows.len(), 6);
        for r in &report.rows {
            assert!((0.0..=1.0).contains(&r.accuracy) && (0.0..=1.0).contains(&r.agreement_with_hmm));
            assert!(r.words_per_sec > 0.0);
        }
        assert_eq!(report.row("n0").unwrap().size.unwrap(), (1, p.num_classes()));
        // the training corpus is fully covered at F=1
        let train_report = run_experiment(&p, &train, &train, &cfg).unwrap();
        assert_eq!(train_report.row("s+n1(F=1)").unwrap().agreement_with_hmm, 1.0);
    }
}
