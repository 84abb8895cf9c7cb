//! Synthetic data, accuracy and agreement, throughput and size.

mod experiment;
mod metrics;
mod report;
mod synth;

pub use experiment::{build_s_plus_n1, run_experiment, select_subsequences, ExperimentConfig, Source};
pub use metrics::{accuracy, agreement, benchmark, size_report, tag_corpus, BenchResult};
pub use report::{EvalReport, ReportRow};
pub use synth::{gen_synthetic, random_params, random_world, word_form, WorldConfig, SENTENCE_END_TAG};

use thiserror::Error;

use crate::fsm::FstError;
use crate::ntype::NTypeError;
use crate::stype::STypeError;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("predicted and reference corpora differ at sentence {sentence}")]
    AlignmentMismatch { sentence: usize },
    #[error("tagger {0} gave different output on a repeated run")]
    OutputMismatch(String),
    #[error("sentence {sentence}: {source}")]
    Tag { sentence: usize, source: FstError },
    #[error(transparent)]
    NType(#[from] NTypeError),
    #[error(transparent)]
    SType(#[from] STypeError),
}
