//! Small hand-written models shared by tests, examples and docs.

use super::HmmParams;

/// Three tags `DET ADJ NOUN`, classes `[DET]`, `[ADJ,NOUN]`, `[NOUN]`;
/// `[NOUN]` closes sentences.
pub fn toy3() -> HmmParams {
    HmmParams::read_from(include_str!("../../fixtures/toy3.hmm").as_bytes())
        .expect("toy3 fixture is valid")
}

/// The three-class inventory `c1 = {t11,t12}`, `c2 = {t21,t22,t23}`,
/// `c3 = {t31}`, with probabilities making `c1:t12` and `c2:t23` the best
/// pairs from the initial state and `c2:t21` the best pair after `c3:t31`.
pub fn fig1() -> HmmParams {
    HmmParams::read_from(include_str!("../../fixtures/fig1.hmm").as_bytes())
        .expect("fig1 fixture is valid")
}

/// Tagged `word\tclass\ttag` corpus over the toy3 inventory.
pub const TOY3_CORPUS: &str = include_str!("../../fixtures/toy3_corpus.txt");
