//! Random models and corpora sampled from them.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Gamma;

use crate::corpus::{TaggedSentence, TaggedToken};
use crate::fsm::{ClassId, TagId};
use crate::hmm::{HmmParams, Inventory};

pub const SENTENCE_END_TAG: &str = "SENT";

#[derive(Clone, Copy, Debug)]
pub struct WorldConfig {
    /// Tags besides the sentence-end tag.
    pub tags: usize,
    pub ambiguous_classes: usize,
    /// Dirichlet concentration of every sampled distribution.
    pub concentration: f64,
    /// Probability of moving to the sentence-end tag.
    pub end_prob: f64,
    /// Share of each distribution spread uniformly, so nothing is zero.
    pub floor: f64,
}

impl Default for WorldConfig {
    fn default() -> Self {
        WorldConfig { tags: 12, ambiguous_classes: 24, concentration: 0.5, end_prob: 0.08, floor: 0.01 }
    }
}

/// A random model with a `SENT` tag closing sentences in class `[SENT]`,
/// one unambiguous class per tag and ambiguous classes of two or three
/// ordinary tags.
pub fn random_world(cfg: &WorldConfig, seed: u64) -> HmmParams {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = cfg.tags;
    assert!(n >= 2, "need at least two ordinary tags");
    let mut inv = Inventory::new();
    let tags: Vec<TagId> = (0..n).map(|i| inv.add_tag(&format!("T{i:02}")).unwrap()).collect();
    let sent = inv.add_tag(SENTENCE_END_TAG).unwrap();
    for &t in tags.iter().chain([&sent]) {
        inv.intern_class(&[t]).unwrap();
    }
    let end = inv.class_id(&format!("[{SENTENCE_END_TAG}]")).unwrap();
    let possible = n * (n - 1) / 2 + n * (n - 1) * (n - 2) / 6;
    let wanted = cfg.ambiguous_classes.min(possible);
    while inv.num_classes() < n + 1 + wanted {
        let size = if n >= 3 && rng.random_bool(0.35) { 3 } else { 2 };
        let members: Vec<TagId> = sample(&mut rng, n, size).into_iter().map(|i| tags[i]).collect();
        inv.intern_class(&members).unwrap();
    }

    let nt = n + 1;
    let mut dir = |k: usize| dirichlet(&mut rng, k, cfg.concentration, cfg.floor);
    let mut pi = dir(n);
    pi.push(0.0);
    let pi = mix(&pi, cfg.floor);
    let mut trans = Vec::with_capacity(nt * nt);
    for _ in 0..n {
        let mut row: Vec<f64> = dir(n).into_iter().map(|p| p * (1.0 - cfg.end_prob)).collect();
        row.push(cfg.end_prob);
        trans.extend(mix(&row, cfg.floor));
    }
    trans.extend(pi.iter().copied());
    let k = inv.num_classes();
    let mut emit = vec![0.0; k * nt];
    for t in inv.tag_ids() {
        let members: Vec<ClassId> = inv.class_ids().filter(|&c| inv.contains(c, t)).collect();
        for (c, p) in members.iter().zip(dir(members.len())) {
            emit[c.index() * nt + t.index()] = p;
        }
    }
    let ln = |v: Vec<f64>| v.into_iter().map(f64::ln).collect::<Vec<_>>();
    HmmParams::new(inv, ln(pi), ln(trans), ln(emit), end).expect("sampled model is valid")
}

/// A small random world; handy for property tests.
pub fn random_params(seed: u64, tags: usize, ambiguous_classes: usize) -> HmmParams {
    random_world(&WorldConfig { tags, ambiguous_classes, ..WorldConfig::default() }, seed)
}

fn dirichlet(rng: &mut impl Rng, k: usize, alpha: f64, floor: f64) -> Vec<f64> {
    let gamma = Gamma::new(alpha, 1.0).expect("positive concentration");
    let draws: Vec<f64> = (0..k).map(|_| gamma.sample(rng)).collect();
    let total: f64 = draws.iter().sum();
    let p: Vec<f64> = if total > 0.0 {
        draws.iter().map(|x| x / total).collect()
    } else {
        vec![1.0 / k as f64; k]
    };
    mix(&p, floor)
}

fn mix(p: &[f64], floor: f64) -> Vec<f64> {
    let u = 1.0 / p.len() as f64;
    let mixed: Vec<f64> = p.iter().map(|x| (1.0 - floor) * x + floor * u).collect();
    let total: f64 = mixed.iter().sum();
    mixed.iter().map(|x| x / total).collect()
}

/// The `k`-th word form of class `c`. Words of the sentence-end class are
/// punctuation; other words spell out their class.
pub fn word_form(inv: &Inventory, sentence_end: ClassId, c: ClassId, k: usize) -> String {
    if c == sentence_end {
        return if k == 0 { ".".to_string() } else { format!(".{k}") };
    }
    let stem: Vec<String> = inv.class_tags(c).iter().map(|&t| inv.tag(t).to_lowercase()).collect();
    format!("{}{k}", stem.join("+"))
}

/// Samples `sentences` sentences: tags from `pi`/`a`, each tag's class
/// from `b(c|t)`, then one of `words_per_class` word forms of that class.
/// A sentence ends with the sentence-end class or is closed by one after
/// `max_len` tokens.
pub fn gen_synthetic(
    p: &HmmParams,
    sentences: usize,
    words_per_class: usize,
    max_len: usize,
    seed: u64,
) -> Vec<TaggedSentence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inv = p.inventory();
    let end = p.sentence_end();
    let end_tag = inv.class_tags(end)[0];
    let pi = WeightedIndex::new(inv.tag_ids().map(|t| p.pi(t).exp())).expect("pi");
    let trans: Vec<WeightedIndex<f64>> = inv
        .tag_ids()
        .map(|u| WeightedIndex::new(inv.tag_ids().map(|t| p.trans(u, t).exp())).expect("a"))
        .collect();
    let emit: Vec<(Vec<ClassId>, WeightedIndex<f64>)> = inv
        .tag_ids()
        .map(|t| {
            let cs: Vec<ClassId> = inv.class_ids().filter(|&c| p.emit(c, t) > f64::NEG_INFINITY).collect();
            let w = WeightedIndex::new(cs.iter().map(|&c| p.emit(c, t).exp())).expect("b");
            (cs, w)
        })
        .collect();
    let words_per_class = words_per_class.max(1);
    let mut corpus = Vec::with_capacity(sentences);
    for _ in 0..sentences {
        let mut sentence = Vec::new();
        let mut tag = TagId(pi.sample(&mut rng) as u32);
        loop {
            let (cs, w) = &emit[tag.index()];
            let class = cs[w.sample(&mut rng)];
            let word = word_form(inv, end, class, rng.random_range(0..words_per_class));
            sentence.push(TaggedToken { word, class, tag });
            if class == end {
                break;
            }
            if sentence.len() + 1 >= max_len.max(1) {
                let word = word_form(inv, end, end, 0);
                sentence.push(TaggedToken { word, class: end, tag: end_tag });
                break;
            }
            tag = TagId(trans[tag.index()].sample(&mut rng) as u32);
        }
        corpus.push(sentence);
    }
    corpus
}
