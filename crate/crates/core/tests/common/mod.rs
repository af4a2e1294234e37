#![allow(dead_code)]

use std::path::PathBuf;

use cswitch::topics::{Document, Source, Vocabulary};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn data() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

/// Documents drawn from `topics` disjoint topics of `words_per_topic` words
/// each. Every document mixes a main topic (80% of tokens) with one other.
/// Within a topic, word r has weight 1/(r+1).
pub struct Synthetic {
    pub vocab: Vocabulary,
    pub docs: Vec<Document>,
    /// Term strings of each ground-truth topic, most probable first.
    pub truth: Vec<Vec<String>>,
}

pub fn synthetic_corpus(topics: usize, words_per_topic: usize, docs: usize, doc_len: usize, seed: u64) -> Synthetic {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let truth: Vec<Vec<String>> = (0..topics)
        .map(|k| (0..words_per_topic).map(|r| format!("t{k}w{r:03}")).collect())
        .collect();
    let weights: Vec<f64> = (0..words_per_topic).map(|r| 1.0 / (r as f64 + 1.0)).collect();
    let total: f64 = weights.iter().sum();
    let draw_word = |rng: &mut ChaCha8Rng| {
        let mut u = rng.gen::<f64>() * total;
        for (r, w) in weights.iter().enumerate() {
            if u < *w {
                return r;
            }
            u -= w;
        }
        words_per_topic - 1
    };
    let mut vocab = Vocabulary::default();
    for t in truth.iter().flatten() {
        vocab.intern(t);
    }
    let docs = (0..docs)
        .map(|d| {
            let main = rng.gen_range(0..topics);
            let other = (main + rng.gen_range(1..topics)) % topics;
            let ids: Vec<u32> = (0..doc_len)
                .map(|_| {
                    let k = if rng.gen_bool(0.8) { main } else { other };
                    let r = draw_word(&mut rng);
                    vocab.id(&truth[k][r]).unwrap()
                })
                .collect();
            Document::from_ids(format!("d{d}"), Source::Mono, ids)
        })
        .collect();
    Synthetic { vocab, docs, truth }
}
