mod common;

use std::collections::BTreeSet;

use cswitch::topics::*;
use proptest::prelude::*;
use serde::Deserialize;

#[derive(Deserialize)]
struct OracleModel {
    terms: Vec<String>,
    phi: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
struct Case {
    m1: OracleModel,
    m2: OracleModel,
    top_n: usize,
    sets1: Vec<Vec<String>>,
    sets2: Vec<Vec<String>>,
    pairs: Vec<Vec<f64>>,
    avg: f64,
    max: f64,
}

fn model(m: &OracleModel) -> TopicModel {
    TopicModel {
        params: LdaParams::new(m.phi.len(), 0),
        terms: m.terms.clone(),
        doc_ids: Vec::new(),
        phi: m.phi.clone(),
        theta: Vec::new(),
        topic_coherence: Vec::new(),
        coherence: f64::NAN,
    }
}

fn set(v: &[String]) -> BTreeSet<String> {
    v.iter().cloned().collect()
}

#[test]
fn model_similarity_matches_exact_oracle() {
    let data = std::fs::read_to_string(common::fixtures().join("oracles/jaccard.json")).unwrap();
    let cases: Vec<Case> = serde_json::from_str(&data).unwrap();
    assert_eq!(cases.len(), 20);
    for c in &cases {
        let (m1, m2) = (model(&c.m1), model(&c.m2));
        for (k, s) in c.sets1.iter().enumerate() {
            assert_eq!(set(s), m1.top_terms(k, c.top_n).into_iter().map(String::from).collect());
        }
        for (k, s) in c.sets2.iter().enumerate() {
            assert_eq!(set(s), m2.top_terms(k, c.top_n).into_iter().map(String::from).collect());
        }
        for (i, row) in c.pairs.iter().enumerate() {
            for (j, &p) in row.iter().enumerate() {
                assert_eq!(jaccard(&set(&c.sets1[i]), &set(&c.sets2[j])), p);
            }
        }
        assert_eq!(model_similarity(&m1, &m2, SimilarityMode::Max, c.top_n), c.max);
        let avg = model_similarity(&m1, &m2, SimilarityMode::Avg, c.top_n);
        assert!((avg - c.avg).abs() <= 1e-12, "{avg} vs {}", c.avg);
    }
}

#[test]
fn jaccard_examples() {
    let s = |v: &[u32]| v.iter().copied().collect::<BTreeSet<_>>();
    assert_eq!(jaccard(&s(&[1, 2, 3]), &s(&[2, 3, 4])), 0.5);
    assert_eq!(jaccard(&s(&[1]), &s(&[2])), 0.0);
    assert_eq!(jaccard(&s(&[]), &s(&[])), 1.0);
    assert_eq!(jaccard(&s(&[]), &s(&[1])), 0.0);
}

#[test]
fn npmi_bounds() {
    // always together, in every document
    assert_eq!(npmi(10, 10, 10, 10), 1.0);
    // independent at add-one smoothing: px = py = 0.5, pxy = 0.25
    assert!(npmi(1, 1, 0, 3).abs() < 1e-15);
    assert!(npmi(5, 5, 0, 10) < 0.0);
}

#[test]
fn fitted_distributions_are_normalized_and_seeded() {
    let syn = common::synthetic_corpus(3, 30, 150, 30, 11);
    let mut p = LdaParams::new(3, 4);
    p.iterations = 100;
    let m = fit_lda(&syn.docs, &syn.vocab, &p).unwrap();
    assert_eq!(m.phi.len(), 3);
    assert_eq!(m.theta.len(), syn.docs.len());
    for row in m.phi.iter().chain(&m.theta) {
        assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(row.iter().all(|&x| x > 0.0));
    }
    assert_eq!(m, fit_lda(&syn.docs, &syn.vocab, &p).unwrap());
    assert_ne!(m.phi, fit_lda(&syn.docs, &syn.vocab, &p.with_seed(5)).unwrap().phi);
    let back = TopicModel::from_json(&m.to_json().unwrap()).unwrap();
    assert_eq!(back.phi, m.phi);
}

#[test]
fn small_corpus_topics_are_recovered() {
    let syn = common::synthetic_corpus(3, 30, 300, 40, 2);
    let mut p = LdaParams::new(3, 1);
    p.iterations = 300;
    let m = fit_lda(&syn.docs, &syn.vocab, &p).unwrap();
    for truth in &syn.truth {
        let want: BTreeSet<&str> = truth[..10].iter().map(String::as_str).collect();
        let best = (0..3)
            .map(|k| m.top_terms(k, 10).into_iter().filter(|t| want.contains(t)).count())
            .max()
            .unwrap();
        assert!(best >= 8, "{best}");
    }
}

#[test]
fn lda_rejects_bad_parameters() {
    let syn = common::synthetic_corpus(2, 5, 4, 5, 0);
    assert!(fit_lda(&syn.docs, &syn.vocab, &LdaParams::new(1, 0)).is_err());
    let mut p = LdaParams::new(2, 0);
    p.beta = 0.0;
    assert!(fit_lda(&syn.docs, &syn.vocab, &p).is_err());
}

fn topic_sets() -> impl Strategy<Value = Vec<BTreeSet<u8>>> {
    prop::collection::vec(prop::collection::btree_set(0u8..30, 1..8), 1..5)
}

proptest! {
    #[test]
    fn max_similarity_bounds_average(a in topic_sets(), b in topic_sets()) {
        let avg = topic_set_similarity(&a, &b, SimilarityMode::Avg);
        let max = topic_set_similarity(&a, &b, SimilarityMode::Max);
        prop_assert!((0.0..=1.0).contains(&avg));
        prop_assert!(max + 1e-15 >= avg);
        prop_assert_eq!(max, topic_set_similarity(&b, &a, SimilarityMode::Max));
        prop_assert!((avg - topic_set_similarity(&b, &a, SimilarityMode::Avg)).abs() < 1e-12);
        prop_assert_eq!(topic_set_similarity(&a, &a, SimilarityMode::Max), 1.0);
    }

    #[test]
    fn split_halves_is_a_partition(n in 2usize..60, seed in any::<u64>()) {
        use rand::SeedableRng;
        let docs: Vec<Document> = (0..n).map(|i| Document::from_ids(format!("d{i}"), Source::Mono, [i as u32])).collect();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let (h1, h2) = split_halves(&docs, &mut rng);
        prop_assert!(h1.len().abs_diff(h2.len()) <= 1);
        let mut ids: Vec<String> = h1.iter().chain(&h2).map(|d| d.id.clone()).collect();
        ids.sort();
        ids.dedup();
        prop_assert_eq!(ids.len(), n);
    }
}
