mod common;

use std::collections::BTreeMap;

use cswitch::corpus::{self, RawPost};
use cswitch::cs_filter::*;
use cswitch::langid::ProfileSet;
use cswitch::resources::load_term_list;
use proptest::prelude::*;

fn resources() -> FilterResources {
    let lex = common::data().join("lexicons");
    let ner = std::fs::read_to_string(common::fixtures().join("cs_labeled/ner.tsv")).unwrap();
    FilterResources {
        translation_lexicon: load_term_list(&lex.join("translation_markers.txt")).unwrap(),
        gazetteer: Gazetteer::new(load_term_list(&lex.join("gazetteer.txt")).unwrap()),
        ner: Some(NerSidecar::parse(&ner, "ner.tsv").unwrap()),
    }
}

fn post(body: &str) -> RawPost {
    RawPost {
        id: "t1_x".into(),
        author: "a".into(),
        subreddit: "s".into(),
        created_utc: 0,
        parent_id: None,
        body: body.into(),
    }
}

#[test]
fn cascade_on_labeled_fixture() {
    let set = ProfileSet::train_dir(&common::data().join("seed")).unwrap();
    let res = resources();
    let posts = corpus::load_posts(&common::fixtures().join("cs_labeled/posts.jsonl")).unwrap();
    let labels: BTreeMap<String, String> = std::fs::read_to_string(common::fixtures().join("cs_labeled/labels.csv"))
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| {
            let c: Vec<&str> = l.split(',').collect();
            (c[0].to_string(), c[1].to_string())
        })
        .collect();
    assert_eq!(posts.posts.len(), 200);
    let (mut tp, mut fp, mut fneg) = (0, 0, 0);
    for p in &posts.posts {
        let c = classify_cs(p, &set, &res, &CascadeConfig::default()).unwrap();
        match (c.decision.is_code_switched(), labels[&p.id] == "yes") {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fneg += 1,
            _ => {}
        }
    }
    let precision = tp as f64 / (tp + fp) as f64;
    let recall = tp as f64 / (tp + fneg) as f64;
    assert!(precision >= 0.95, "precision {precision}");
    assert!(recall >= 0.85, "recall {recall}");
}

#[test]
fn nested_replies_are_removed() {
    let dir = common::fixtures().join("quotes");
    let body = std::fs::read_to_string(dir.join("nested.txt")).unwrap();
    let expected = std::fs::read_to_string(dir.join("nested.expected.txt")).unwrap();
    let (kept, trace) = strip_replies(&body, &default_reply_markers());
    let lines = |s: &str| {
        s.lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(String::from)
            .collect::<Vec<_>>()
    };
    assert_eq!(lines(&kept), lines(&expected));
    assert_eq!(trace.count(RemovalKind::Reply), 2);
}

#[test]
fn long_quotes_go_and_short_ones_stay() {
    let body = "He said \"this is a rather long quoted sentence that keeps going on\" and \"ok\" then left.";
    let (kept, trace) = strip_long_quotes(body, 5);
    assert!(!kept.contains("rather"));
    assert!(kept.contains("\"ok\""));
    assert_eq!(trace.count(RemovalKind::Quote), 1);
    assert_eq!(trace.warnings, 0);
    let (_, t) = strip_long_quotes("an \u{201C}open quote only", 5);
    assert_eq!(t.warnings, 1);
}

#[test]
fn short_and_translation_posts_are_rejected() {
    let set = ProfileSet::train_dir(&common::data().join("seed")).unwrap();
    let res = resources();
    let cfg = CascadeConfig::default();
    let short = classify_cs(&post("hi there"), &set, &res, &cfg).unwrap();
    assert_eq!(
        short.decision,
        CsDecision::Rejected {
            reason: RejectReason::TooShort
        }
    );
    let mono = classify_cs(
        &post("I spent the whole weekend fixing the garden fence and planting tomatoes with my neighbours."),
        &set,
        &res,
        &cfg,
    )
    .unwrap();
    assert_eq!(mono.decision, CsDecision::Monolingual { language: "en".into() });
}

#[test]
fn annotation_precision_per_pair() {
    let dir = common::fixtures().join("annotations");
    let ann = parse_annotations(
        std::fs::File::open(dir.join("annotations.csv")).unwrap(),
        "annotations.csv",
    )
    .unwrap();
    let pairs: BTreeMap<String, String> = std::fs::read_to_string(dir.join("pairs.csv"))
        .unwrap()
        .lines()
        .skip(1)
        .filter_map(|l| l.split_once(','))
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    let report = precision_report(&pairs, &ann);
    let row = |p: &str| report.rows.iter().find(|r| r.language_pair == p).unwrap();
    assert_eq!(row("all").precision, 0.7);
    assert_eq!(row("all").unanimity, 0.6);
    assert_eq!(row("English-Greek").precision, 0.6);
    assert_eq!(row("English-Tagalog").precision, 0.8);
    assert!(parse_annotations("post_id,annotator_id,label\np,a,maybe\n".as_bytes(), "x").is_err());
}

proptest! {
    #[test]
    fn stripping_replies_is_idempotent(lines in prop::collection::vec(prop_oneof!["> [a-z ]{0,12}", "&gt; [a-z ]{0,12}", "[a-z ]{1,12}"], 0..10)) {
        let body = lines.join("\n");
        let markers = default_reply_markers();
        let (once, _) = strip_replies(&body, &markers);
        let (twice, trace) = strip_replies(&once, &markers);
        prop_assert_eq!(&once, &twice);
        prop_assert!(trace.is_empty());
        prop_assert!(once.lines().all(|l| !l.trim_start().starts_with('>') && !l.trim_start().starts_with("&gt;")));
    }
}
