mod common;

use std::collections::BTreeMap;

use cswitch::corpus::*;
use proptest::prelude::*;

fn oracle(name: &str) -> String {
    std::fs::read_to_string(common::fixtures().join("oracles").join(name)).unwrap()
}

fn jsonl(path: &str) -> Vec<RawPost> {
    load_posts(&common::fixtures().join(path)).unwrap().posts
}

#[test]
fn fixture_dump_has_the_golden_ids() {
    let loaded = load_posts(&common::fixtures().join("dump/posts.jsonl")).unwrap();
    assert_eq!(loaded.posts.len(), 1000);
    assert_eq!(loaded.skipped, 0);
    let mut ids: Vec<&str> = loaded.posts.iter().map(|p| p.id.as_str()).collect();
    ids.sort_unstable();
    let golden = oracle("dump_ids.txt");
    assert_eq!(ids, golden.lines().collect::<Vec<_>>());
}

#[test]
fn extra_dump_tallies_malformed_lines() {
    let loaded = load_posts(&common::fixtures().join("dump/extra.jsonl")).unwrap();
    // three of the ids repeat posts.jsonl, which a single-file read cannot see
    assert_eq!(loaded.posts.len(), 8);
    assert_eq!(loaded.skipped, 2);
}

#[test]
fn fixture_dump_author_counts() {
    let posts = jsonl("dump/posts.jsonl");
    let index = index_authors(&posts);
    let got: BTreeMap<String, usize> = index.iter().map(|(a, e)| (a.to_string(), e.total_posts())).collect();
    let golden: BTreeMap<String, usize> = oracle("dump_author_counts.csv")
        .lines()
        .skip(1)
        .map(|l| {
            let (a, n) = l.split_once(',').unwrap();
            (a.to_string(), n.parse().unwrap())
        })
        .collect();
    assert_eq!(got, golden);
    assert_eq!(index.total_posts(), posts.len());
}

#[test]
fn fixture_common_authors() {
    let cs = jsonl("common_authors/cs.jsonl");
    let mono = jsonl("common_authors/mono.jsonl");
    let got = select_common_authors(
        cs.iter().map(|p| (p.author.as_str(), p.body.as_str())),
        mono.iter().map(|p| (p.author.as_str(), p.body.as_str())),
        50,
    );
    let golden = oracle("common_authors.txt");
    assert_eq!(
        got.iter().map(String::as_str).collect::<Vec<_>>(),
        golden.lines().collect::<Vec<_>>()
    );
    assert_eq!(got.len(), 12);
}

#[test]
fn fixture_report_csv() {
    #[derive(serde::Deserialize)]
    struct Row {
        author: String,
        body: String,
        language_pair: String,
    }
    let data = std::fs::read_to_string(common::fixtures().join("report/cs_posts.jsonl")).unwrap();
    let rows: Vec<Row> = data.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let report = corpus_report(rows.iter().map(|r| ReportEntry {
        language_pair: &r.language_pair,
        author: &r.author,
        tokens: cswitch::text::token_count(&r.body),
    }));
    let mut out = Vec::new();
    write_report_csv(&mut out, &report).unwrap();
    assert_eq!(String::from_utf8(out).unwrap(), oracle("report.csv"));
}

#[test]
fn admissibility_examples() {
    let post = |body: &str| RawPost {
        id: "x".into(),
        author: "a".into(),
        subreddit: "s".into(),
        created_utc: 0,
        parent_id: None,
        body: body.into(),
    };
    assert!(admissible(&post("hello there my good friend")));
    assert!(!admissible(&post("see https://example.com for details and more")));
    assert!(!admissible(&post("nice one")));
    assert!(!admissible(&post("read all about it at www.example.org today")));
}

fn arb_posts() -> impl Strategy<Value = Vec<RawPost>> {
    prop::collection::vec(("[a-c]", 0i64..5, "[a-z ]{0,30}"), 0..20).prop_map(|v| {
        v.into_iter()
            .enumerate()
            .map(|(i, (author, t, body))| RawPost {
                id: format!("p{i}"),
                author,
                subreddit: "s".into(),
                created_utc: t,
                parent_id: None,
                body,
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn index_is_order_independent(posts in arb_posts(), rot in 0usize..20) {
        let mut shuffled = posts.clone();
        if !shuffled.is_empty() {
            let k = rot % shuffled.len();
            shuffled.rotate_left(k);
            shuffled.reverse();
        }
        let a = index_authors(&posts);
        let b = index_authors(&shuffled);
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.total_posts(), posts.len());
    }

    #[test]
    fn admissible_counts_add_up(posts in arb_posts()) {
        let kept: Vec<&RawPost> = posts.iter().filter(|p| admissible(p)).collect();
        let index = index_authors(kept.iter().copied());
        prop_assert_eq!(index.total_posts(), kept.len());
    }
}
