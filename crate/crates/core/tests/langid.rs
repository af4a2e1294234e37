mod common;

use cswitch::langid::*;

fn profiles() -> ProfileSet {
    ProfileSet::train_dir(&common::data().join("seed")).unwrap()
}

fn heldout(lang: &str) -> Vec<String> {
    std::fs::read_to_string(common::data().join(format!("heldout/{lang}.txt")))
        .unwrap()
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(String::from)
        .collect()
}

fn has_letter(s: &str) -> bool {
    s.chars().any(char::is_alphabetic)
}

#[test]
fn script_disjoint_mixed_sentences() {
    let set = profiles();
    let gold = std::fs::read_to_string(common::fixtures().join("langid/mixed_sentences.gold.jsonl")).unwrap();
    let (mut ok, mut n) = (0, 0);
    for line in gold.lines().filter(|l| !l.is_empty()) {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        let text = v["text"].as_str().unwrap();
        let tags = tag_tokens(text, &set);
        for w in v["words"].as_array().unwrap() {
            let start = w["start"].as_u64().unwrap() as usize;
            let tag = tags
                .iter()
                .find(|t| t.token.start == start)
                .expect("gold word is a token");
            n += 1;
            ok += usize::from(tag.language == w["lang"].as_str().unwrap());
        }
    }
    assert!(n > 400);
    let acc = ok as f64 / n as f64;
    assert!(acc >= 0.99, "{acc}");
}

#[test]
fn latin_script_snippets_next_to_english() {
    let set = profiles();
    let en = heldout("en");
    for lang in ["ro", "tl", "id"] {
        let (mut ok, mut n) = (0, 0);
        for (i, s) in heldout(lang).iter().enumerate() {
            assert!(s.chars().count() >= 40);
            let body = format!("{s} {}", en[i % en.len()]);
            for t in tag_tokens(&body, &set) {
                if !has_letter(t.token.text) {
                    continue;
                }
                let gold = if t.token.start < s.len() { lang } else { "en" };
                n += 1;
                ok += usize::from(t.language == gold);
            }
        }
        let acc = ok as f64 / n as f64;
        assert!(acc >= 0.90, "{lang}: {acc}");
    }
}

#[test]
fn held_out_snippets_are_identified() {
    let set = profiles();
    for lang in ["en", "ro", "tl", "id"] {
        let snippets = heldout(lang);
        let hits = snippets
            .iter()
            .filter(|s| identify(s, &set)[0].language == lang)
            .count();
        assert!(
            hits as f64 >= 0.95 * snippets.len() as f64,
            "{lang}: {hits}/{}",
            snippets.len()
        );
    }
}

#[test]
fn shares_and_pairs() {
    let set = profiles();
    let body = "Χθες πήγαμε στη θάλασσα με τους φίλους μας and honestly it was the best day of the summer.";
    let shares = identify(body, &set);
    assert!((shares.iter().map(|s| s.proportion).sum::<f64>() - 1.0).abs() < 1e-9);
    // English first, then the other language
    assert_eq!(
        detect_bilingual(body, &set, DEFAULT_MIN_SHARE),
        Some(("en".into(), "el".into()))
    );
    assert_eq!(pair_label("el", "en"), "English-Greek");
    assert_eq!(pair_label("en", "ru"), "English-Russian");
}

#[test]
fn profiles_round_trip_through_tsv() {
    let seed = std::fs::read_to_string(common::data().join("seed/en.txt")).unwrap();
    let p = LanguageProfile::train(&seed, "en").unwrap();
    let back = LanguageProfile::from_tsv(&p.to_tsv(), "p").unwrap();
    for g in ["the", "at", "t", "sat o"] {
        assert_eq!(p.ngram_logprob(g), back.ngram_logprob(g));
    }
    assert!(LanguageProfile::train("far too short", "en").is_err());
}
