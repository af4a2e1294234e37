//! Loaders for the small plain-text resources the pipeline consumes:
//! term lists, rank lists and rating lexicons.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

pub(crate) fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// One entry per line, `#` starts a comment, blank lines ignored.
/// Entries are trimmed and lowercased.
pub fn parse_term_list(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(str::to_lowercase)
        .collect()
}

pub fn load_term_list(path: &Path) -> Result<BTreeSet<String>> {
    Ok(parse_term_list(&read_to_string(path)?))
}

/// Word rank list, `word<TAB>rank` with 1-based ranks.
#[derive(Debug, Clone, Default)]
pub struct RankList {
    ranks: HashMap<String, u32>,
}

impl RankList {
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut ranks = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (word, rank) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(origin, i + 1, "expected word<TAB>rank"))?;
            let rank: u32 = rank
                .trim()
                .parse()
                .map_err(|_| Error::parse(origin, i + 1, format!("bad rank '{rank}'")))?;
            if rank == 0 {
                return Err(Error::parse(origin, i + 1, "ranks are 1-based"));
            }
            ranks.entry(word.trim().to_lowercase()).or_insert(rank);
        }
        Ok(RankList { ranks })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read_to_string(path)?, &path.display().to_string())
    }

    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let ranks = words
            .into_iter()
            .enumerate()
            .map(|(i, w)| (w.into(), i as u32 + 1))
            .collect();
        RankList { ranks }
    }

    pub fn rank(&self, word: &str) -> Option<u32> {
        self.ranks.get(word).copied()
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }
}

/// Word ratings such as age-of-acquisition or concreteness norms:
/// `word<TAB>rating` with one header line.
#[derive(Debug, Clone, Default)]
pub struct RatingLexicon {
    ratings: BTreeMap<String, f64>,
}

impl RatingLexicon {
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut ratings = BTreeMap::new();
        for (i, line) in text.lines().enumerate().skip(1) {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            let mut cols = line.split('\t');
            let word = cols.next().unwrap_or("").trim();
            let rating = cols
                .next()
                .ok_or_else(|| Error::parse(origin, i + 1, "expected word<TAB>rating"))?;
            let rating: f64 = rating
                .trim()
                .parse()
                .map_err(|_| Error::parse(origin, i + 1, format!("bad rating '{rating}'")))?;
            if !rating.is_finite() {
                return Err(Error::parse(origin, i + 1, "rating is not finite"));
            }
            ratings.insert(word.to_lowercase(), rating);
        }
        if ratings.is_empty() {
            return Err(Error::parse(origin, 1, "lexicon has no entries"));
        }
        Ok(RatingLexicon { ratings })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read_to_string(path)?, &path.display().to_string())
    }

    pub fn get(&self, word: &str) -> Option<f64> {
        self.ratings.get(word).copied()
    }

    pub fn len(&self) -> usize {
        self.ratings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ratings.is_empty()
    }
}

impl FromIterator<(String, f64)> for RatingLexicon {
    fn from_iter<I: IntoIterator<Item = (String, f64)>>(iter: I) -> Self {
        RatingLexicon {
            ratings: iter.into_iter().collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn term_list_comments_and_case() {
        let set = parse_term_list("# header\nTranslate\n\n  meaning  # inline\n");
        assert_eq!(set.into_iter().collect::<Vec<_>>(), ["meaning", "translate"]);
    }

    #[test]
    fn rank_list_parse() {
        let r = RankList::parse("the\t1\ncat\t2\n", "t").unwrap();
        assert_eq!(r.rank("cat"), Some(2));
        assert_eq!(r.rank("dog"), None);
        let err = RankList::parse("the 1\n", "ranks.tsv").unwrap_err();
        assert!(err.to_string().starts_with("ranks.tsv:1:"));
        assert!(RankList::parse("x\t0\n", "t").is_err());
    }

    #[test]
    fn rating_lexicon_skips_header() {
        let lex = RatingLexicon::parse("word\trating\ncat\t4.0\nDog\t6\n", "t").unwrap();
        assert_eq!(lex.get("cat"), Some(4.0));
        assert_eq!(lex.get("dog"), Some(6.0));
        assert!(RatingLexicon::parse("word\trating\n", "t").is_err());
        assert!(RatingLexicon::parse("h\ncat\tx\n", "t").is_err());
    }
}
