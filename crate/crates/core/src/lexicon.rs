//! Word lists bundled with the crate (see `data/lexicon/`).

use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

pub const STOPWORDS: &str = include_str!("../data/lexicon/stopwords.txt");
pub const CONTRADICTIONS: &str = include_str!("../data/lexicon/contradictions.txt");
pub const SUPERLATIVES: &str = include_str!("../data/lexicon/superlatives.txt");
pub const EST_EXCEPTIONS: &str = include_str!("../data/lexicon/est_exceptions.txt");
pub const ED_EXCEPTIONS: &str = include_str!("../data/lexicon/ed_exceptions.txt");
pub const IRREGULAR_VERBS: &str = include_str!("../data/lexicon/irregular_verbs.txt");
pub const ABBREVIATIONS: &str = include_str!("../data/lexicon/abbreviations.txt");

/// Non-comment, non-blank lines of a bundled list.
pub fn entries(src: &str) -> impl Iterator<Item = &str> {
    src.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

pub fn word_set(src: &str) -> BTreeSet<String> {
    entries(src).map(str::to_lowercase).collect()
}

macro_rules! cached_set {
    ($name:ident, $src:expr) => {
        pub fn $name() -> &'static BTreeSet<String> {
            static CELL: OnceLock<BTreeSet<String>> = OnceLock::new();
            CELL.get_or_init(|| word_set($src))
        }
    };
}

cached_set!(stopwords, STOPWORDS);
cached_set!(superlatives, SUPERLATIVES);
cached_set!(est_exceptions, EST_EXCEPTIONS);
cached_set!(ed_exceptions, ED_EXCEPTIONS);
cached_set!(abbreviations, ABBREVIATIONS);

pub struct VerbForm {
    pub tag: &'static str,
    pub lemma: &'static str,
}

pub fn irregular_verbs() -> &'static HashMap<&'static str, VerbForm> {
    static CELL: OnceLock<HashMap<&'static str, VerbForm>> = OnceLock::new();
    CELL.get_or_init(|| {
        entries(IRREGULAR_VERBS)
            .filter_map(|l| {
                let mut parts = l.split_whitespace();
                let form = parts.next()?;
                let tag = parts.next()?;
                let lemma = parts.next()?;
                Some((form, VerbForm { tag, lemma }))
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_lists_load() {
        assert!(stopwords().len() > 150);
        assert!(stopwords().contains("of"));
        assert!(!stopwords().contains("stunt"));
        assert_eq!(word_set(CONTRADICTIONS).len(), 10);
        assert!(est_exceptions().contains("modest"));
        assert_eq!(irregular_verbs()["won"].lemma, "win");
        assert!(abbreviations().contains("u.s."));
    }
}
