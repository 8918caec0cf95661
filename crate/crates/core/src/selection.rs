//! Candidate selection: paragraph-only text extraction, rule-based sentence
//! splitting, and removal of sentences that cannot be read on their own.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{match_key, AnnotatedSentence, BlockKind, EntityRecord, PageDocument};
use crate::lexicon;

/// Antecedent a pronoun needs earlier in its sentence to count as resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AntecedentClass {
    PersonRequired,
    AnyEntity,
    PluralEntity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectionConfig {
    pub pronoun_table: BTreeMap<String, AntecedentClass>,
    /// Phrases that refer back to the target entity, e.g. "the film".
    pub definite_referents: Vec<String>,
    pub use_mentions_when_present: bool,
}

impl SelectionConfig {
    pub fn movie() -> Self {
        Self::with_referents(&["the film", "the movie"])
    }

    pub fn celebrity() -> Self {
        Self::with_referents(&["the actor", "the actress", "the director"])
    }

    pub fn with_referents(referents: &[&str]) -> Self {
        use AntecedentClass::*;
        let table = [
            ("he", PersonRequired),
            ("she", PersonRequired),
            ("him", PersonRequired),
            ("her", PersonRequired),
            ("his", PersonRequired),
            ("hers", PersonRequired),
            ("it", AnyEntity),
            ("its", AnyEntity),
            ("this", AnyEntity),
            ("that", AnyEntity),
            ("they", PluralEntity),
            ("them", PluralEntity),
            ("their", PluralEntity),
            ("theirs", PluralEntity),
        ];
        SelectionConfig {
            pronoun_table: table
                .into_iter()
                .map(|(p, c)| (p.to_string(), c))
                .collect(),
            definite_referents: referents.iter().map(|r| r.to_lowercase()).collect(),
            use_mentions_when_present: true,
        }
    }
}

impl Default for SelectionConfig {
    fn default() -> Self {
        Self::movie()
    }
}

/// Core Content Text: paragraph blocks only, in page order.
pub fn extract_cct(page: &PageDocument) -> Vec<String> {
    page.blocks
        .iter()
        .filter(|b| b.kind == BlockKind::Paragraph)
        .map(|b| b.text.clone())
        .collect()
}

fn ends_with_abbreviation(before: &str) -> bool {
    let word = before
        .rsplit(|c: char| c.is_whitespace() || c == '(' || c == '"')
        .next()
        .unwrap_or("")
        .to_lowercase();
    lexicon::abbreviations().contains(&word)
}

/// Splits on `.`, `!` or `?` followed by whitespace and an uppercase letter
/// (optionally behind an opening quote or bracket). Periods ending a bundled
/// abbreviation or sitting between two digits never split. Joining the output
/// with single spaces gives back the (whitespace-normalized) input.
pub fn split_sentences(paragraph: &str) -> Vec<String> {
    let chars: Vec<(usize, char)> = paragraph.char_indices().collect();
    let mut out = Vec::new();
    let mut start = 0;
    for (k, &(pos, c)) in chars.iter().enumerate() {
        if !matches!(c, '.' | '!' | '?') {
            continue;
        }
        let next = chars.get(k + 1).map(|&(_, c)| c);
        if !next.is_some_and(char::is_whitespace) {
            continue;
        }
        let mut j = k + 1;
        while j < chars.len() && chars[j].1.is_whitespace() {
            j += 1;
        }
        while j < chars.len() && matches!(chars[j].1, '"' | '\'' | '(' | '“' | '‘') {
            j += 1;
        }
        if !chars.get(j).is_some_and(|&(_, c)| c.is_uppercase()) {
            continue;
        }
        let end = pos + c.len_utf8();
        if c == '.' && ends_with_abbreviation(&paragraph[start..end]) {
            continue;
        }
        let sentence = paragraph[start..end].trim();
        if !sentence.is_empty() {
            out.push(sentence.to_string());
        }
        start = end;
    }
    let tail = paragraph[start..].trim();
    if !tail.is_empty() {
        out.push(tail.to_string());
    }
    out
}

fn is_referent(surface: &str, entity: &EntityRecord, cfg: &SelectionConfig) -> bool {
    let key = match_key(surface);
    entity.is_alias(surface) || cfg.definite_referents.iter().any(|r| match_key(r) == key)
}

/// Token ranges covered by aliases or definite referents of the target.
fn referent_spans(s: &AnnotatedSentence, entity: &EntityRecord, cfg: &SelectionConfig) -> Vec<(usize, usize)> {
    let phrases: Vec<Vec<String>> = entity
        .aliases
        .iter()
        .chain(&cfg.definite_referents)
        .map(|p| p.split_whitespace().map(str::to_lowercase).collect::<Vec<_>>())
        .filter(|p| !p.is_empty())
        .collect();
    let lower: Vec<String> = s.tokens.iter().map(|t| t.text.to_lowercase()).collect();
    let mut spans = Vec::new();
    for p in &phrases {
        if p.len() > lower.len() {
            continue;
        }
        for i in 0..=lower.len() - p.len() {
            if lower[i..i + p.len()] == p[..] {
                spans.push((i, i + p.len()));
            }
        }
    }
    spans
}

fn keeps_by_mentions(s: &AnnotatedSentence, entity: &EntityRecord, cfg: &SelectionConfig) -> bool {
    s.mentions.iter().flatten().all(|m| {
        m.in_sentence || is_referent(&s.span_text(m.start, m.end), entity, cfg)
    })
}

fn keeps_by_pronouns(s: &AnnotatedSentence, entity: &EntityRecord, cfg: &SelectionConfig) -> bool {
    let referents = referent_spans(s, entity, cfg);
    let inside_referent = |i: usize| referents.iter().any(|&(a, b)| a <= i && i < b);
    for (i, tok) in s.tokens.iter().enumerate() {
        let Some(&class) = cfg.pronoun_table.get(&tok.text.to_lowercase()) else {
            continue;
        };
        if inside_referent(i) {
            continue;
        }
        let earlier = &s.tokens[..i];
        let resolved = match class {
            AntecedentClass::PersonRequired => {
                earlier.iter().any(|t| t.ner.as_deref() == Some("PERSON"))
            }
            AntecedentClass::AnyEntity => {
                earlier.iter().any(|t| t.ner.is_some())
                    || referents.iter().any(|&(_, b)| b <= i)
            }
            AntecedentClass::PluralEntity => earlier.iter().any(|t| t.ner.is_some()),
        };
        if !resolved {
            return false;
        }
    }
    true
}

/// Keeps the sentences that are comprehensible in isolation. Ingested
/// coreference mentions decide when present (and enabled); otherwise a
/// pronoun/antecedent heuristic over the sentence's own tokens decides.
pub fn select_candidates(
    sentences: &[AnnotatedSentence],
    entity: &EntityRecord,
    cfg: &SelectionConfig,
) -> Vec<AnnotatedSentence> {
    sentences
        .iter()
        .filter(|s| {
            if cfg.use_mentions_when_present && s.mentions.is_some() {
                keeps_by_mentions(s, entity, cfg)
            } else {
                keeps_by_pronouns(s, entity, cfg)
            }
        })
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{fallback_annotate, Block, Mention, Token};
    use proptest::prelude::*;

    fn page(kinds: &[(BlockKind, &str)]) -> PageDocument {
        PageDocument {
            entity_id: "m".into(),
            blocks: kinds
                .iter()
                .map(|(k, t)| Block {
                    kind: *k,
                    text: t.to_string(),
                })
                .collect(),
        }
    }

    #[test]
    fn cct_keeps_paragraphs_only() {
        use BlockKind::*;
        let p = page(&[(Paragraph, "One."), (Infobox, "Box"), (Paragraph, "Two.")]);
        assert_eq!(extract_cct(&p), vec!["One.", "Two."]);
        assert!(extract_cct(&page(&[])).is_empty());
        assert!(extract_cct(&page(&[(List, "a"), (Table, "b")])).is_empty());
    }

    #[test]
    fn splits_on_terminal_punctuation() {
        assert_eq!(
            split_sentences("Alpha runs. Beta walks? Gamma sits."),
            vec!["Alpha runs.", "Beta walks?", "Gamma sits."]
        );
        assert!(split_sentences("").is_empty());
    }

    #[test]
    fn no_split_inside_numbers_or_abbreviations() {
        assert_eq!(
            split_sentences("It grossed $2.5 million. It won."),
            vec!["It grossed $2.5 million.", "It won."]
        );
        assert_eq!(
            split_sentences("Dr. Smith met Mr. Jones in the U.S. Army. They left."),
            vec!["Dr. Smith met Mr. Jones in the U.S. Army.", "They left."]
        );
        assert_eq!(split_sentences("It ended. then more."), vec!["It ended. then more."]);
    }

    /// Every candidate split point of the digit example, checked against the
    /// delimiter rule by enumeration.
    #[test]
    fn digit_rule_by_enumeration() {
        let text = "It grossed $2.5 million. It won.";
        let chars: Vec<char> = text.chars().collect();
        let expected: Vec<usize> = (0..chars.len())
            .filter(|&i| {
                matches!(chars[i], '.' | '!' | '?')
                    && chars.get(i + 1) == Some(&' ')
                    && chars.get(i + 2).is_some_and(|c| c.is_uppercase())
                    && !(i > 0 && chars[i - 1].is_ascii_digit() && chars.get(i + 1).is_some_and(|c| c.is_ascii_digit()))
            })
            .collect();
        assert_eq!(expected, vec![23]);
        assert_eq!(split_sentences(text).len(), expected.len() + 1);
    }

    proptest! {
        #[test]
        fn split_reconstructs_input(words in prop::collection::vec("[A-Za-z0-9]{1,6}[.!?,]?", 0..30)) {
            let text = words.join(" ");
            let parts = split_sentences(&text);
            prop_assert_eq!(parts.join(" "), text);
        }
    }

    fn tok(text: &str, ner: Option<&str>) -> Token {
        Token {
            text: text.into(),
            lemma: text.to_lowercase(),
            pos: "NN".into(),
            head: Some(0),
            deprel: "dep".into(),
            ner: ner.map(String::from),
        }
    }

    fn sentence(words: &[(&str, Option<&str>)]) -> AnnotatedSentence {
        let mut tokens: Vec<Token> = words.iter().map(|(w, n)| tok(w, *n)).collect();
        tokens[0].head = None;
        for t in tokens.iter_mut().skip(1) {
            t.head = Some(0);
        }
        AnnotatedSentence {
            entity_id: "forrest_gump".into(),
            sentence_id: words.iter().map(|w| w.0).collect::<Vec<_>>().join("_"),
            raw: words.iter().map(|w| w.0).collect::<Vec<_>>().join(" "),
            tokens,
            mentions: None,
            gold_label: None,
        }
    }

    fn forrest() -> EntityRecord {
        EntityRecord::bare("forrest_gump").with_display_name("Forrest Gump")
    }

    #[test]
    fn pronoun_heuristic_examples() {
        let cfg = SelectionConfig::default();
        let e = forrest();
        let it = sentence(&[("It", None), ("really", None), ("reminds", None), ("me", None), ("of", None), ("my", None), ("childhood", None), (".", None)]);
        let hanks = sentence(&[
            ("Hanks", Some("PERSON")), ("revealed", None), ("that", None), ("he", None),
            ("signed", None), ("onto", None), ("the", None), ("film", None), (".", None),
        ]);
        let he = sentence(&[("He", None), ("initially", None), ("wanted", None), ("to", None), ("ease", None), ("Forrest", Some("PERSON")), ("accent", None)]);
        let kept = select_candidates(&[it, hanks.clone(), he], &e, &cfg);
        assert_eq!(kept, vec![hanks]);
    }

    #[test]
    fn referent_mentions_do_not_drop() {
        let cfg = SelectionConfig::default();
        let mut s = sentence(&[("The", None), ("film", None), ("won", None), (".", None)]);
        s.mentions = Some(vec![Mention { start: 0, end: 2, chain_id: "c".into(), in_sentence: false }]);
        assert_eq!(select_candidates(&[s.clone()], &forrest(), &cfg).len(), 1);

        let mut t = sentence(&[("He", None), ("won", None), (".", None)]);
        t.mentions = Some(vec![Mention { start: 0, end: 1, chain_id: "c".into(), in_sentence: false }]);
        assert!(select_candidates(&[t.clone()], &forrest(), &cfg).is_empty());

        t.mentions.as_mut().unwrap()[0].in_sentence = true;
        assert_eq!(select_candidates(&[t.clone()], &forrest(), &cfg).len(), 1);
        let heuristic = SelectionConfig { use_mentions_when_present: false, ..cfg };
        assert!(select_candidates(&[t], &forrest(), &heuristic).is_empty());
    }

    #[test]
    fn alias_antecedent_resolves_it() {
        let cfg = SelectionConfig::default();
        let e = forrest();
        let s = fallback_annotate("Forrest Gump was a hit and it won six Oscars.", &e).unwrap();
        assert_eq!(select_candidates(&[s], &e, &cfg).len(), 1);
        let s = fallback_annotate("The film made money because it was charming.", &e).unwrap();
        assert_eq!(select_candidates(&[s], &e, &cfg).len(), 1);
        let s = fallback_annotate("They filmed in Savannah.", &e).unwrap();
        assert!(select_candidates(&[s], &e, &cfg).is_empty());
    }

    fn word_sentence() -> impl Strategy<Value = AnnotatedSentence> {
        prop::collection::vec(
            (prop::sample::select(vec!["he", "it", "film", "Tom", "won", "they", "the", "prize"]), any::<bool>()),
            1..8,
        )
        .prop_map(|ws| {
            let words: Vec<(&str, Option<&str>)> = ws
                .iter()
                .map(|(w, ne)| (*w, (*ne && w.starts_with(char::is_uppercase)).then_some("PERSON")))
                .collect();
            sentence(&words)
        })
    }

    proptest! {
        #[test]
        fn selection_is_idempotent_subsequence(ss in prop::collection::vec(word_sentence(), 0..8)) {
            let cfg = SelectionConfig::default();
            let e = forrest();
            let once = select_candidates(&ss, &e, &cfg);
            let twice = select_candidates(&once, &e, &cfg);
            prop_assert_eq!(&once, &twice);
            let mut it = ss.iter();
            for s in &once {
                prop_assert!(it.any(|x| x == s));
            }
            let no_mentions = SelectionConfig { use_mentions_when_present: false, ..cfg.clone() };
            prop_assert_eq!(select_candidates(&ss, &e, &no_mentions), once);
        }

        #[test]
        fn pronoun_free_sentences_survive(ws in prop::collection::vec(prop::sample::select(vec!["film", "won", "prize", "Tom", "six"]), 1..8)) {
            let s = sentence(&ws.iter().map(|w| (*w, None)).collect::<Vec<_>>());
            prop_assert_eq!(select_candidates(&[s], &forrest(), &SelectionConfig::default()).len(), 1);
        }
    }
}
