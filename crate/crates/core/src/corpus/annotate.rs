//! Shallow, fully deterministic annotator used when no annotation file covers
//! a sentence. Every rule is a lexicon lookup or a suffix test; there is no
//! learned model, so the output is identical on every platform.

use sha2::{Digest, Sha256};

use super::{match_key, normalize_text, AnnotatedSentence, EntityRecord, Token};
use crate::error::{Error, Result};
use crate::lexicon;

const CURRENCY: &[char] = &['$', '£', '€', '¥'];
const MAGNITUDES: &[&str] = &["million", "billion", "trillion"];

const PRONOUNS: &[&str] = &[
    "i", "you", "he", "she", "it", "we", "they", "me", "him", "us", "them",
];
const POSSESSIVES: &[&str] = &["my", "your", "his", "her", "its", "our", "their", "hers", "theirs"];
const DETERMINERS: &[&str] = &[
    "the", "a", "an", "this", "that", "these", "those", "every", "each", "some", "any", "no",
];
const PREPOSITIONS: &[&str] = &[
    "of", "in", "on", "at", "by", "for", "with", "from", "to", "into", "onto", "after", "before",
    "during", "about", "over", "under", "than", "as", "since", "because", "while", "through",
    "between", "against", "without", "within", "like", "unlike", "although", "though", "despite",
    "whereas", "upon",
];
const CONJUNCTIONS: &[&str] = &["and", "or", "but", "nor", "yet"];
const MODALS: &[&str] = &[
    "can", "could", "will", "would", "shall", "should", "may", "might", "must",
];

/// Bundled superlative words (the `-est` rule covers the rest).
pub fn superlative_lexicon() -> impl Iterator<Item = &'static str> {
    lexicon::superlatives().iter().map(String::as_str)
}

fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for chunk in text.split_whitespace() {
        let chars: Vec<char> = chunk.chars().collect();
        let mut start = 0;
        let mut end = chars.len();
        while start < end && !chars[start].is_alphanumeric() {
            out.push(chars[start].to_string());
            start += 1;
        }
        let mut trailing = Vec::new();
        while end > start && !chars[end - 1].is_alphanumeric() {
            trailing.push(chars[end - 1].to_string());
            end -= 1;
        }
        if start < end {
            let word: String = chars[start..end].iter().collect();
            let lower = word.to_lowercase();
            if word.chars().count() > 2 && (lower.ends_with("'s") || lower.ends_with("’s")) {
                let cut = word.len() - word.chars().rev().take(2).map(char::len_utf8).sum::<usize>();
                out.push(word[..cut].to_string());
                out.push(word[cut..].to_string());
            } else {
                out.push(word);
            }
        }
        out.extend(trailing.into_iter().rev());
    }
    out
}

fn is_number(word: &str) -> bool {
    word.starts_with(|c: char| c.is_ascii_digit())
        && word.chars().all(|c| c.is_ascii_digit() || c == ',' || c == '.')
}

fn is_alpha(word: &str) -> bool {
    !word.is_empty() && word.chars().all(char::is_alphabetic)
}

fn is_capitalized(word: &str) -> bool {
    word.chars().next().is_some_and(char::is_uppercase)
}

fn is_superlative_form(lower: &str) -> bool {
    lexicon::superlatives().contains(lower)
        || (lower.chars().count() >= 5
            && lower.ends_with("est")
            && is_alpha(lower)
            && !lexicon::est_exceptions().contains(lower))
}

fn is_ed_verb(lower: &str) -> bool {
    lower.chars().count() >= 4
        && lower.ends_with("ed")
        && is_alpha(lower)
        && !lexicon::ed_exceptions().contains(lower)
}

fn is_verb_tag(tag: &str) -> bool {
    matches!(tag, "VBD" | "VBZ" | "VBP")
}

fn base_tag(word: &str, lower: &str, initial: bool) -> &'static str {
    if CURRENCY.iter().any(|c| word == c.to_string()) {
        return "$";
    }
    if !word.chars().any(char::is_alphanumeric) {
        return match word {
            "." | "!" | "?" => ".",
            "," => ",",
            _ => ":",
        };
    }
    if is_number(word) {
        return "CD";
    }
    if lower == "'s" || lower == "’s" {
        return "POS";
    }
    if let Some(v) = lexicon::irregular_verbs().get(lower) {
        return v.tag;
    }
    if PRONOUNS.contains(&lower) {
        return "PRP";
    }
    if POSSESSIVES.contains(&lower) {
        return "PRP$";
    }
    if DETERMINERS.contains(&lower) {
        return "DT";
    }
    if CONJUNCTIONS.contains(&lower) {
        return "CC";
    }
    if PREPOSITIONS.contains(&lower) {
        return "IN";
    }
    if MODALS.contains(&lower) {
        return "MD";
    }
    if is_superlative_form(lower) {
        return "JJS";
    }
    if is_capitalized(word) && !initial {
        return "NNP";
    }
    if is_ed_verb(lower) {
        return "VBD";
    }
    "NN"
}

fn undouble(stem: &str) -> String {
    let b = stem.as_bytes();
    let n = b.len();
    if n >= 3 && b[n - 1] == b[n - 2] && !b"aeioulsz".contains(&b[n - 1]) {
        stem[..n - 1].to_string()
    } else {
        stem.to_string()
    }
}

fn lemmatize(lower: &str, tag: &str) -> String {
    if let Some(v) = lexicon::irregular_verbs().get(lower) {
        return v.lemma.to_string();
    }
    if !matches!(tag, "NN" | "VBD" | "VBZ" | "VBP") || !is_alpha(lower) {
        return lower.to_string();
    }
    let n = lower.len();
    if n > 4 && (lower.ends_with("ies") || lower.ends_with("ied")) {
        return format!("{}y", &lower[..n - 3]);
    }
    if lower.ends_with("sses") {
        return lower[..n - 2].to_string();
    }
    if n > 5 && lower.ends_with("ing") {
        return undouble(&lower[..n - 3]);
    }
    if n > 3 && tag == "VBD" && lower.ends_with("ed") {
        let stem = &lower[..n - 2];
        if ["v", "iz", "is", "at", "ur", "ag"].iter().any(|s| stem.ends_with(s)) {
            return format!("{stem}e");
        }
        return undouble(stem);
    }
    if n > 3 && lower.ends_with('s') && !lower.ends_with("ss") && !lower.ends_with("us") && !lower.ends_with("is") {
        return lower[..n - 1].to_string();
    }
    lower.to_string()
}

/// NE type implied by the knowledge-base attribute a span links to.
fn attribute_ne_type(attribute: &str) -> &'static str {
    const PERSON: &[&str] = &[
        "actor", "actress", "cast", "starring", "director", "writer", "producer", "composer",
        "cinematographer", "editor", "narrator", "creator", "spouse", "partner", "parent",
        "child", "sibling", "birthname", "birth_name",
    ];
    const ORGANIZATION: &[&str] = &[
        "studio", "distributor", "company", "production_company", "network", "label",
        "organization",
    ];
    const LOCATION: &[&str] = &["country", "location", "city", "birthplace", "birth_place", "filming_location"];
    let a = attribute.to_lowercase();
    if PERSON.contains(&a.as_str()) {
        "PERSON"
    } else if ORGANIZATION.contains(&a.as_str()) {
        "ORGANIZATION"
    } else if LOCATION.contains(&a.as_str()) {
        "LOCATION"
    } else {
        "MISC"
    }
}

fn kb_ne_type(entity: &EntityRecord, surface: &str) -> Option<&'static str> {
    let types: Vec<&'static str> = entity
        .attributes_matching(surface)
        .into_iter()
        .map(attribute_ne_type)
        .collect();
    ["PERSON", "ORGANIZATION", "LOCATION", "MISC"]
        .into_iter()
        .find(|t| types.contains(t))
}

/// True when `word` is the last name of a person-valued KB attribute.
fn is_kb_surname(entity: &EntityRecord, word: &str) -> bool {
    let key = match_key(word);
    entity.attributes.iter().any(|(name, values)| {
        attribute_ne_type(name) == "PERSON"
            && values.iter().any(|v| match v.rsplit_once(' ') {
                Some((_, last)) => match_key(last) == key,
                None => false,
            })
    })
}

fn sentence_id_for(entity_id: &str, raw: &str) -> String {
    let digest = Sha256::digest(raw.as_bytes());
    let hex: String = digest[..6].iter().map(|b| format!("{b:02x}")).collect();
    format!("{entity_id}#fb-{hex}")
}

/// Annotates `raw` with whitespace/punctuation tokens, lexicon POS tags,
/// suffix-rule lemmas, pattern NEs and a flat dependency tree whose root is
/// the first finite verb candidate.
pub fn fallback_annotate(raw: &str, entity: &EntityRecord) -> Result<AnnotatedSentence> {
    let raw = normalize_text(raw);
    if raw.is_empty() {
        return Err(Error::EmptyInput);
    }
    let words = tokenize(&raw);
    let lower: Vec<String> = words.iter().map(|w| w.to_lowercase()).collect();
    let initial = words
        .iter()
        .position(|w| w.chars().any(char::is_alphanumeric))
        .unwrap_or(0);

    let mut tags: Vec<&str> = words
        .iter()
        .zip(&lower)
        .enumerate()
        .map(|(i, (w, l))| base_tag(w, l, i == initial))
        .collect();
    for i in 0..words.len() {
        if (lower[i] == "most" || lower[i] == "least") && i + 1 < words.len() {
            let next = &lower[i + 1];
            if is_alpha(next) && !is_capitalized(&words[i + 1]) && !lexicon::stopwords().contains(next) {
                tags[i] = "RBS";
            }
        }
    }

    let mut ner: Vec<Option<String>> = vec![None; words.len()];
    for i in 0..words.len() {
        if tags[i] == "$" && i + 1 < words.len() && is_number(&words[i + 1]) {
            ner[i] = Some("MONEY".into());
            ner[i + 1] = Some("MONEY".into());
        }
        if is_number(&words[i]) && i + 1 < words.len() && MAGNITUDES.contains(&lower[i + 1].as_str()) {
            ner[i] = Some("MONEY".into());
            ner[i + 1] = Some("MONEY".into());
            if i > 0 && tags[i - 1] == "$" {
                ner[i - 1] = Some("MONEY".into());
            }
        }
    }

    let in_run = |i: usize, tags: &[&str]| {
        is_capitalized(&words[i])
            && words[i].chars().next().is_some_and(char::is_alphabetic)
            && matches!(tags[i], "NN" | "NNP" | "JJS")
    };
    let mut i = 0;
    while i < words.len() {
        if !in_run(i, &tags) || ner[i].is_some() {
            i += 1;
            continue;
        }
        let start = i;
        while i < words.len() && in_run(i, &tags) && ner[i].is_none() {
            i += 1;
        }
        let end = i;
        let surface = |s: usize| words[s..end].join(" ");
        let mut tagged = false;
        let mut starts = vec![start, start + 1];
        if start > 0 && lower[start - 1] == "the" {
            starts.insert(0, start - 1);
        }
        for s in starts {
            if s >= end {
                break;
            }
            if let Some(t) = kb_ne_type(entity, &surface(s)) {
                for n in &mut ner[s..end] {
                    *n = Some(t.to_string());
                }
                tagged = true;
                break;
            }
            if entity.is_alias(&surface(s)) {
                tagged = true;
                break;
            }
        }
        if !tagged {
            // A capitalized sentence opener is only a name if the KB says so.
            let opener_is_name = start == initial && end == start + 1 && is_kb_surname(entity, &words[start]);
            let s = if start == initial && !opener_is_name { start + 1 } else { start };
            for n in ner.iter_mut().take(end).skip(s) {
                *n = Some("PERSON".into());
            }
        }
    }

    let root = tags
        .iter()
        .position(|t| is_verb_tag(t))
        .or_else(|| words.iter().position(|w| w.chars().any(char::is_alphanumeric)))
        .unwrap_or(0);
    let subject = (0..root)
        .rev()
        .find(|&j| matches!(tags[j], "NN" | "NNP" | "PRP") && ner[j].as_deref() != Some("MONEY"));

    let tokens = words
        .iter()
        .enumerate()
        .map(|(j, w)| {
            let deprel = if j == root {
                "root"
            } else if Some(j) == subject {
                "nsubj"
            } else if tags[j].chars().all(|c| !c.is_alphanumeric()) && tags[j] != "$" {
                "punct"
            } else {
                "dep"
            };
            Token {
                text: w.clone(),
                lemma: lemmatize(&lower[j], tags[j]),
                pos: tags[j].to_string(),
                head: (j != root).then_some(root),
                deprel: deprel.to_string(),
                ner: ner[j].clone(),
            }
        })
        .collect();

    Ok(AnnotatedSentence {
        entity_id: entity.entity_id.clone(),
        sentence_id: sentence_id_for(&entity.entity_id, &raw),
        raw,
        tokens,
        mentions: None,
        gold_label: None,
    })
}
