//! Domain records and the ingestion of trivia, knowledge-base, annotation and
//! page files.
//!
//! Every text field is normalized on the way in (Unicode NFC, internal
//! whitespace runs collapsed to one space, trimmed) so that records hash and
//! compare stably regardless of how the producer encoded them.

mod annotate;
mod io;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

pub use annotate::{fallback_annotate, superlative_lexicon};
pub use io::{
    load_annotations, load_knowledge_base, load_pages, load_trivia, parse_annotations,
    parse_knowledge_base, parse_pages, parse_trivia, write_annotations, write_trivia,
};

/// NFC-normalize and collapse whitespace runs.
pub fn normalize_text(text: &str) -> String {
    let nfc: String = text.nfc().collect();
    nfc.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Key used for exact entity matching: lowercase with all whitespace removed.
pub fn match_key(text: &str) -> String {
    normalize_text(text)
        .chars()
        .filter(|c| !c.is_whitespace())
        .flat_map(char::to_lowercase)
        .collect()
}

/// A training trivium with its crowd votes ("X of Y found this interesting").
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriviaRecord {
    pub entity_id: String,
    pub text: String,
    pub votes_interesting: u64,
    pub votes_total: u64,
    #[serde(default)]
    pub source: String,
}

/// Knowledge-base view of one entity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntityRecord {
    pub entity_id: String,
    pub display_name: String,
    /// Sorted, deduplicated; always contains `display_name`.
    pub aliases: Vec<String>,
    pub attributes: BTreeMap<String, BTreeSet<String>>,
    pub popularity: Option<f64>,
}

impl EntityRecord {
    /// An entity with no attributes; used when a trivium or page refers to an
    /// entity the knowledge base does not list.
    pub fn bare(entity_id: &str) -> Self {
        EntityRecord {
            entity_id: entity_id.to_string(),
            display_name: entity_id.to_string(),
            aliases: vec![entity_id.to_string()],
            attributes: BTreeMap::new(),
            popularity: None,
        }
    }

    pub fn with_display_name(mut self, name: &str) -> Self {
        self.display_name = normalize_text(name);
        if !self.aliases.contains(&self.display_name) {
            self.aliases.push(self.display_name.clone());
            self.aliases.sort();
        }
        self
    }

    pub fn with_alias(mut self, alias: &str) -> Self {
        let alias = normalize_text(alias);
        if !self.aliases.contains(&alias) {
            self.aliases.push(alias);
            self.aliases.sort();
        }
        self
    }

    pub fn with_attribute(mut self, attribute: &str, value: &str) -> Self {
        self.attributes
            .entry(attribute.to_string())
            .or_default()
            .insert(normalize_text(value));
        self
    }

    /// Attribute names whose value set holds `surface` under [`match_key`].
    pub fn attributes_matching(&self, surface: &str) -> Vec<&str> {
        let key = match_key(surface);
        if key.is_empty() {
            return Vec::new();
        }
        self.attributes
            .iter()
            .filter(|(_, values)| values.iter().any(|v| match_key(v) == key))
            .map(|(name, _)| name.as_str())
            .collect()
    }

    pub fn is_alias(&self, surface: &str) -> bool {
        let key = match_key(surface);
        self.aliases.iter().any(|a| match_key(a) == key)
    }
}

/// One token of a parsed sentence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub lemma: String,
    pub pos: String,
    /// `None` marks the ROOT attachment.
    pub head: Option<usize>,
    pub deprel: String,
    /// `None` when the token is outside every named entity.
    pub ner: Option<String>,
}

impl Token {
    pub fn is_root(&self) -> bool {
        self.head.is_none()
    }

    pub fn is_punct(&self) -> bool {
        !self.text.chars().any(char::is_alphanumeric)
    }
}

/// A coreference mention inside one sentence; `end` is exclusive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mention {
    pub start: usize,
    pub end: usize,
    pub chain_id: String,
    /// Whether the chain has an antecedent inside the same sentence.
    pub in_sentence: bool,
}

/// Gold interestingness label on the two-point scale.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GoldLabel {
    Boring = 0,
    Interesting = 1,
}

impl GoldLabel {
    pub fn from_int(v: i64) -> Option<Self> {
        match v {
            0 => Some(GoldLabel::Boring),
            1 => Some(GoldLabel::Interesting),
            _ => None,
        }
    }

    pub fn as_int(self) -> u8 {
        self as u8
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnnotatedSentence {
    pub entity_id: String,
    pub sentence_id: String,
    pub raw: String,
    pub tokens: Vec<Token>,
    pub mentions: Option<Vec<Mention>>,
    pub gold_label: Option<GoldLabel>,
}

impl AnnotatedSentence {
    /// Index of the root token. Loaded and annotated sentences always have one.
    pub fn root(&self) -> Option<usize> {
        self.tokens.iter().position(Token::is_root)
    }

    /// Surface text of tokens `start..end`, joined by single spaces.
    pub fn span_text(&self, start: usize, end: usize) -> String {
        self.tokens[start..end]
            .iter()
            .map(|t| t.text.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Maximal runs of consecutive tokens sharing one NE type.
    pub fn ne_spans(&self) -> Vec<NeSpan> {
        let mut spans = Vec::new();
        let mut i = 0;
        while i < self.tokens.len() {
            let Some(kind) = self.tokens[i].ner.clone() else {
                i += 1;
                continue;
            };
            let start = i;
            while i < self.tokens.len() && self.tokens[i].ner.as_deref() == Some(kind.as_str()) {
                i += 1;
            }
            spans.push(NeSpan {
                start,
                end: i,
                kind,
            });
        }
        spans
    }

    /// The token of `start..end` whose head lies outside the span (the span's
    /// syntactic head). Falls back to the first token for cyclic input.
    pub fn span_head(&self, start: usize, end: usize) -> usize {
        (start..end)
            .find(|&i| match self.tokens[i].head {
                None => true,
                Some(h) => h < start || h >= end,
            })
            .unwrap_or(start)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeSpan {
    pub start: usize,
    pub end: usize,
    pub kind: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockKind {
    Paragraph,
    Infobox,
    Table,
    ImageCaption,
    List,
    Reference,
    LinkCluster,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub kind: BlockKind,
    pub text: String,
}

/// An entity page, pre-segmented into typed blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageDocument {
    pub entity_id: String,
    pub blocks: Vec<Block>,
}
