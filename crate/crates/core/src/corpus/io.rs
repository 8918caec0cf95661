use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};

use super::{
    normalize_text, AnnotatedSentence, Block, EntityRecord, GoldLabel, Mention, PageDocument,
    Token, TriviaRecord,
};
use crate::error::{Error, Result};

const ALIAS_ATTRIBUTE: &str = "__alias";
const POPULARITY_ATTRIBUTE: &str = "__popularity";

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Non-blank lines with their 1-based line numbers.
fn lines(src: &str) -> impl Iterator<Item = (usize, &str)> {
    src.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_line<'a, T: Deserialize<'a>>(line_no: usize, line: &'a str) -> Result<T> {
    serde_json::from_str(line).map_err(|e| Error::malformed(line_no, e.to_string()))
}

#[derive(Deserialize)]
struct RawTrivia {
    entity_id: String,
    text: String,
    votes_interesting: u64,
    votes_total: u64,
    #[serde(default)]
    source: Option<String>,
}

pub fn load_trivia(path: impl AsRef<Path>) -> Result<Vec<TriviaRecord>> {
    parse_trivia(&read(path.as_ref())?)
}

pub fn parse_trivia(src: &str) -> Result<Vec<TriviaRecord>> {
    let mut out = Vec::new();
    for (no, line) in lines(src) {
        let raw: RawTrivia = parse_line(no, line)?;
        let text = normalize_text(&raw.text);
        if text.is_empty() {
            return Err(Error::malformed(no, "empty text"));
        }
        if raw.entity_id.trim().is_empty() {
            return Err(Error::malformed(no, "empty entity_id"));
        }
        if raw.votes_interesting > raw.votes_total {
            return Err(Error::VoteInversion {
                line: no,
                interesting: raw.votes_interesting,
                total: raw.votes_total,
            });
        }
        out.push(TriviaRecord {
            entity_id: raw.entity_id,
            text,
            votes_interesting: raw.votes_interesting,
            votes_total: raw.votes_total,
            source: raw.source.unwrap_or_default(),
        });
    }
    Ok(out)
}

pub fn write_trivia(records: &[TriviaRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("trivia serializes"));
        out.push('\n');
    }
    out
}

#[derive(Deserialize)]
struct RawKbLine {
    entity_id: String,
    #[serde(default)]
    display_name: Option<String>,
    #[serde(default)]
    attribute: Option<String>,
    #[serde(default)]
    value: Option<Value>,
    #[serde(default)]
    aliases: Option<Vec<String>>,
    #[serde(default)]
    attributes: Option<BTreeMap<String, Vec<String>>>,
    #[serde(default)]
    popularity: Option<f64>,
}

#[derive(Default)]
struct KbAccumulator {
    display_name: Option<String>,
    aliases: BTreeSet<String>,
    attributes: BTreeMap<String, BTreeSet<String>>,
    popularity: Option<f64>,
}

impl KbAccumulator {
    fn add_value(&mut self, no: usize, attribute: &str, value: &str) -> Result<()> {
        let attribute = attribute.trim();
        if attribute.is_empty() {
            return Err(Error::malformed(no, "empty attribute name"));
        }
        let value = normalize_text(value);
        if value.is_empty() {
            return Err(Error::malformed(no, format!("empty value for {attribute}")));
        }
        if attribute == ALIAS_ATTRIBUTE {
            self.aliases.insert(value);
        } else {
            self.attributes
                .entry(attribute.to_string())
                .or_default()
                .insert(value);
        }
        Ok(())
    }

    fn add_popularity(&mut self, no: usize, p: f64) -> Result<()> {
        if !(p.is_finite() && p >= 0.0) {
            return Err(Error::malformed(no, format!("invalid popularity {p}")));
        }
        self.popularity = Some(self.popularity.map_or(p, |q| q.max(p)));
        Ok(())
    }
}

pub fn load_knowledge_base(path: impl AsRef<Path>) -> Result<BTreeMap<String, EntityRecord>> {
    parse_knowledge_base(&read(path.as_ref())?)
}

/// Parses triple lines (`attribute`/`value`) and grouped lines
/// (`aliases`/`attributes`/`popularity`). Repeated values union into sets, so
/// the result does not depend on line order.
pub fn parse_knowledge_base(src: &str) -> Result<BTreeMap<String, EntityRecord>> {
    let mut acc: BTreeMap<String, KbAccumulator> = BTreeMap::new();
    for (no, line) in lines(src) {
        let raw: RawKbLine = parse_line(no, line)?;
        if raw.entity_id.trim().is_empty() {
            return Err(Error::malformed(no, "empty entity_id"));
        }
        let entry = acc.entry(raw.entity_id.clone()).or_default();
        if let Some(name) = raw.display_name.as_deref().map(normalize_text) {
            if name.is_empty() {
                return Err(Error::malformed(no, "empty display_name"));
            }
            match &entry.display_name {
                Some(prev) if *prev != name => {
                    let (first, second) = if *prev < name {
                        (prev.clone(), name)
                    } else {
                        (name, prev.clone())
                    };
                    return Err(Error::DuplicateEntityConflict {
                        entity_id: raw.entity_id,
                        first,
                        second,
                    });
                }
                _ => entry.display_name = Some(name),
            }
        }
        match (raw.attribute.as_deref(), raw.value.as_ref()) {
            (Some(POPULARITY_ATTRIBUTE), Some(v)) => {
                let p = match v {
                    Value::Number(n) => n.as_f64(),
                    Value::String(s) => s.trim().parse().ok(),
                    _ => None,
                }
                .ok_or_else(|| Error::malformed(no, "popularity must be numeric"))?;
                entry.add_popularity(no, p)?;
            }
            (Some(attr), Some(Value::String(v))) => entry.add_value(no, attr, v)?,
            (Some(_), Some(other)) => {
                return Err(Error::malformed(no, format!("value must be a string, got {other}")))
            }
            (Some(_), None) => return Err(Error::malformed(no, "attribute without value")),
            (None, Some(_)) => return Err(Error::malformed(no, "value without attribute")),
            (None, None) => {}
        }
        for alias in raw.aliases.iter().flatten() {
            entry.add_value(no, ALIAS_ATTRIBUTE, alias)?;
        }
        for (attr, values) in raw.attributes.iter().flatten() {
            for v in values {
                entry.add_value(no, attr, v)?;
            }
        }
        if let Some(p) = raw.popularity {
            entry.add_popularity(no, p)?;
        }
    }
    Ok(acc
        .into_iter()
        .map(|(id, a)| {
            let display_name = a.display_name.unwrap_or_else(|| id.clone());
            let mut aliases = a.aliases;
            aliases.insert(display_name.clone());
            let record = EntityRecord {
                entity_id: id.clone(),
                display_name,
                aliases: aliases.into_iter().collect(),
                attributes: a.attributes,
                popularity: a.popularity,
            };
            (id, record)
        })
        .collect())
}

#[derive(Deserialize)]
struct RawToken {
    text: String,
    #[serde(default)]
    lemma: Option<String>,
    pos: String,
    head: i64,
    #[serde(default)]
    deprel: Option<String>,
    #[serde(default)]
    ner: Option<String>,
}

#[derive(Deserialize)]
struct RawSentence {
    entity_id: String,
    sentence_id: String,
    raw: String,
    tokens: Vec<RawToken>,
    #[serde(default)]
    mentions: Option<Vec<Mention>>,
    #[serde(default)]
    gold_label: Option<i64>,
}

fn ner_tag(raw: Option<String>) -> Option<String> {
    raw.filter(|t| !matches!(t.as_str(), "" | "O" | "NONE"))
}

pub fn load_annotations(path: impl AsRef<Path>) -> Result<Vec<AnnotatedSentence>> {
    parse_annotations(&read(path.as_ref())?)
}

pub fn parse_annotations(src: &str) -> Result<Vec<AnnotatedSentence>> {
    lines(src)
        .map(|(no, line)| {
            let raw: RawSentence = parse_line(no, line)?;
            sentence_from_raw(no, raw)
        })
        .collect()
}

fn sentence_from_raw(no: usize, raw: RawSentence) -> Result<AnnotatedSentence> {
    let len = raw.tokens.len();
    if len == 0 {
        return Err(Error::malformed(no, "sentence has no tokens"));
    }
    let mut tokens = Vec::with_capacity(len);
    for (i, t) in raw.tokens.into_iter().enumerate() {
        if t.pos.trim().is_empty() {
            return Err(Error::malformed(no, format!("token {i} has empty pos")));
        }
        let head = match t.head {
            -1 => None,
            h if h < 0 || h as usize >= len || h as usize == i => {
                return Err(Error::DanglingHead {
                    sentence_id: raw.sentence_id,
                    token: i,
                    head: h,
                    len,
                })
            }
            h => Some(h as usize),
        };
        let text = normalize_text(&t.text);
        tokens.push(Token {
            lemma: t.lemma.unwrap_or_else(|| text.to_lowercase()),
            text,
            pos: t.pos,
            head,
            deprel: t.deprel.unwrap_or_else(|| "dep".into()),
            ner: ner_tag(t.ner),
        });
    }

    let roots: Vec<usize> = tokens
        .iter()
        .enumerate()
        .filter(|(_, t)| t.is_root())
        .map(|(i, _)| i)
        .collect();
    let Some(&root) = roots.first() else {
        return Err(Error::NoRoot {
            sentence_id: raw.sentence_id,
        });
    };
    if roots.len() > 1 {
        log::warn!(
            "sentence {}: {} ROOT tokens, keeping token {root}",
            raw.sentence_id,
            roots.len()
        );
        for &extra in &roots[1..] {
            tokens[extra].head = Some(root);
        }
    }

    if let Some(mentions) = &raw.mentions {
        let mut by_chain: HashMap<&str, Vec<(usize, usize)>> = HashMap::new();
        for m in mentions {
            if m.start >= m.end || m.end > len {
                return Err(Error::malformed(
                    no,
                    format!("mention {}..{} outside 0..{len}", m.start, m.end),
                ));
            }
            let spans = by_chain.entry(m.chain_id.as_str()).or_default();
            if spans.iter().any(|&(s, e)| m.start < e && s < m.end) {
                return Err(Error::malformed(
                    no,
                    format!("overlapping mentions in chain {}", m.chain_id),
                ));
            }
            spans.push((m.start, m.end));
        }
    }

    let gold_label = match raw.gold_label {
        None => None,
        Some(v) => Some(
            GoldLabel::from_int(v)
                .ok_or_else(|| Error::malformed(no, format!("gold_label must be 0 or 1, got {v}")))?,
        ),
    };

    Ok(AnnotatedSentence {
        entity_id: raw.entity_id,
        sentence_id: raw.sentence_id,
        raw: normalize_text(&raw.raw),
        tokens,
        mentions: raw.mentions,
        gold_label,
    })
}

fn sentence_json(s: &AnnotatedSentence) -> Value {
    let tokens: Vec<Value> = s
        .tokens
        .iter()
        .map(|t| {
            json!({
                "text": t.text,
                "lemma": t.lemma,
                "pos": t.pos,
                "head": t.head.map_or(-1, |h| h as i64),
                "deprel": t.deprel,
                "ner": t.ner.as_deref().unwrap_or("O"),
            })
        })
        .collect();
    let mut obj = json!({
        "entity_id": s.entity_id,
        "sentence_id": s.sentence_id,
        "raw": s.raw,
        "tokens": tokens,
    });
    if let Some(m) = &s.mentions {
        obj["mentions"] = json!(m);
    }
    if let Some(g) = s.gold_label {
        obj["gold_label"] = json!(g.as_int());
    }
    obj
}

/// Serializes sentences in the annotation JSONL schema.
pub fn write_annotations(sentences: &[AnnotatedSentence]) -> String {
    let mut out = String::new();
    for s in sentences {
        out.push_str(&sentence_json(s).to_string());
        out.push('\n');
    }
    out
}

pub fn load_pages(path: impl AsRef<Path>) -> Result<Vec<PageDocument>> {
    parse_pages(&read(path.as_ref())?)
}

pub fn parse_pages(src: &str) -> Result<Vec<PageDocument>> {
    lines(src)
        .map(|(no, line)| {
            let mut page: PageDocument = parse_line(no, line)?;
            for b in &mut page.blocks {
                b.text = normalize_text(&b.text);
            }
            page.blocks.retain(|b: &Block| !b.text.is_empty());
            Ok(page)
        })
        .collect()
}
