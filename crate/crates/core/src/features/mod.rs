//! Sentence featurization over three blocks: unigram TF-IDF (U), linguistic
//! cues (L) and knowledge-base entity links (E).

mod fog;
mod space;
mod vector;

use std::collections::{BTreeMap, BTreeSet};

use sha2::{Digest, Sha256};

use crate::corpus::{AnnotatedSentence, EntityRecord};
use crate::error::{Error, Result};
use crate::lexicon;

pub use fog::{count_syllables, fog_bin, fog_index, is_complex, is_word, Fog, FogBin};
pub use space::{BlockSet, BlockTag, FeatureSpace, SPACE_FORMAT_VERSION};
pub use vector::{parse_letor, write_letor, FeatureVector, SparseVec};

pub const SUPER_POS: &str = "superPOS";
pub const CONTRADICTION: &str = "contradiction";

/// Word lists and thresholds the featurizer depends on.
#[derive(Clone, Debug, PartialEq)]
pub struct Lexicons {
    pub stopwords: BTreeSet<String>,
    pub contradictions: BTreeSet<String>,
    pub superlative_tags: BTreeSet<String>,
    pub fog_bins: (f64, f64),
}

impl Default for Lexicons {
    fn default() -> Self {
        Lexicons {
            stopwords: lexicon::stopwords().clone(),
            contradictions: lexicon::word_set(lexicon::CONTRADICTIONS),
            superlative_tags: ["JJS", "RBS"].into_iter().map(String::from).collect(),
            fog_bins: (7.0, 15.0),
        }
    }
}

impl Lexicons {
    /// Per-list SHA-256 digests, recorded in the feature-space file.
    pub fn checksums(&self) -> BTreeMap<String, String> {
        let digest = |words: &BTreeSet<String>| {
            let joined = words.iter().cloned().collect::<Vec<_>>().join("\n");
            space::hex(&Sha256::digest(joined.as_bytes()))
        };
        let mut out = BTreeMap::new();
        out.insert("stopwords".into(), digest(&self.stopwords));
        out.insert("contradictions".into(), digest(&self.contradictions));
        out.insert("superlative_tags".into(), digest(&self.superlative_tags));
        out.insert(
            "fog_bins".into(),
            format!("{}/{}", self.fog_bins.0, self.fog_bins.1),
        );
        out
    }
}

fn strip_punct(token: &str) -> &str {
    token.trim_matches(|c: char| !c.is_alphanumeric())
}

/// Lowercase, drop punctuation-only tokens and stopwords, Porter-stem the rest.
pub fn preprocess_tokens(sentence: &AnnotatedSentence, lex: &Lexicons) -> Vec<String> {
    sentence
        .tokens
        .iter()
        .filter_map(|t| {
            let lower = t.text.to_lowercase();
            let word = strip_punct(&lower);
            if word.is_empty() || lex.stopwords.contains(word) {
                return None;
            }
            Some(porter_stemmer::stem(word))
        })
        .collect()
}

/// Readability of a single sentence. A sentence without word tokens scores 0.
pub fn sentence_fog(sentence: &AnnotatedSentence, lex: &Lexicons) -> Fog {
    let words: Vec<&str> = sentence.tokens.iter().map(|t| t.text.as_str()).collect();
    fog_index(&[words], lex.fog_bins).unwrap_or(Fog {
        score: 0.0,
        bin: fog_bin(0.0, lex.fog_bins),
    })
}

/// Superlative, contradiction, root word, subject and readability features.
pub fn linguistic_features(sentence: &AnnotatedSentence, lex: &Lexicons) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    if sentence
        .tokens
        .iter()
        .any(|t| lex.superlative_tags.contains(&t.pos))
    {
        out.insert(SUPER_POS.to_string());
    }
    if sentence
        .tokens
        .iter()
        .any(|t| lex.contradictions.contains(&t.lemma.to_lowercase()))
    {
        out.insert(CONTRADICTION.to_string());
    }
    if let Some(root) = sentence.root() {
        out.insert(format!("root_{}", sentence.tokens[root].lemma.to_lowercase()));
        if let Some(subj) = sentence.tokens.iter().find(|t| {
            matches!(t.deprel.as_str(), "nsubj" | "nsubjpass") && t.head == Some(root)
        }) {
            out.insert(format!("subj_{}", subj.lemma.to_lowercase()));
        }
    }
    out.insert(sentence_fog(sentence, lex).bin.feature_name().to_string());
    out
}

/// Generic NE types, knowledge-base links and root-attached ("focus") NEs.
pub fn entity_features(sentence: &AnnotatedSentence, entity: &EntityRecord) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    let root = sentence.root();
    for span in sentence.ne_spans() {
        out.insert(span.kind.clone());
        let head = sentence.span_head(span.start, span.end);
        let under_root = root.is_some() && sentence.tokens[head].head == root;
        let linked = entity.attributes_matching(&sentence.span_text(span.start, span.end));
        if linked.is_empty() {
            out.insert(format!("entity_unlinked_{}", span.kind));
            if under_root {
                out.insert(format!("underroot_unlinked_{}", span.kind.to_lowercase()));
            }
        } else {
            for attr in linked {
                out.insert(format!("entity_{attr}"));
                if under_root {
                    out.insert(format!("underroot_entity_{attr}"));
                }
            }
        }
    }
    out
}

/// Fits the column dictionary and IDF table on training sentences. The five
/// fixed linguistic types are always registered; root/subject/entity names
/// come from what the training data shows.
pub fn fit_feature_space(
    train: &[(&AnnotatedSentence, &EntityRecord)],
    lex: &Lexicons,
    blocks: BlockSet,
) -> Result<FeatureSpace> {
    if train.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    let mut space = FeatureSpace::new(blocks, train.len(), lex.checksums());
    let mut names = BTreeSet::new();
    if blocks.unigram {
        let mut df: BTreeMap<String, usize> = BTreeMap::new();
        for (s, _) in train {
            let terms: BTreeSet<String> = preprocess_tokens(s, lex).into_iter().collect();
            for t in terms {
                *df.entry(t).or_default() += 1;
            }
        }
        let n = train.len() as f64;
        for (term, d) in df {
            names.insert(BlockTag::Unigram.qualify(&term));
            space.idf.insert(term, ((1.0 + n) / (1.0 + d as f64)).ln() + 1.0);
        }
    }
    if blocks.linguistic {
        for fixed in [SUPER_POS, CONTRADICTION, "fog_low", "fog_mid", "fog_high"] {
            names.insert(BlockTag::Linguistic.qualify(fixed));
        }
        for (s, _) in train {
            for f in linguistic_features(s, lex) {
                names.insert(BlockTag::Linguistic.qualify(&f));
            }
        }
    }
    if blocks.entity {
        for (s, e) in train {
            for f in entity_features(s, e) {
                names.insert(BlockTag::Entity.qualify(&f));
            }
        }
    }
    space.freeze(names);
    Ok(space)
}

/// Sparse vector for one (entity, sentence) pair. Unigram weights are
/// `tf * idf`, L2-normalized within the block; linguistic and entity features
/// are binary. Names the frozen space does not know are skipped.
pub fn featurize_item(
    sentence: &AnnotatedSentence,
    entity: &EntityRecord,
    space: &FeatureSpace,
    lex: &Lexicons,
    grade: Option<u8>,
) -> Result<FeatureVector> {
    if !space.is_frozen() {
        return Err(Error::UnfrozenSpace);
    }
    let mut entries: BTreeMap<usize, f64> = BTreeMap::new();
    let blocks = space.blocks();
    if blocks.unigram {
        let mut tf: BTreeMap<String, usize> = BTreeMap::new();
        for t in preprocess_tokens(sentence, lex) {
            *tf.entry(t).or_default() += 1;
        }
        let weighted: Vec<(usize, f64)> = tf
            .iter()
            .filter_map(|(term, &count)| {
                let idx = space.index_of(BlockTag::Unigram, term)?;
                Some((idx, count as f64 * space.idf(term)?))
            })
            .collect();
        let norm = weighted.iter().map(|(_, v)| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            entries.extend(weighted.into_iter().map(|(i, v)| (i, v / norm)));
        }
    }
    if blocks.linguistic {
        for f in linguistic_features(sentence, lex) {
            if let Some(i) = space.index_of(BlockTag::Linguistic, &f) {
                entries.insert(i, 1.0);
            }
        }
    }
    if blocks.entity {
        for f in entity_features(sentence, entity) {
            if let Some(i) = space.index_of(BlockTag::Entity, &f) {
                entries.insert(i, 1.0);
            }
        }
    }
    Ok(FeatureVector {
        entries: SparseVec::from_sorted(entries.into_iter().filter(|(_, v)| *v != 0.0).collect()),
        group_id: sentence.entity_id.clone(),
        item_id: sentence.sentence_id.clone(),
        grade,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{fallback_annotate, Token};

    fn entity() -> EntityRecord {
        EntityRecord::bare("m").with_display_name("Jack Reacher")
    }

    fn annotate(text: &str) -> AnnotatedSentence {
        fallback_annotate(text, &entity()).unwrap()
    }

    #[test]
    fn preprocess_example() {
        let lex = Lexicons::default();
        let terms = preprocess_tokens(&annotate("Tom Cruise did all of his own stunt driving."), &lex);
        assert!(terms.contains(&"stunt".to_string()));
        assert!(!terms.iter().any(|t| t == "of" || t == "his"));
        assert!(preprocess_tokens(&annotate("It is what it is."), &lex).is_empty());
        assert_eq!(preprocess_tokens(&annotate("Improvised!"), &lex), vec!["improvis"]);
    }

    fn tok(text: &str, lemma: &str, pos: &str, head: Option<usize>, deprel: &str, ner: Option<&str>) -> Token {
        Token {
            text: text.into(),
            lemma: lemma.into(),
            pos: pos.into(),
            head,
            deprel: deprel.into(),
            ner: ner.map(String::from),
        }
    }

    fn parsed(tokens: Vec<Token>) -> AnnotatedSentence {
        AnnotatedSentence {
            entity_id: "m".into(),
            sentence_id: "s".into(),
            raw: tokens.iter().map(|t| t.text.clone()).collect::<Vec<_>>().join(" "),
            tokens,
            mentions: None,
            gold_label: None,
        }
    }

    #[test]
    fn root_and_subject() {
        let lex = Lexicons::default();
        let s = annotate("Gravity grossed $274,092,705 in North America.");
        let f = linguistic_features(&s, &lex);
        assert!(f.contains("root_gross"));
        assert!(f.contains("subj_gravity"));
        assert!(!f.contains(SUPER_POS));
        assert_eq!(f.iter().filter(|n| n.starts_with("fog_")).count(), 1);
    }

    #[test]
    fn contradiction_and_superlative() {
        let lex = Lexicons::default();
        let s = annotate("Although a very modest hit in theaters, it became one of the highest grossing video rentals of all time.");
        let f = linguistic_features(&s, &lex);
        assert!(f.contains(CONTRADICTION));
        assert!(f.contains(SUPER_POS));
        assert!(f.contains("root_become"));
    }

    #[test]
    fn first_subject_attached_to_root_wins() {
        let s = parsed(vec![
            tok("Critics", "critic", "NNS", Some(1), "nsubj", None),
            tok("said", "say", "VBD", None, "root", None),
            tok("fans", "fan", "NNS", Some(3), "nsubj", None),
            tok("cried", "cry", "VBD", Some(1), "ccomp", None),
        ]);
        let f = linguistic_features(&s, &Lexicons::default());
        assert!(f.contains("subj_critic"));
        assert!(!f.contains("subj_fan"));
        assert!(f.contains("root_say"));
    }

    #[test]
    fn entity_linking_example() {
        let fifth = EntityRecord::bare("fifth_element")
            .with_display_name("The Fifth Element")
            .with_attribute("Director", "Luc Besson")
            .with_attribute("Writer", "Luc Besson");
        let s = parsed(vec![
            tok("Luc", "luc", "NNP", Some(1), "compound", Some("PERSON")),
            tok("Besson", "besson", "NNP", Some(2), "nsubj", Some("PERSON")),
            tok("wrote", "write", "VBD", None, "root", None),
            tok("it", "it", "PRP", Some(2), "dobj", None),
            tok("with", "with", "IN", Some(6), "case", None),
            tok("Eric", "eric", "NNP", Some(6), "compound", Some("PERSON")),
            tok("Serra", "serra", "NNP", Some(2), "nmod", Some("PERSON")),
            tok("for", "for", "IN", Some(8), "case", None),
            tok("Gaumont", "gaumont", "NNP", Some(6), "nmod", Some("ORGANIZATION")),
        ]);
        let f = entity_features(&s, &fifth);
        for name in [
            "PERSON",
            "ORGANIZATION",
            "entity_Director",
            "entity_Writer",
            "underroot_entity_Director",
            "underroot_entity_Writer",
            "entity_unlinked_PERSON",
            "underroot_unlinked_person",
            "entity_unlinked_ORGANIZATION",
        ] {
            assert!(f.contains(name), "missing {name} in {f:?}");
        }
        assert!(!f.contains("underroot_unlinked_organization"));
    }

    #[test]
    fn idf_formula() {
        let lex = Lexicons::default();
        let e = entity();
        let docs = [annotate("Stunt work."), annotate("Stunt doubles."), annotate("Stunt driving rocks.")];
        let train: Vec<_> = docs.iter().map(|d| (d, &e)).collect();
        let space = fit_feature_space(&train, &lex, BlockSet::ALL).unwrap();
        assert_eq!(space.idf("stunt"), Some(1.0));
        let expected = (4.0f64 / 2.0).ln() + 1.0;
        assert!((space.idf("work").unwrap() - expected).abs() < 1e-12);
        assert!((expected - 1.6931).abs() < 1e-4);
        assert!(space.is_frozen());
    }

    #[test]
    fn space_is_order_independent() {
        let lex = Lexicons::default();
        let e = entity();
        let docs = [annotate("Cruise did his own stunts."), annotate("The best car chase ever filmed."), annotate("Werner Herzog played the villain.")];
        let fwd: Vec<_> = docs.iter().map(|d| (d, &e)).collect();
        let rev: Vec<_> = docs.iter().rev().map(|d| (d, &e)).collect();
        let a = fit_feature_space(&fwd, &lex, BlockSet::ALL).unwrap();
        let b = fit_feature_space(&rev, &lex, BlockSet::ALL).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.checksum(), b.checksum());
        assert!(matches!(fit_feature_space(&[], &lex, BlockSet::ALL), Err(Error::EmptyTrainingSet)));
    }

    #[test]
    fn featurize_skips_unknown_terms() {
        let lex = Lexicons::default();
        let e = entity();
        let docs = [annotate("Cruise did his own stunts."), annotate("The car chase was filmed twice.")];
        let train: Vec<_> = docs.iter().map(|d| (d, &e)).collect();
        let space = fit_feature_space(&train, &lex, BlockSet::ALL).unwrap();
        let v = featurize_item(&annotate("Zebras yodel quietly."), &e, &space, &lex, None).unwrap();
        assert!(v.entries.iter().all(|(i, _)| space.block_of(i) != Some(BlockTag::Unigram)));
        assert!(v.entries.iter().any(|(i, _)| space.block_of(i) == Some(BlockTag::Linguistic)));
        assert_eq!(space.len(), fit_feature_space(&train, &lex, BlockSet::ALL).unwrap().len());

        let s = annotate("Cruise did stunts and stunts.");
        let a = featurize_item(&s, &e, &space, &lex, Some(3)).unwrap();
        let b = featurize_item(&s, &e, &space, &lex, Some(3)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.grade, Some(3));
        let u_norm: f64 = a
            .entries
            .iter()
            .filter(|(i, _)| space.block_of(*i) == Some(BlockTag::Unigram))
            .map(|(_, v)| v * v)
            .sum();
        assert!((u_norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unigram_only_space() {
        let lex = Lexicons::default();
        let e = entity();
        let docs = [annotate("Cruise did his own stunts.")];
        let train: Vec<_> = docs.iter().map(|d| (d, &e)).collect();
        let space = fit_feature_space(&train, &lex, BlockSet::UNIGRAM).unwrap();
        assert!((0..space.len()).all(|i| space.block_of(i) == Some(BlockTag::Unigram)));
    }

    #[test]
    fn space_file_round_trip() {
        let lex = Lexicons::default();
        let e = entity();
        let docs = [annotate("Cruise did his own stunts."), annotate("Werner Herzog played the villain.")];
        let train: Vec<_> = docs.iter().map(|d| (d, &e)).collect();
        let space = fit_feature_space(&train, &lex, BlockSet::ALL).unwrap();
        let json = space.to_json().unwrap();
        let back = FeatureSpace::from_json(&json).unwrap();
        assert_eq!(back, space);
        let tampered = json.replacen("\"doc_count\": 2", "\"doc_count\": 3", 1);
        assert!(FeatureSpace::from_json(&tampered).is_err());
    }

    #[test]
    fn space_round_trip_keeps_idf_bits() {
        // Many documents give IDF values whose shortest decimal form needs
        // exact parsing to come back bit-identical.
        let lex = Lexicons::default();
        let e = entity();
        let docs: Vec<AnnotatedSentence> = (0..37)
            .map(|i| annotate(&format!("Word{} shared term{} appears here.", i, i % 7)))
            .collect();
        let train: Vec<_> = docs.iter().map(|d| (d, &e)).collect();
        let space = fit_feature_space(&train, &lex, BlockSet::ALL).unwrap();
        let back = FeatureSpace::from_json(&space.to_json().unwrap()).unwrap();
        assert_eq!(back.checksum(), space.checksum());
    }
}
