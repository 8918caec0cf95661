//! Gunning FOG readability.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FogBin {
    Low,
    Mid,
    High,
}

impl FogBin {
    pub fn feature_name(self) -> &'static str {
        match self {
            FogBin::Low => "fog_low",
            FogBin::Mid => "fog_mid",
            FogBin::High => "fog_high",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fog {
    pub score: f64,
    pub bin: FogBin,
}

/// Vowel-group syllable estimate: each run of `aeiouy` counts one, a final
/// silent `e` (not after `l`) takes one away, and every word has at least one.
pub fn count_syllables(word: &str) -> usize {
    let letters: Vec<char> = word
        .chars()
        .filter(|c| c.is_alphabetic())
        .flat_map(char::to_lowercase)
        .collect();
    let is_vowel = |c: char| matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y');
    let mut groups = 0usize;
    let mut prev_vowel = false;
    for &c in &letters {
        let v = is_vowel(c);
        if v && !prev_vowel {
            groups += 1;
        }
        prev_vowel = v;
    }
    let n = letters.len();
    if n >= 1 && letters[n - 1] == 'e' && !(n >= 2 && letters[n - 2] == 'l') {
        groups = groups.saturating_sub(1);
    }
    groups.max(1)
}

/// More than two syllables.
pub fn is_complex(word: &str) -> bool {
    count_syllables(word) > 2
}

pub fn is_word(token: &str) -> bool {
    token.chars().any(char::is_alphanumeric)
}

pub fn fog_bin(score: f64, bins: (f64, f64)) -> FogBin {
    if score < bins.0 {
        FogBin::Low
    } else if score < bins.1 {
        FogBin::Mid
    } else {
        FogBin::High
    }
}

/// `0.4 * (words / sentences + 100 * complex / words)` over the word tokens
/// (tokens holding a letter or digit). Sentences without words do not count.
pub fn fog_index<S: AsRef<str>>(sentences: &[Vec<S>], bins: (f64, f64)) -> Result<Fog> {
    let mut n_sentences = 0usize;
    let mut words = 0usize;
    let mut complex = 0usize;
    for s in sentences {
        let ws: Vec<&str> = s.iter().map(AsRef::as_ref).filter(|t| is_word(t)).collect();
        if ws.is_empty() {
            continue;
        }
        n_sentences += 1;
        words += ws.len();
        complex += ws.iter().filter(|w| is_complex(w)).count();
    }
    if words == 0 {
        return Err(Error::NoWords);
    }
    let score = 0.4 * (words as f64 / n_sentences as f64 + 100.0 * complex as f64 / words as f64);
    Ok(Fog {
        score,
        bin: fog_bin(score, bins),
    })
}
