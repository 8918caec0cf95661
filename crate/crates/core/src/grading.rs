//! Filtering & grading of vote-annotated trivia.
//!
//! The likeness ratio is the fraction of voters who found a trivium
//! interesting. Trivia with too little support are dropped, then the survivors
//! are graded by the percentile of their likeness ratio within the corpus.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::corpus::TriviaRecord;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradeScale {
    FiveGrade,
    TwoGrade,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradingConfig {
    pub base_min_votes: u64,
    pub high_lr_threshold: f64,
    pub high_min_votes: u64,
    /// Percentile cut-offs, strictly descending; `len() + 1` grades result.
    pub percentile_cutoffs: Vec<f64>,
    pub scale: GradeScale,
    pub max_chars: Option<usize>,
    pub min_trivia_per_entity: Option<usize>,
}

impl Default for GradingConfig {
    fn default() -> Self {
        GradingConfig {
            base_min_votes: 5,
            high_lr_threshold: 0.6,
            high_min_votes: 100,
            percentile_cutoffs: vec![90.0, 75.0, 25.0, 10.0],
            scale: GradeScale::FiveGrade,
            max_chars: None,
            min_trivia_per_entity: None,
        }
    }
}

impl GradingConfig {
    /// Celebrity-domain recipe: short trivia, well-covered entities, two grades.
    pub fn celebrity() -> Self {
        GradingConfig {
            scale: GradeScale::TwoGrade,
            max_chars: Some(140),
            min_trivia_per_entity: Some(10),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.base_min_votes < 1 {
            return Err(Error::InvalidConfig("base_min_votes must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.high_lr_threshold) {
            return Err(Error::InvalidConfig("high_lr_threshold must lie in [0, 1]".into()));
        }
        if self
            .percentile_cutoffs
            .iter()
            .any(|&c| !(c > 0.0 && c < 100.0))
        {
            return Err(Error::InvalidConfig("percentile cut-offs must lie in (0, 100)".into()));
        }
        if self.percentile_cutoffs.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::InvalidConfig("percentile cut-offs must be strictly descending".into()));
        }
        Ok(())
    }

    pub fn top_grade(&self) -> u8 {
        match self.scale {
            GradeScale::FiveGrade => self.percentile_cutoffs.len() as u8,
            GradeScale::TwoGrade => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradedTrivia {
    pub record: TriviaRecord,
    pub lr: f64,
    pub grade: u8,
    pub class_label: Option<u8>,
}

/// `votes_interesting / votes_total`.
pub fn likeness_ratio(record: &TriviaRecord) -> Result<f64> {
    if record.votes_total == 0 {
        return Err(Error::ZeroVotes);
    }
    Ok(record.votes_interesting as f64 / record.votes_total as f64)
}

fn supported(r: &TriviaRecord, cfg: &GradingConfig) -> bool {
    if r.votes_total < cfg.base_min_votes.max(1) {
        return false;
    }
    let lr = r.votes_interesting as f64 / r.votes_total as f64;
    lr <= cfg.high_lr_threshold || r.votes_total >= cfg.high_min_votes
}

/// Drops trivia below the minimum support, with a stricter minimum for
/// high-likeness trivia.
pub fn apply_support_filter(records: &[TriviaRecord], cfg: &GradingConfig) -> Vec<TriviaRecord> {
    records.iter().filter(|r| supported(r, cfg)).cloned().collect()
}

/// Grades each record by the share of the corpus with a strictly smaller
/// likeness ratio; equal ratios therefore always share a grade.
pub fn assign_grades(records: &[TriviaRecord], cfg: &GradingConfig) -> Result<Vec<GradedTrivia>> {
    if records.is_empty() {
        return Err(Error::EmptyAfterFilter);
    }
    let lrs = records
        .iter()
        .map(likeness_ratio)
        .collect::<Result<Vec<f64>>>()?;
    let mut sorted = lrs.clone();
    sorted.sort_by(f64::total_cmp);
    let n = records.len() as f64;
    Ok(records
        .iter()
        .zip(lrs)
        .map(|(r, lr)| {
            let smaller = sorted.partition_point(|&x| x < lr);
            let percentile = 100.0 * smaller as f64 / n;
            let grade = cfg
                .percentile_cutoffs
                .iter()
                .filter(|&&c| percentile >= c)
                .count() as u8;
            GradedTrivia {
                record: r.clone(),
                lr,
                grade,
                class_label: None,
            }
        })
        .collect())
}

/// Majority-vote classes: interesting iff the likeness ratio exceeds 0.5.
pub fn to_two_grade(graded: &[GradedTrivia]) -> Vec<GradedTrivia> {
    graded
        .iter()
        .map(|g| {
            let class = u8::from(g.lr > 0.5);
            GradedTrivia {
                grade: class,
                class_label: Some(class),
                ..g.clone()
            }
        })
        .collect()
}

/// Length cap first, then the per-entity minimum on what survives.
pub fn entity_filters(records: &[TriviaRecord], cfg: &GradingConfig) -> Vec<TriviaRecord> {
    let short: Vec<&TriviaRecord> = records
        .iter()
        .filter(|r| cfg.max_chars.map_or(true, |m| r.text.chars().count() <= m))
        .collect();
    let Some(min) = cfg.min_trivia_per_entity else {
        return short.into_iter().cloned().collect();
    };
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for r in &short {
        *counts.entry(r.entity_id.as_str()).or_default() += 1;
    }
    short
        .into_iter()
        .filter(|r| counts[r.entity_id.as_str()] >= min)
        .cloned()
        .collect()
}

/// Entity filters, support filter, grading and (for the two-grade scale)
/// class conversion, in that order.
pub fn grade_corpus(records: &[TriviaRecord], cfg: &GradingConfig) -> Result<Vec<GradedTrivia>> {
    cfg.validate()?;
    let kept = apply_support_filter(&entity_filters(records, cfg), cfg);
    let graded = assign_grades(&kept, cfg)?;
    Ok(match cfg.scale {
        GradeScale::FiveGrade => graded,
        GradeScale::TwoGrade => to_two_grade(&graded),
    })
}

/// One line of the graded-output JSONL file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradedRow {
    pub entity_id: String,
    pub text: String,
    pub lr: f64,
    pub grade: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_label: Option<u8>,
}

impl From<&GradedTrivia> for GradedRow {
    fn from(g: &GradedTrivia) -> Self {
        GradedRow {
            entity_id: g.record.entity_id.clone(),
            text: g.record.text.clone(),
            lr: g.lr,
            grade: g.grade,
            class_label: g.class_label,
        }
    }
}

pub fn write_graded(graded: &[GradedTrivia]) -> String {
    let mut out = String::new();
    for g in graded {
        out.push_str(&serde_json::to_string(&GradedRow::from(g)).expect("row serializes"));
        out.push('\n');
    }
    out
}

pub fn parse_graded(src: &str) -> Result<Vec<GradedRow>> {
    src.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| Error::malformed(i + 1, e.to_string())))
        .collect()
}
