//! Ranking and agreement statistics: P@k, Recall@k, NDCG@k, Cohen's kappa and
//! the paired t-test, plus per-run aggregation into an [`EvalReport`].

mod kappa;
mod metrics;
mod ttest;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ranker::RankedList;

pub use kappa::{kappa, ConfusionTable, Kappa, KappaBand};
pub use metrics::{dcg_at_k, ndcg_against, ndcg_at_k, precision_at_k, recall_curve};
pub use ttest::{ln_gamma, paired_t_test, regularized_incomplete_beta, student_t_two_tailed, TTest, ALPHA};

/// Gold grades per group and item id. A grade ≥ 1 counts as interesting.
pub type Gold = BTreeMap<String, BTreeMap<String, u8>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupMetrics {
    pub p_at_k: f64,
    /// Recall at ranks 1..=k; flat past the end of a short list.
    pub recall_curve: Vec<f64>,
    pub ndcg_at_k: f64,
    pub retrieved: usize,
    pub positives: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanMetrics {
    pub p_at_k: f64,
    pub recall_curve: Vec<f64>,
    pub ndcg_at_k: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Significance {
    pub against: String,
    pub metric: String,
    pub t_stat: f64,
    pub p_value: f64,
    pub significant_at_0_05: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub k: usize,
    pub runs_averaged: usize,
    pub per_group: BTreeMap<String, GroupMetrics>,
    pub means: MeanMetrics,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub significance: Option<Significance>,
}

impl EvalReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn from_json(src: &str) -> Result<Self> {
        serde_json::from_str(src).map_err(|e| Error::Format(format!("eval report: {e}")))
    }

    /// Per-group P@k in group order.
    pub fn precisions(&self) -> Vec<f64> {
        self.per_group.values().map(|g| g.p_at_k).collect()
    }
}

fn group_metrics(list: &RankedList, gold: &BTreeMap<String, u8>, k: usize) -> Result<GroupMetrics> {
    let mut grades = Vec::with_capacity(list.entries.len());
    for e in &list.entries {
        let g = gold
            .get(&e.item_id)
            .ok_or_else(|| Error::MissingGold(format!("{} (item {})", list.group_id, e.item_id)))?;
        grades.push(*g);
    }
    let labels: Vec<bool> = grades.iter().map(|&g| g >= 1).collect();
    let positives = gold.values().filter(|&&g| g >= 1).count();
    let mut curve = match recall_curve(&labels[..labels.len().min(k)], positives) {
        Ok(c) => c,
        Err(Error::ZeroPositives) => vec![0.0; labels.len().min(k)],
        Err(e) => return Err(e),
    };
    let last = curve.last().copied().unwrap_or(0.0);
    curve.resize(k, last);
    let pool: Vec<u8> = gold.values().copied().collect();
    Ok(GroupMetrics {
        p_at_k: precision_at_k(&labels, k),
        recall_curve: curve,
        ndcg_at_k: ndcg_against(&grades, &pool, k),
        retrieved: list.entries.len().min(k),
        positives,
    })
}

fn means(per_group: &BTreeMap<String, GroupMetrics>, k: usize) -> MeanMetrics {
    let n = per_group.len().max(1) as f64;
    let mut curve = vec![0.0; k];
    for g in per_group.values() {
        for (acc, r) in curve.iter_mut().zip(&g.recall_curve) {
            *acc += r / n;
        }
    }
    MeanMetrics {
        p_at_k: per_group.values().map(|g| g.p_at_k).sum::<f64>() / n,
        recall_curve: curve,
        ndcg_at_k: per_group.values().map(|g| g.ndcg_at_k).sum::<f64>() / n,
    }
}

/// Scores every ranked list against the gold judgments; means are
/// unweighted over groups.
pub fn evaluate_run(lists: &[RankedList], gold: &Gold, k: usize) -> Result<EvalReport> {
    if k == 0 {
        return Err(Error::InvalidConfig("k must be at least 1".into()));
    }
    let mut per_group = BTreeMap::new();
    for list in lists {
        let g = gold
            .get(&list.group_id)
            .ok_or_else(|| Error::MissingGold(list.group_id.clone()))?;
        per_group.insert(list.group_id.clone(), group_metrics(list, g, k)?);
    }
    Ok(EvalReport {
        k,
        runs_averaged: 1,
        means: means(&per_group, k),
        per_group,
        significance: None,
    })
}

/// Averages reports of repeated randomized runs group by group.
pub fn average_reports(reports: &[EvalReport]) -> Result<EvalReport> {
    let first = reports.first().ok_or(Error::EmptyInput)?;
    let n = reports.len() as f64;
    let mut per_group = BTreeMap::new();
    for (group, m) in &first.per_group {
        let mut acc = GroupMetrics {
            p_at_k: 0.0,
            recall_curve: vec![0.0; first.k],
            ndcg_at_k: 0.0,
            retrieved: m.retrieved,
            positives: m.positives,
        };
        for r in reports {
            if r.k != first.k {
                return Err(Error::InvalidConfig("reports use different k".into()));
            }
            let g = r
                .per_group
                .get(group)
                .ok_or_else(|| Error::MissingGold(group.clone()))?;
            acc.p_at_k += g.p_at_k / n;
            acc.ndcg_at_k += g.ndcg_at_k / n;
            for (a, x) in acc.recall_curve.iter_mut().zip(&g.recall_curve) {
                *a += x / n;
            }
        }
        per_group.insert(group.clone(), acc);
    }
    Ok(EvalReport {
        k: first.k,
        runs_averaged: reports.iter().map(|r| r.runs_averaged).sum(),
        means: means(&per_group, first.k),
        per_group,
        significance: None,
    })
}

/// Paired t-test of per-group P@k between two runs over the same groups.
pub fn compare_runs(report: &EvalReport, other: &EvalReport, other_name: &str) -> Result<Significance> {
    let groups: Vec<&String> = report.per_group.keys().collect();
    let theirs: Vec<&String> = other.per_group.keys().collect();
    if groups != theirs {
        return Err(Error::LengthMismatch(groups.len(), theirs.len()));
    }
    let t = paired_t_test(&report.precisions(), &other.precisions())?;
    Ok(Significance {
        against: other_name.to_string(),
        metric: format!("P@{}", report.k),
        t_stat: t.t,
        p_value: t.p_value,
        significant_at_0_05: t.significant,
    })
}
