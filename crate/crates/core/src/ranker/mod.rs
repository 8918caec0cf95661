//! Grouped pairwise ranking SVM and the comparison baselines.
//!
//! Items are grouped by entity. Within a group every pair of items with
//! different grades yields one difference vector `x_higher − x_lower`, and a
//! linear model is trained so that `w · (x_higher − x_lower) ≥ 1` holds with
//! as little hinge loss as possible. Pairs never cross groups.

mod baselines;
mod grid;
mod solver;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{FeatureSpace, FeatureVector, SparseVec};

pub use baselines::{
    baseline_classifier, baseline_random, baseline_suppos, binary_label, BaselineItem, SupPosMode,
};
pub use grid::{grid_search, GridCell, GridReport};

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PreferencePair {
    pub group_id: String,
    /// Index into the item list of the better-graded item.
    pub higher: usize,
    pub lower: usize,
}

/// All same-group pairs with strictly different grades, ordered by group
/// (first appearance) and then by ascending index pair. Ungraded items never
/// pair.
pub fn build_pairs(items: &[FeatureVector]) -> Vec<PreferencePair> {
    let mut groups: Vec<(&str, Vec<usize>)> = Vec::new();
    let mut slot: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, it) in items.iter().enumerate() {
        let k = *slot.entry(it.group_id.as_str()).or_insert_with(|| {
            groups.push((it.group_id.as_str(), Vec::new()));
            groups.len() - 1
        });
        groups[k].1.push(i);
    }
    let mut pairs = Vec::new();
    for (group, members) in groups {
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                let (Some(gi), Some(gj)) = (items[i].grade, items[j].grade) else {
                    continue;
                };
                let (higher, lower) = match gi.cmp(&gj) {
                    std::cmp::Ordering::Greater => (i, j),
                    std::cmp::Ordering::Less => (j, i),
                    std::cmp::Ordering::Equal => continue,
                };
                pairs.push(PreferencePair {
                    group_id: group.to_string(),
                    higher,
                    lower,
                });
            }
        }
    }
    pairs
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainParams {
    pub c: f64,
    pub epsilon: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for TrainParams {
    fn default() -> Self {
        TrainParams {
            c: 17.0,
            epsilon: 0.21,
            max_iter: 1000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub pair_count: usize,
    pub iterations: usize,
    pub converged: bool,
    /// Primal objective `½‖w‖² + C Σ hinge` at the returned weights.
    pub final_objective: f64,
    /// Dual objective after every epoch (non-increasing).
    pub dual_objective_history: Vec<f64>,
    pub max_violation: f64,
    /// Pairs the model does not order strictly correctly (`w·Δx ≤ 0`).
    pub violated_pairs: usize,
    /// Pairs with a non-zero dual weight.
    pub support_pairs: usize,
    /// Per-pair hinge slack `max(0, 1 − w·Δx)`, in pair order.
    pub slacks: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankingModel {
    pub version: u32,
    pub kernel: String,
    pub weights: Vec<f64>,
    pub space_checksum: String,
    pub c_param: f64,
    pub epsilon: f64,
    /// Hinge loss is charged with weight C per preference pair.
    pub loss_scaling: String,
    pub seed: u64,
    pub train_report: TrainReport,
}

impl RankingModel {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes") + "\n"
    }

    pub fn from_json(src: &str) -> Result<Self> {
        let model: RankingModel =
            serde_json::from_str(src).map_err(|e| Error::Format(format!("model: {e}")))?;
        if model.version != MODEL_FORMAT_VERSION {
            return Err(Error::Format(format!("model version {} unsupported", model.version)));
        }
        Ok(model)
    }

    pub fn check_space(&self, space_checksum: &str) -> Result<()> {
        if self.space_checksum != space_checksum {
            return Err(Error::SpaceMismatch {
                model: self.space_checksum.clone(),
                space: space_checksum.to_string(),
            });
        }
        Ok(())
    }

    /// `w · x`, without the space check.
    pub fn raw_score(&self, x: &FeatureVector) -> f64 {
        x.entries.dot(&self.weights)
    }

    /// Weight of every column, largest first.
    pub fn top_features<'a>(&self, space: &'a FeatureSpace, n: usize) -> Vec<(&'a str, f64)> {
        let names = space.names();
        let mut ranked: Vec<(&str, f64)> = names
            .into_iter()
            .zip(self.weights.iter().copied())
            .collect();
        ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        ranked.truncate(n);
        ranked
    }
}

pub(crate) fn difference_vectors(items: &[FeatureVector], pairs: &[PreferencePair]) -> Vec<SparseVec> {
    pairs
        .iter()
        .map(|p| items[p.higher].entries.sub(&items[p.lower].entries))
        .collect()
}

/// Trains on `dim`-column vectors. Hitting `max_iter` without reaching the
/// tolerance is reported in the train report, not raised.
pub fn train(items: &[FeatureVector], dim: usize, space_checksum: &str, params: TrainParams) -> Result<RankingModel> {
    if !(params.c > 0.0) {
        return Err(Error::NonPositiveC(params.c));
    }
    let pairs = build_pairs(items);
    if pairs.is_empty() {
        return Err(Error::NoPairs);
    }
    let diffs = difference_vectors(items, &pairs);
    let dim = diffs
        .iter()
        .filter_map(SparseVec::max_index)
        .map(|i| i + 1)
        .fold(dim, usize::max);
    let sol = solver::solve(
        &diffs,
        dim,
        solver::SolverParams {
            c: params.c,
            epsilon: params.epsilon,
            max_iter: params.max_iter,
            seed: params.seed,
        },
    );
    if !sol.converged {
        log::warn!(
            "ranker stopped after {} epochs with violation {:.4} >= {}",
            sol.epochs,
            sol.max_violation,
            params.epsilon
        );
    }
    let margins = sol.margins(&diffs);
    let report = TrainReport {
        pair_count: pairs.len(),
        iterations: sol.epochs,
        converged: sol.converged,
        final_objective: sol.primal_objective(&diffs, params.c),
        dual_objective_history: sol.dual_history.clone(),
        max_violation: sol.max_violation,
        violated_pairs: margins.iter().filter(|&&m| m <= 0.0).count(),
        support_pairs: sol.alphas.iter().filter(|&&a| a > 0.0).count(),
        slacks: margins.iter().map(|m| (1.0 - m).max(0.0)).collect(),
    };
    Ok(RankingModel {
        version: MODEL_FORMAT_VERSION,
        kernel: "linear".into(),
        weights: sol.weights,
        space_checksum: space_checksum.to_string(),
        c_param: params.c,
        epsilon: params.epsilon,
        loss_scaling: "C per pair".into(),
        seed: params.seed,
        train_report: report,
    })
}

pub fn train_on_space(items: &[FeatureVector], space: &FeatureSpace, params: TrainParams) -> Result<RankingModel> {
    train(items, space.len(), &space.checksum(), params)
}

/// `w · x` after checking the vector's feature space matches the model's.
pub fn score(model: &RankingModel, space_checksum: &str, x: &FeatureVector) -> Result<f64> {
    model.check_space(space_checksum)?;
    Ok(model.raw_score(x))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankedEntry {
    pub item_id: String,
    pub score: f64,
    /// Position of the item in the input list.
    pub index: usize,
}

/// One group's items, best first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankedList {
    pub group_id: String,
    pub entries: Vec<RankedEntry>,
}

impl RankedList {
    /// Sorts `(item_id, score)` by score descending, ties by input position.
    pub fn from_scores(group_id: &str, scored: Vec<(String, f64)>) -> Self {
        let mut entries: Vec<RankedEntry> = scored
            .into_iter()
            .enumerate()
            .map(|(index, (item_id, score))| RankedEntry { item_id, score, index })
            .collect();
        entries.sort_by(|a, b| b.score.total_cmp(&a.score).then(a.index.cmp(&b.index)));
        RankedList {
            group_id: group_id.to_string(),
            entries,
        }
    }

    /// Keeps an already decided order and gives it descending scores `n..1`.
    pub fn from_order(group_id: &str, item_ids: &[String], order: &[usize]) -> Self {
        let n = order.len();
        RankedList {
            group_id: group_id.to_string(),
            entries: order
                .iter()
                .enumerate()
                .map(|(pos, &index)| RankedEntry {
                    item_id: item_ids[index].clone(),
                    score: (n - pos) as f64,
                    index,
                })
                .collect(),
        }
    }

    pub fn truncate(&mut self, k: usize) {
        self.entries.truncate(k);
    }

    pub fn order(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.index).collect()
    }
}

fn single_group(items: &[FeatureVector]) -> Result<String> {
    let Some(first) = items.first() else {
        return Ok(String::new());
    };
    if let Some(other) = items.iter().find(|x| x.group_id != first.group_id) {
        return Err(Error::MixedGroups(first.group_id.clone(), other.group_id.clone()));
    }
    Ok(first.group_id.clone())
}

/// Ranks one group's items by model score.
pub fn rank(model: &RankingModel, items: &[FeatureVector]) -> Result<RankedList> {
    let group = single_group(items)?;
    Ok(RankedList::from_scores(
        &group,
        items
            .iter()
            .map(|x| (x.item_id.clone(), model.raw_score(x)))
            .collect(),
    ))
}
