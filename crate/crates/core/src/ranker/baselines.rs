use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::solver::{self, SolverParams};
use super::{RankedList, TrainParams};
use crate::error::{Error, Result};
use crate::features::{FeatureVector, SparseVec};

/// Seeded uniform shuffle of `item_ids`, cut to the first `k`.
pub fn baseline_random(group_id: &str, item_ids: &[String], k: usize, seed: u64) -> RankedList {
    let mut order: Vec<usize> = (0..item_ids.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    order.truncate(k.max(1));
    RankedList::from_order(group_id, item_ids, &order)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SupPosMode {
    Best,
    Worst,
    Random,
}

/// What the superlative baseline needs to know about a candidate.
#[derive(Clone, Debug, PartialEq)]
pub struct BaselineItem {
    pub item_id: String,
    /// Tokens tagged JJS or RBS.
    pub superlatives: usize,
    pub label: Option<u8>,
}

/// Orders by superlative count, descending. Ties are broken with the gold
/// labels (positives first for `Best`, negatives first for `Worst`) or by a
/// seeded shuffle for `Random`; remaining ties keep input order.
pub fn baseline_suppos(group_id: &str, items: &[BaselineItem], mode: SupPosMode, seed: u64) -> Result<RankedList> {
    let mut order: Vec<usize> = (0..items.len()).collect();
    match mode {
        SupPosMode::Best | SupPosMode::Worst => {
            if items.iter().any(|x| x.label.is_none()) {
                return Err(Error::MissingLabels);
            }
            let positive_first = mode == SupPosMode::Best;
            order.sort_by_key(|&i| {
                let positive = items[i].label == Some(1);
                (std::cmp::Reverse(items[i].superlatives), positive != positive_first)
            });
        }
        SupPosMode::Random => {
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            order.sort_by_key(|&i| std::cmp::Reverse(items[i].superlatives));
        }
    }
    let ids: Vec<String> = items.iter().map(|x| x.item_id.clone()).collect();
    Ok(RankedList::from_order(group_id, &ids, &order))
}

/// Classifier label for a graded training item: grades 3–4 are positive,
/// 0–1 negative and 2 is left out. Under the two-grade scale the grade is
/// already the class.
pub fn binary_label(grade: u8, two_grade: bool) -> Option<bool> {
    if two_grade {
        return Some(grade >= 1);
    }
    match grade {
        0 | 1 => Some(false),
        3.. => Some(true),
        _ => None,
    }
}

/// Pointwise linear hinge-loss classifier over the same solver, with a bias
/// column appended after the feature columns. Test items are ranked per
/// group (in order of first appearance) by signed margin.
pub fn baseline_classifier(
    train: &[FeatureVector],
    test: &[FeatureVector],
    dim: usize,
    params: TrainParams,
) -> Result<Vec<RankedList>> {
    if !(params.c > 0.0) {
        return Err(Error::NonPositiveC(params.c));
    }
    let dim = train
        .iter()
        .chain(test)
        .filter_map(|x| x.entries.max_index())
        .map(|i| i + 1)
        .fold(dim, usize::max);
    let two_grade = train.iter().all(|x| x.grade.unwrap_or(0) <= 1);
    let with_bias = |x: &SparseVec| {
        let mut e: Vec<(usize, f64)> = x.iter().collect();
        e.push((dim, 1.0));
        SparseVec::from_sorted(e)
    };
    let mut instances = Vec::new();
    let (mut pos, mut neg) = (0, 0);
    for x in train {
        let Some(label) = x.grade.and_then(|g| binary_label(g, two_grade)) else {
            continue;
        };
        if label {
            pos += 1;
            instances.push(with_bias(&x.entries));
        } else {
            neg += 1;
            instances.push(with_bias(&x.entries).scaled(-1.0));
        }
    }
    if pos == 0 || neg == 0 {
        return Err(Error::SingleClassTraining);
    }
    let sol = solver::solve(
        &instances,
        dim + 1,
        SolverParams {
            c: params.c,
            epsilon: params.epsilon,
            max_iter: params.max_iter,
            seed: params.seed,
        },
    );
    let mut groups: Vec<(String, Vec<(String, f64)>)> = Vec::new();
    let mut slot: BTreeMap<&str, usize> = BTreeMap::new();
    for x in test {
        let k = *slot.entry(x.group_id.as_str()).or_insert_with(|| {
            groups.push((x.group_id.clone(), Vec::new()));
            groups.len() - 1
        });
        groups[k].1.push((x.item_id.clone(), with_bias(&x.entries).dot(&sol.weights)));
    }
    Ok(groups
        .into_iter()
        .map(|(g, scored)| RankedList::from_scores(&g, scored))
        .collect())
}
