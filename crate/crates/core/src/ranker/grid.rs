use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{rank, train, TrainParams};
use crate::error::{Error, Result};
use crate::eval::ndcg_at_k;
use crate::features::FeatureVector;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub c: f64,
    pub epsilon: f64,
    /// Mean NDCG@10 over every held-out group of every usable fold.
    pub mean_ndcg: f64,
    pub groups_scored: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub folds: usize,
    pub cells: Vec<GridCell>,
    pub best: GridCell,
}

/// Cross-validated search over `(C, e)`. Groups are dealt to folds
/// round-robin in order of first appearance, so items of one entity never
/// straddle train and validation. Ties on mean NDCG keep the earlier cell.
pub fn grid_search(
    items: &[FeatureVector],
    dim: usize,
    cs: &[f64],
    epsilons: &[f64],
    folds: usize,
    base: TrainParams,
) -> Result<GridReport> {
    if cs.is_empty() || epsilons.is_empty() {
        return Err(Error::InvalidConfig("empty hyperparameter grid".into()));
    }
    let mut group_fold: BTreeMap<&str, usize> = BTreeMap::new();
    for x in items {
        let next = group_fold.len();
        group_fold.entry(&x.group_id).or_insert(next);
    }
    let folds = folds.clamp(2, group_fold.len().max(2));
    let fold_of = |x: &FeatureVector| group_fold[x.group_id.as_str()] % folds;

    let mut cells = Vec::new();
    for &c in cs {
        for &epsilon in epsilons {
            let params = TrainParams { c, epsilon, ..base };
            let mut scores = Vec::new();
            for f in 0..folds {
                let (held, fit): (Vec<FeatureVector>, Vec<FeatureVector>) =
                    items.iter().cloned().partition(|x| fold_of(x) == f);
                let model = match train(&fit, dim, "", params) {
                    Ok(m) => m,
                    Err(Error::NoPairs) => continue,
                    Err(e) => return Err(e),
                };
                let mut by_group: BTreeMap<&str, Vec<&FeatureVector>> = BTreeMap::new();
                for x in &held {
                    by_group.entry(&x.group_id).or_default().push(x);
                }
                for members in by_group.values() {
                    let owned: Vec<FeatureVector> = members.iter().map(|x| (*x).clone()).collect();
                    let list = rank(&model, &owned)?;
                    let grades: Vec<u8> = list
                        .entries
                        .iter()
                        .map(|e| owned[e.index].grade.unwrap_or(0))
                        .collect();
                    scores.push(ndcg_at_k(&grades, 10));
                }
            }
            let mean = if scores.is_empty() {
                0.0
            } else {
                scores.iter().sum::<f64>() / scores.len() as f64
            };
            log::info!("grid C={c} e={epsilon}: mean NDCG@10 {mean:.4} over {} groups", scores.len());
            cells.push(GridCell {
                c,
                epsilon,
                mean_ndcg: mean,
                groups_scored: scores.len(),
            });
        }
    }
    let best = cells
        .iter()
        .fold(None::<&GridCell>, |acc, cell| match acc {
            Some(b) if b.mean_ndcg >= cell.mean_ndcg => Some(b),
            _ => Some(cell),
        })
        .cloned()
        .expect("grid has at least one cell");
    Ok(GridReport { folds, cells, best })
}
