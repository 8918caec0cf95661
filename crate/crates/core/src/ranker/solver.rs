//! Dual coordinate descent for the L1-loss (hinge) linear SVM without bias:
//!
//! ```text
//! min_w  ½‖w‖² + C Σ_i max(0, 1 − w·z_i)
//! ```
//!
//! where each `z_i` already carries its label (`y_i x_i`, or a preference
//! difference `x_hi − x_lo`). The dual is
//! `min_α ½ αᵀQα − Σα` subject to `0 ≤ α_i ≤ C`, `Q_ij = z_i·z_j`, and the
//! primal solution is `w = Σ α_i z_i`. Coordinates are swept in a seeded
//! shuffled order; each update is the exact clipped Newton step on one α_i,
//! so the dual objective never increases.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::features::SparseVec;

#[derive(Clone, Copy, Debug)]
pub(crate) struct SolverParams {
    pub c: f64,
    pub epsilon: f64,
    pub max_iter: usize,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub(crate) struct Solution {
    pub weights: Vec<f64>,
    pub alphas: Vec<f64>,
    pub epochs: usize,
    pub converged: bool,
    /// Dual objective `½‖w‖² − Σα` after every epoch.
    pub dual_history: Vec<f64>,
    pub max_violation: f64,
}

impl Solution {
    pub fn margins(&self, instances: &[SparseVec]) -> Vec<f64> {
        instances.iter().map(|z| z.dot(&self.weights)).collect()
    }

    pub fn primal_objective(&self, instances: &[SparseVec], c: f64) -> f64 {
        let reg = 0.5 * self.weights.iter().map(|w| w * w).sum::<f64>();
        let loss: f64 = self
            .margins(instances)
            .into_iter()
            .map(|m| (1.0 - m).max(0.0))
            .sum();
        reg + c * loss
    }
}

fn projected_gradient(g: f64, alpha: f64, c: f64) -> f64 {
    if alpha <= 0.0 {
        g.min(0.0)
    } else if alpha >= c {
        g.max(0.0)
    } else {
        g
    }
}

pub(crate) fn solve(instances: &[SparseVec], dim: usize, params: SolverParams) -> Solution {
    let c = params.c;
    let mut w = vec![0.0; dim];
    let mut alpha = vec![0.0; instances.len()];
    let q_diag: Vec<f64> = instances.iter().map(SparseVec::norm_sq).collect();
    // Zero vectors carry no constraint the weights can satisfy.
    let mut order: Vec<usize> = (0..instances.len()).filter(|&i| q_diag[i] > 0.0).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut history = Vec::new();
    let mut epochs = 0;
    let mut converged = false;
    let mut max_violation = f64::INFINITY;

    while epochs < params.max_iter {
        epochs += 1;
        order.shuffle(&mut rng);
        max_violation = 0.0f64;
        for &i in &order {
            let z = &instances[i];
            let g = z.dot(&w) - 1.0;
            let pg = projected_gradient(g, alpha[i], c);
            max_violation = max_violation.max(pg.abs());
            if pg.abs() <= 1e-14 {
                continue;
            }
            let old = alpha[i];
            alpha[i] = (old - g / q_diag[i]).clamp(0.0, c);
            let delta = alpha[i] - old;
            if delta != 0.0 {
                for (j, v) in z.iter() {
                    w[j] += delta * v;
                }
            }
        }
        let dual = 0.5 * w.iter().map(|x| x * x).sum::<f64>() - alpha.iter().sum::<f64>();
        history.push(dual);
        if max_violation < params.epsilon {
            converged = true;
            break;
        }
    }
    if order.is_empty() {
        max_violation = 0.0;
    }

    Solution {
        weights: w,
        alphas: alpha,
        epochs,
        converged,
        dual_history: history,
        max_violation,
    }
}
