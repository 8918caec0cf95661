use crate::error::{Error, Result};

/// Share of the first `k` positions holding a positive. The denominator is
/// `k` even when the list is shorter.
pub fn precision_at_k(labels: &[bool], k: usize) -> f64 {
    assert!(k >= 1, "k must be at least 1");
    let hits = labels.iter().take(k).filter(|&&l| l).count();
    hits as f64 / k as f64
}

/// `curve[j]` is the fraction of all `total_positives` found in the first
/// `j + 1` positions.
pub fn recall_curve(labels: &[bool], total_positives: usize) -> Result<Vec<f64>> {
    if total_positives == 0 {
        return Err(Error::ZeroPositives);
    }
    let mut seen = 0usize;
    Ok(labels
        .iter()
        .map(|&l| {
            seen += usize::from(l);
            seen as f64 / total_positives as f64
        })
        .collect())
}

fn gain(g: u8) -> f64 {
    2f64.powi(i32::from(g)) - 1.0
}

pub fn dcg_at_k(grades: &[u8], k: usize) -> f64 {
    grades
        .iter()
        .take(k)
        .enumerate()
        .map(|(i, &g)| gain(g) / ((i + 2) as f64).log2())
        .sum()
}

/// DCG of `ranked` over the DCG of the best ordering of `pool`. `pool` holds
/// every judged grade for the group, so truncated runs are not flattered.
pub fn ndcg_against(ranked: &[u8], pool: &[u8], k: usize) -> f64 {
    let mut ideal = pool.to_vec();
    ideal.sort_unstable_by(|a, b| b.cmp(a));
    let idcg = dcg_at_k(&ideal, k);
    if idcg == 0.0 {
        0.0
    } else {
        dcg_at_k(ranked, k) / idcg
    }
}

/// NDCG with gain `2^g − 1` and discount `log2(i + 1)`; 0 when no grade is
/// positive.
pub fn ndcg_at_k(grades: &[u8], k: usize) -> f64 {
    assert!(k >= 1, "k must be at least 1");
    ndcg_against(grades, grades, k)
}
