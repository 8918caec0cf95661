//! Evaluation toolkit on small hand-made inputs: precision, recall, NDCG,
//! Cohen's kappa and a paired t-test.
//!
//! ```text
//! cargo run --example evaluate
//! ```

use trivia_miner::eval::{
    kappa, ndcg_at_k, paired_t_test, precision_at_k, recall_curve, ConfusionTable,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Relevance of a ranked list of ten sentences, four relevant in total.
    let hits = [true, false, true, true, false, false, false, true, false, false];
    println!("P@5  {:.2}", precision_at_k(&hits, 5));
    let curve: Vec<String> = recall_curve(&hits, 4)?.iter().map(|r| format!("{r:.2}")).collect();
    println!("recall@1..10 {}", curve.join(" "));

    let grades = [3, 0, 4, 2, 0, 1];
    println!("NDCG@5 of {grades:?} = {:.4}", ndcg_at_k(&grades, 5));

    let table: ConfusionTable = "40,10,10,40".parse()?;
    let k = kappa(&table)?;
    println!("kappa {:.3} ({}), observed {:.2}, chance {:.2}", k.kappa, k.band, k.p_o, k.p_e);

    let system = [0.8, 0.7, 0.9, 0.6, 0.8, 0.7];
    let baseline = [0.5, 0.6, 0.5, 0.4, 0.6, 0.5];
    let t = paired_t_test(&system, &baseline)?;
    println!("paired t {:.3}, df {}, p {:.4}, significant {}", t.t, t.df, t.p_value, t.significant);
    Ok(())
}
