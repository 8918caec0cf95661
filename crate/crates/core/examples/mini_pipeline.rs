//! End-to-end run on the bundled mini corpus: grade, featurize, train, select
//! candidates, rank, then compare against the random and superlative
//! baselines.
//!
//! ```text
//! cargo run --example mini_pipeline [U+L+E|U|...]
//! ```

use std::path::Path;

use trivia_miner::pipeline::{run_all, Baseline, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/mini");
    let mut cfg = RunConfig::from_file(&data.join("run.conf"))?;
    if let Some(blocks) = std::env::args().nth(1) {
        cfg.blocks = blocks.parse()?;
    }
    let out = std::env::temp_dir().join("trivia-mini-example");
    cfg.paths.out_dir = out.clone();

    for baseline in [Baseline::Random, Baseline::SupposBest, Baseline::Classifier] {
        cfg.baseline = Some(baseline);
        let result = run_all(&cfg)?;
        if baseline == Baseline::Random {
            let report = &result.train.model.train_report;
            println!(
                "trained on {} pairs in {} epochs (objective {:.3})",
                report.pair_count, report.iterations, report.final_objective
            );
            println!("WTM {:<14} P@10 {:.3}", cfg.blocks.to_string(), result.reports["wtm"].means.p_at_k);
            for row in result.runs[0].rows.iter().take(5) {
                println!("  {} {:>2} {:>8.3}  {}", row.entity_id, row.rank, row.score, row.text);
            }
        }
        let r = &result.reports[baseline.name()];
        println!("{:<18} P@10 {:.3} (runs averaged: {})", baseline.name(), r.means.p_at_k, r.runs_averaged);
    }
    println!("artifacts in {}", out.display());
    Ok(())
}
