//! Trains the pairwise ranker on the bundled graded trivia, prints the most
//! telling features, and ranks one held-out page.
//!
//! ```text
//! cargo run --example train_and_rank
//! ```

use std::path::Path;

use trivia_miner::pipeline::{rank_candidates, run_selection_phase, run_train_phase, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/mini");
    let mut cfg = RunConfig::from_file(&data.join("run.conf"))?;
    cfg.paths.out_dir = std::env::temp_dir().join("trivia-train-and-rank");

    let trained = run_train_phase(&cfg)?;
    let report = &trained.model.train_report;
    println!(
        "{} preference pairs, {} epochs, converged {}, objective {:.3}",
        report.pair_count, report.iterations, report.converged, report.final_objective
    );
    println!("heaviest features:");
    for (name, w) in trained.model.top_features(&trained.space, 8) {
        println!("  {w:+.3}  {name}");
    }

    let selected = run_selection_phase(&cfg)?;
    let rows = rank_candidates(&selected[..1], &trained.space, &trained.model, 5)?;
    println!("\ntop 5 for {}:", selected[0].entity.entity_id);
    for r in rows {
        println!("  {}. {:+.3}  {}", r.rank, r.score, r.text);
    }
    Ok(())
}
