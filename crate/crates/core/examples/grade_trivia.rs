//! Grades the bundled voted trivia into five percentile grades and shows
//! what the support filter removed.
//!
//! ```text
//! cargo run --example grade_trivia
//! ```

use std::path::Path;

use trivia_miner::corpus::load_trivia;
use trivia_miner::grading::{apply_support_filter, grade_corpus, to_two_grade, GradingConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/mini/train_trivia.jsonl");
    let records = load_trivia(path)?;
    let cfg = GradingConfig::default();

    let supported = apply_support_filter(&records, &cfg);
    println!("{} trivia, {} pass the vote-support filter", records.len(), supported.len());

    let graded = grade_corpus(&records, &cfg)?;
    let mut counts = [0usize; 5];
    for g in &graded {
        counts[g.grade as usize] += 1;
    }
    println!("grade counts 0..=4: {counts:?}");

    let mut best = graded.clone();
    best.sort_by(|a, b| b.lr.total_cmp(&a.lr));
    for g in best.iter().take(3) {
        println!(
            "grade {} lr {:.3} ({}/{})  {}",
            g.grade, g.lr, g.record.votes_interesting, g.record.votes_total, g.record.text
        );
    }

    let two = to_two_grade(&graded);
    let interesting = two.iter().filter(|g| g.grade == 1).count();
    println!("two-grade view: {interesting} interesting, {} not", two.len() - interesting);
    Ok(())
}
