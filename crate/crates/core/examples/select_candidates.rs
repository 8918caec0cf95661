//! Splits a page into paragraph sentences and keeps the ones that read well
//! out of context.
//!
//! ```text
//! cargo run --example select_candidates
//! ```

use trivia_miner::corpus::{fallback_annotate, parse_pages, EntityRecord};
use trivia_miner::selection::{extract_cct, select_candidates, split_sentences, SelectionConfig};

const PAGE: &str = r#"{"entity_id": "forrest_gump", "blocks": [
  {"kind": "infobox", "text": "Directed by Robert Zemeckis"},
  {"kind": "paragraph", "text": "Hanks revealed that he signed onto the film after an hour and a half of reading the script. He initially wanted to ease Forrest's pronounced Southern accent. It really reminds me of my childhood. Robert Zemeckis shot the ping-pong scenes without a ball."},
  {"kind": "reference", "text": "Retrieved in 1994."}
]}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let page = parse_pages(&PAGE.replace('\n', " "))?.remove(0);
    let entity = EntityRecord::bare("forrest_gump")
        .with_display_name("Forrest Gump")
        .with_attribute("Director", "Robert Zemeckis")
        .with_attribute("Cast", "Tom Hanks");

    let sentences = extract_cct(&page)
        .iter()
        .flat_map(|p| split_sentences(p))
        .map(|s| fallback_annotate(&s, &entity))
        .collect::<Result<Vec<_>, _>>()?;
    let kept = select_candidates(&sentences, &entity, &SelectionConfig::movie());

    for s in &sentences {
        let mark = if kept.iter().any(|k| k.sentence_id == s.sentence_id) { "keep" } else { "drop" };
        println!("{mark}  {}", s.raw);
    }
    Ok(())
}
