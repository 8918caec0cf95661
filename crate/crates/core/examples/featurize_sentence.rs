//! Shows the unigram, linguistic and entity features of a few sentences and
//! the sparse vector they turn into.
//!
//! ```text
//! cargo run --example featurize_sentence
//! ```

use trivia_miner::corpus::{fallback_annotate, EntityRecord};
use trivia_miner::features::{
    entity_features, featurize_item, fit_feature_space, linguistic_features, sentence_fog, BlockSet, Lexicons,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let entity = EntityRecord::bare("the_host")
        .with_display_name("The Host")
        .with_attribute("Director", "Bong Joon-ho")
        .with_attribute("Writer", "Bong Joon-ho")
        .with_attribute("Cast", "Song Kang-ho");
    let texts = [
        "Bong Joon-ho wrote the largest monster scene in a single night.",
        "Although the studio wanted a sequel, Song Kang-ho refused to return.",
        "The film was released in the summer.",
    ];
    let sentences = texts
        .iter()
        .map(|t| fallback_annotate(t, &entity))
        .collect::<Result<Vec<_>, _>>()?;
    let lex = Lexicons::default();

    let train: Vec<_> = sentences.iter().map(|s| (s, &entity)).collect();
    let space = fit_feature_space(&train, &lex, BlockSet::ALL)?;
    println!("feature space: {} columns, checksum {}", space.len(), &space.checksum()[..12]);

    for s in &sentences {
        println!("\n{}", s.raw);
        println!("  fog        {:.2} ({:?})", sentence_fog(s, &lex).score, sentence_fog(s, &lex).bin);
        println!("  linguistic {:?}", linguistic_features(s, &lex));
        println!("  entity     {:?}", entity_features(s, &entity));
        let v = featurize_item(s, &entity, &space, &lex, None)?;
        let named: Vec<String> = v
            .entries
            .iter()
            .map(|(i, w)| format!("{}={w:.2}", space.names()[i]))
            .collect();
        println!("  vector     {}", named.join(" "));
    }
    Ok(())
}
