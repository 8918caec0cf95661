//! Regenerates the bundled mini corpus under `data/mini/`.
//!
//! Six training movies carry ten voted trivia each. Interesting trivia lean on
//! improvisation, stunts, real locations, superlatives, contradictions and
//! crew members listed in the knowledge base; boring ones describe releases,
//! budgets and reviews. Two held-out movies have pages whose paragraph
//! sentences carry planted gold labels.
//!
//! ```text
//! cargo run --example build_mini_corpus
//! ```

use std::path::Path;

use serde_json::json;
use trivia_miner::corpus::{fallback_annotate, write_annotations, EntityRecord, GoldLabel};

struct Movie {
    id: &'static str,
    title: &'static str,
    director: &'static str,
    cast: [&'static str; 2],
    writer: &'static str,
}

const TRAIN: [Movie; 6] = [
    Movie { id: "harbor_lights", title: "Harbor Lights", director: "Mara Ellison", cast: ["Tom Keller", "Ava Brandt"], writer: "Owen Price" },
    Movie { id: "glass_river", title: "Glass River", director: "Peter Lang", cast: ["Iris Moreau", "Jonah Fell"], writer: "Clara Voss" },
    Movie { id: "last_signal", title: "The Last Signal", director: "Hugo Baines", cast: ["Lila Stone", "Marcus Webb"], writer: "Dana Kerr" },
    Movie { id: "paper_crown", title: "Paper Crown", director: "Nina Petrov", cast: ["Felix Hart", "June Alder"], writer: "Ray Collins" },
    Movie { id: "cold_orbit", title: "Cold Orbit", director: "Simon Drake", cast: ["Vera Lind", "Adam Cole"], writer: "Tessa Grant" },
    Movie { id: "red_meadow", title: "Red Meadow", director: "Alma Ruiz", cast: ["Leo Banks", "Maya Frost"], writer: "Ivan Holt" },
];

const TEST: [Movie; 2] = [
    Movie { id: "silver_harbor", title: "Silver Harbor", director: "Lena Ortiz", cast: ["Daniel Crane", "Ruth Adler"], writer: "Sam Whitfield" },
    Movie { id: "night_engine", title: "Night Engine", director: "Victor Hale", cast: ["Nora Quinn", "Eli Morrow"], writer: "Jade Porter" },
];

// {D} director, {C} first cast member, {K} second, {W} writer.
const INTERESTING: [&str; 10] = [
    "{C} improvised the entire dinner scene, and {D} kept every take.",
    "Despite a broken ankle, {K} performed all of the stunts without a double.",
    "{D} shot the most expensive sequence in a single night.",
    "The crew built a real lighthouse on the coast instead of using a set.",
    "{C} secretly learned to play the cello for the role.",
    "{W} wrote the script in nine days, the fastest draft of the year.",
    "Although the studio hated the ending, {D} refused to change the finale.",
    "{K} was originally cast as the villain but swapped roles with {C}.",
    "The smallest role went to a real fisherman who had never acted before.",
    "{C} refused a stunt double and performed the hardest fall personally.",
];

const BORING: [&str; 10] = [
    "The film was released in theaters in the spring.",
    "The movie was produced on a moderate budget.",
    "Filming took place in the city over several weeks.",
    "The soundtrack album was released in the summer.",
    "The film received mixed reviews from critics.",
    "Principal photography began in the autumn.",
    "The film was distributed by a regional studio.",
    "The poster was designed by a marketing agency.",
    "The home video edition was released with a commentary track.",
    "The story takes place in a small town near the coast.",
];

fn fill(template: &str, m: &Movie) -> String {
    template
        .replace("{D}", m.director)
        .replace("{C}", m.cast[0])
        .replace("{K}", m.cast[1])
        .replace("{W}", m.writer)
}

/// Gold-labelled page paragraphs. Sentences opening with an unresolved
/// pronoun are expected to be dropped by candidate selection.
fn page_paragraphs(m: &Movie) -> Vec<Vec<(String, bool)>> {
    let s = |t: &str, label: bool| (fill(t, m), label);
    let title = m.title;
    vec![
        vec![
            (format!("{title} is a drama film released in the spring."), false),
            s("The film was produced on a moderate budget.", false),
            s("{D} insisted on a real storm and waited three weeks for the worst weather of the year.", true),
            s("It was the first production of the new studio.", false),
            s("Filming took place in a coastal town over several weeks.", false),
            s("{C} improvised most of the lines during the storm scene.", true),
        ],
        vec![
            s("Despite a fractured wrist, {K} performed the stunts in the harbor chase.", true),
            s("He later called the shoot the hardest of his career.", true),
            s("The soundtrack was released as an album in the summer.", false),
            s("The crew built a full-size ship instead of using miniatures.", true),
            s("The film received mixed reviews from critics.", false),
            s("The story follows a fisherman and his daughter.", false),
            s("{W} wrote the final scene in a single night before filming.", true),
        ],
        vec![
            s("The film was distributed by a regional studio.", false),
            s("{C} secretly learned to sail for the role and refused a stunt double.", true),
            s("Principal photography began in the autumn.", false),
            s("They returned for a sequel two years later.", false),
            s("The youngest extra on set was a real harbor pilot who had never acted.", true),
            s("A home video edition was released the following year.", false),
            s("Although the studio wanted a happy ending, {D} kept the original finale.", true),
            s("The running time of the film is two hours.", false),
            s("This was changed in the final cut.", false),
            s("The film was shown at several festivals.", false),
        ],
    ]
}

fn kb_record(m: &Movie) -> EntityRecord {
    EntityRecord::bare(m.id)
        .with_display_name(m.title)
        .with_alias(m.title)
        .with_attribute("Director", m.director)
        .with_attribute("Cast", m.cast[0])
        .with_attribute("Cast", m.cast[1])
        .with_attribute("Writer", m.writer)
}

fn kb_line(m: &Movie) -> String {
    json!({
        "entity_id": m.id,
        "display_name": m.title,
        "aliases": [m.title],
        "attributes": {
            "Director": [m.director],
            "Cast": [m.cast[0], m.cast[1]],
            "Writer": [m.writer],
        },
    })
    .to_string()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/mini");
    std::fs::create_dir_all(&dir)?;

    let kb: Vec<String> = TRAIN.iter().chain(&TEST).map(kb_line).collect();
    std::fs::write(dir.join("kb.jsonl"), kb.join("\n") + "\n")?;

    let mut trivia = String::new();
    let mut train_sentences = Vec::new();
    for (mi, m) in TRAIN.iter().enumerate() {
        let entity = kb_record(m);
        // Each movie draws five templates of each kind, alternating halves.
        for (ti, t) in INTERESTING.iter().enumerate().skip(mi % 2).step_by(2) {
            let total = 100 + 37 * ((mi * 10 + ti) % 9) as u64;
            let lr = 0.78 + 0.02 * ((mi + 3 * ti) % 9) as f64;
            let text = fill(t, m);
            let line = json!({
                "entity_id": m.id,
                "text": text,
                "votes_interesting": (total as f64 * lr).round() as u64,
                "votes_total": total,
                "source": "mini",
            });
            trivia.push_str(&format!("{line}\n"));
            train_sentences.push(fallback_annotate(&text, &entity)?);
        }
        for (ti, t) in BORING.iter().enumerate().skip((mi / 2) % 2).step_by(2) {
            let total = 12 + 5 * ((mi * 7 + ti) % 8) as u64;
            let lr = 0.1 + 0.04 * ((2 * mi + ti) % 8) as f64;
            let text = fill(t, m);
            let line = json!({
                "entity_id": m.id,
                "text": text,
                "votes_interesting": (total as f64 * lr).round() as u64,
                "votes_total": total,
                "source": "mini",
            });
            trivia.push_str(&format!("{line}\n"));
            train_sentences.push(fallback_annotate(&text, &entity)?);
        }
    }
    // Keep every other training movie unannotated so the pipeline exercises
    // its fallback annotator.
    train_sentences.retain(|s| TRAIN.iter().step_by(2).any(|m| m.id == s.entity_id));
    std::fs::write(dir.join("train_trivia.jsonl"), trivia)?;
    std::fs::write(dir.join("train_annotations.jsonl"), write_annotations(&train_sentences))?;

    let mut pages = String::new();
    let mut test_sentences = Vec::new();
    for m in &TEST {
        let entity = kb_record(m);
        let paragraphs = page_paragraphs(m);
        let mut blocks = vec![json!({"kind": "infobox", "text": format!("Directed by {} Written by {}", m.director, m.writer)})];
        for p in &paragraphs {
            let text: Vec<&str> = p.iter().map(|(s, _)| s.as_str()).collect();
            blocks.push(json!({"kind": "paragraph", "text": text.join(" ")}));
            for (s, label) in p {
                let mut a = fallback_annotate(s, &entity)?;
                a.gold_label = Some(if *label { GoldLabel::Interesting } else { GoldLabel::Boring });
                test_sentences.push(a);
            }
        }
        blocks.insert(2, json!({"kind": "list", "text": format!("Cast: {}, {}", m.cast[0], m.cast[1])}));
        blocks.push(json!({"kind": "reference", "text": "Box office figures. Retrieved in the spring."}));
        pages.push_str(&format!("{}\n", json!({"entity_id": m.id, "blocks": blocks})));
    }
    std::fs::write(dir.join("pages.jsonl"), pages)?;
    std::fs::write(dir.join("test_annotations.jsonl"), write_annotations(&test_sentences))?;

    println!(
        "wrote {} trivia, {} page sentences to {}",
        TRAIN.len() * 10,
        test_sentences.len(),
        dir.display()
    );
    Ok(())
}
