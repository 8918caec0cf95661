use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::ranker::{RankedEntry, RankedList};

/// One line of the ranked output file.
#[derive(Clone, Debug, PartialEq)]
pub struct RankedRow {
    pub entity_id: String,
    /// 1-based.
    pub rank: usize,
    pub score: f64,
    pub sentence_id: String,
    pub text: String,
}

fn one_line(s: &str) -> String {
    s.split(['\t', '\n', '\r']).collect::<Vec<_>>().join(" ")
}

/// `entity_id \t rank \t score \t sentence_id \t text`, scores with six
/// decimals.
pub fn write_ranked(rows: &[RankedRow]) -> String {
    let mut out = String::new();
    for r in rows {
        writeln!(
            out,
            "{}\t{}\t{:.6}\t{}\t{}",
            r.entity_id,
            r.rank,
            r.score,
            r.sentence_id,
            one_line(&r.text)
        )
        .unwrap();
    }
    out
}

pub fn parse_ranked(src: &str) -> Result<Vec<RankedRow>> {
    let mut rows = Vec::new();
    for (no, line) in src.lines().enumerate().map(|(i, l)| (i + 1, l)) {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.splitn(5, '\t').collect();
        let [entity_id, rank, score, sentence_id, text] = f[..] else {
            return Err(Error::malformed(no, "expected 5 tab-separated fields"));
        };
        rows.push(RankedRow {
            entity_id: entity_id.to_string(),
            rank: rank
                .parse()
                .map_err(|_| Error::malformed(no, format!("bad rank {rank:?}")))?,
            score: score
                .parse()
                .map_err(|_| Error::malformed(no, format!("bad score {score:?}")))?,
            sentence_id: sentence_id.to_string(),
            text: text.to_string(),
        });
    }
    Ok(rows)
}

/// Groups rows into ranked lists in order of first appearance, each sorted
/// by rank.
pub fn rows_to_lists(rows: &[RankedRow]) -> Vec<RankedList> {
    let mut lists: Vec<RankedList> = Vec::new();
    for r in rows {
        let idx = match lists.iter().position(|l| l.group_id == r.entity_id) {
            Some(i) => i,
            None => {
                lists.push(RankedList {
                    group_id: r.entity_id.clone(),
                    entries: Vec::new(),
                });
                lists.len() - 1
            }
        };
        lists[idx].entries.push(RankedEntry {
            item_id: r.sentence_id.clone(),
            score: r.score,
            index: r.rank,
        });
    }
    for l in &mut lists {
        l.entries.sort_by_key(|e| e.index);
    }
    lists
}
