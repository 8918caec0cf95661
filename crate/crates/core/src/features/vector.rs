use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Sparse vector with strictly increasing indices and no explicit zeros.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseVec(Vec<(usize, f64)>);

impl SparseVec {
    /// Builds from `(index, value)` pairs already sorted by index; zeros are
    /// dropped.
    pub fn from_sorted(entries: Vec<(usize, f64)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        SparseVec(entries.into_iter().filter(|(_, v)| *v != 0.0).collect())
    }

    pub fn from_unsorted(mut entries: Vec<(usize, f64)>) -> Self {
        entries.sort_by_key(|e| e.0);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(entries.len());
        for (i, v) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == i => last.1 += v,
                _ => merged.push((i, v)),
            }
        }
        Self::from_sorted(merged)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, index: usize) -> f64 {
        self.0
            .binary_search_by_key(&index, |e| e.0)
            .map_or(0.0, |k| self.0[k].1)
    }

    pub fn max_index(&self) -> Option<usize> {
        self.0.last().map(|e| e.0)
    }

    /// Dot product with a dense vector; indices past its end contribute 0.
    pub fn dot(&self, dense: &[f64]) -> f64 {
        self.0
            .iter()
            .map(|&(i, v)| dense.get(i).map_or(0.0, |w| w * v))
            .sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|(_, v)| v * v).sum()
    }

    pub fn scaled(&self, factor: f64) -> SparseVec {
        SparseVec::from_sorted(self.0.iter().map(|&(i, v)| (i, v * factor)).collect())
    }

    /// `self - other`, merged over the union of indices.
    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        while i < a.len() || j < b.len() {
            match (a.get(i), b.get(j)) {
                (Some(&(ia, va)), Some(&(ib, vb))) if ia == ib => {
                    out.push((ia, va - vb));
                    i += 1;
                    j += 1;
                }
                (Some(&(ia, va)), Some(&(ib, _))) if ia < ib => {
                    out.push((ia, va));
                    i += 1;
                }
                (Some(_), Some(&(ib, vb))) => {
                    out.push((ib, -vb));
                    j += 1;
                }
                (Some(&(ia, va)), None) => {
                    out.push((ia, va));
                    i += 1;
                }
                (None, Some(&(ib, vb))) => {
                    out.push((ib, -vb));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        SparseVec::from_sorted(out)
    }
}

/// One featurized item: a sentence of one group (entity), optionally graded.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureVector {
    pub entries: SparseVec,
    pub group_id: String,
    /// Sentence id; carried as the trailing comment in LETOR files.
    pub item_id: String,
    pub grade: Option<u8>,
}

/// LETOR/SVM-rank lines: `grade qid:<group> idx:val ... # item_id`, with
/// 1-based column indices. Ungraded items are written with grade 0.
pub fn write_letor(vectors: &[FeatureVector]) -> String {
    let mut out = String::new();
    for v in vectors {
        write!(out, "{} qid:{}", v.grade.unwrap_or(0), v.group_id).unwrap();
        for (i, x) in v.entries.iter() {
            write!(out, " {}:{}", i + 1, x).unwrap();
        }
        writeln!(out, " # {}", v.item_id).unwrap();
    }
    out
}

pub fn parse_letor(src: &str) -> Result<Vec<FeatureVector>> {
    let mut out = Vec::new();
    for (no, line) in src.lines().enumerate().map(|(i, l)| (i + 1, l.trim())) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (body, item_id) = match line.split_once('#') {
            Some((b, c)) => (b.trim(), c.trim().to_string()),
            None => (line, format!("line{no}")),
        };
        let mut fields = body.split_whitespace();
        let grade: u8 = fields
            .next()
            .and_then(|g| g.parse().ok())
            .ok_or_else(|| Error::malformed(no, "missing or invalid grade"))?;
        let group_id = fields
            .next()
            .and_then(|q| q.strip_prefix("qid:"))
            .ok_or_else(|| Error::malformed(no, "missing qid"))?
            .to_string();
        let mut entries = Vec::new();
        for f in fields {
            let (i, v) = f
                .split_once(':')
                .ok_or_else(|| Error::malformed(no, format!("bad feature {f:?}")))?;
            let i: usize = i
                .parse()
                .ok()
                .filter(|&i| i >= 1)
                .ok_or_else(|| Error::malformed(no, format!("bad index {i:?}")))?;
            let v: f64 = v
                .parse()
                .map_err(|_| Error::malformed(no, format!("bad value {v:?}")))?;
            if entries.last().is_some_and(|&(prev, _)| prev >= i - 1) {
                return Err(Error::malformed(no, "indices must increase"));
            }
            entries.push((i - 1, v));
        }
        out.push(FeatureVector {
            entries: SparseVec::from_sorted(entries),
            group_id,
            item_id,
            grade: Some(grade),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sparse_arithmetic() {
        let a = SparseVec::from_sorted(vec![(0, 1.0), (2, 3.0)]);
        let b = SparseVec::from_sorted(vec![(1, 1.0), (2, 3.0)]);
        assert_eq!(a.sub(&b), SparseVec::from_sorted(vec![(0, 1.0), (1, -1.0)]));
        assert_eq!(a.dot(&[1.0, 5.0, -2.0]), -5.0);
        assert_eq!(a.dot(&[1.0]), 1.0);
        assert_eq!(a.norm_sq(), 10.0);
        assert_eq!(a.get(2), 3.0);
        assert_eq!(a.get(1), 0.0);
        assert_eq!(
            SparseVec::from_unsorted(vec![(3, 1.0), (1, 2.0), (3, -1.0)]),
            SparseVec::from_sorted(vec![(1, 2.0)])
        );
    }

    #[test]
    fn letor_line() {
        let v = FeatureVector {
            entries: SparseVec::from_sorted(vec![(0, 0.5), (7, 1.0)]),
            group_id: "jack_reacher".into(),
            item_id: "jr#3".into(),
            grade: Some(4),
        };
        let line = write_letor(&[v.clone()]);
        assert_eq!(line, "4 qid:jack_reacher 1:0.5 8:1 # jr#3\n");
        assert_eq!(parse_letor(&line).unwrap(), vec![v]);
        assert!(parse_letor("x qid:a 1:1").is_err());
        assert!(parse_letor("1 qid:a 0:1").is_err());
        assert!(parse_letor("1 qid:a 2:1 1:1").is_err());
    }

    proptest! {
        #[test]
        fn letor_round_trip(
            entries in prop::collection::btree_map(0usize..50, -5.0f64..5.0, 0..10),
            grade in 0u8..5,
        ) {
            let v = FeatureVector {
                entries: SparseVec::from_sorted(entries.into_iter().collect()),
                group_id: "g".into(),
                item_id: "i".into(),
                grade: Some(grade),
            };
            prop_assert_eq!(parse_letor(&write_letor(&[v.clone()])).unwrap(), vec![v]);
        }
    }
}
