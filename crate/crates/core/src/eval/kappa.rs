use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two observers' yes/no judgments over the same items.
///
/// `a`: both yes, `b`: first yes and second no, `c`: first no and second
/// yes, `d`: both no.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionTable {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

impl ConfusionTable {
    pub fn new(a: u64, b: u64, c: u64, d: u64) -> Self {
        ConfusionTable { a, b, c, d }
    }

    /// Counts agreement between two label sequences.
    pub fn from_labels(first: &[bool], second: &[bool]) -> Result<Self> {
        if first.len() != second.len() {
            return Err(Error::LengthMismatch(first.len(), second.len()));
        }
        let mut t = ConfusionTable::new(0, 0, 0, 0);
        for (&x, &y) in first.iter().zip(second) {
            match (x, y) {
                (true, true) => t.a += 1,
                (true, false) => t.b += 1,
                (false, true) => t.c += 1,
                (false, false) => t.d += 1,
            }
        }
        Ok(t)
    }

    pub fn m1(&self) -> u64 {
        self.a + self.b
    }
    pub fn m0(&self) -> u64 {
        self.c + self.d
    }
    pub fn n1(&self) -> u64 {
        self.a + self.c
    }
    pub fn n0(&self) -> u64 {
        self.b + self.d
    }
    pub fn n(&self) -> u64 {
        self.a + self.b + self.c + self.d
    }

    pub fn transposed(&self) -> Self {
        ConfusionTable::new(self.a, self.c, self.b, self.d)
    }
}

impl FromStr for ConfusionTable {
    type Err = Error;

    /// Parses `"a,b,c,d"`.
    fn from_str(s: &str) -> Result<Self> {
        let cells: Vec<u64> = s
            .split(',')
            .map(|x| x.trim().parse::<u64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Format(format!("confusion table {s:?}: {e}")))?;
        match cells[..] {
            [a, b, c, d] => Ok(ConfusionTable::new(a, b, c, d)),
            _ => Err(Error::Format(format!("confusion table {s:?}: expected a,b,c,d"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KappaBand {
    LessThanChance,
    Chance,
    Slight,
    Fair,
    Moderate,
    Substantial,
    AlmostPerfect,
}

impl KappaBand {
    /// Upper edges are inclusive: 0.20 is slight, 0.60 moderate. Values are
    /// compared after rounding to 9 decimals so that 0.6 computed as
    /// 0.6000000000000001 stays moderate.
    pub fn of(kappa: f64) -> KappaBand {
        let k = (kappa * 1e9).round() / 1e9;
        match k {
            k if k < 0.0 => KappaBand::LessThanChance,
            k if k < 0.01 => KappaBand::Chance,
            k if k <= 0.20 => KappaBand::Slight,
            k if k <= 0.40 => KappaBand::Fair,
            k if k <= 0.60 => KappaBand::Moderate,
            k if k <= 0.80 => KappaBand::Substantial,
            _ => KappaBand::AlmostPerfect,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            KappaBand::LessThanChance => "less than chance",
            KappaBand::Chance => "chance",
            KappaBand::Slight => "slight",
            KappaBand::Fair => "fair",
            KappaBand::Moderate => "moderate",
            KappaBand::Substantial => "substantial",
            KappaBand::AlmostPerfect => "almost perfect",
        }
    }
}

impl fmt::Display for KappaBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Kappa {
    pub p_o: f64,
    pub p_e: f64,
    pub kappa: f64,
    pub band: KappaBand,
}

/// Cohen's kappa for two observers.
pub fn kappa(t: &ConfusionTable) -> Result<Kappa> {
    let n = t.n();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let n = n as f64;
    let p_o = (t.a + t.d) as f64 / n;
    let p_e = (t.n1() as f64 / n) * (t.m1() as f64 / n) + (t.n0() as f64 / n) * (t.m0() as f64 / n);
    if p_e == 1.0 {
        return Err(Error::DegenerateMarginals);
    }
    let k = (p_o - p_e) / (1.0 - p_e);
    Ok(Kappa {
        p_o,
        p_e,
        kappa: k,
        band: KappaBand::of(k),
    })
}
