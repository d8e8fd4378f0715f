//! Integral weights in fundamental-weight coordinates.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A weight `Σ c_j ω_j`, stored as the coefficient vector `(c_1, …, c_r)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn new(coords: Vec<i64>) -> Self {
        Weight(coords)
    }

    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    /// The fundamental weight `ω_j` (1-based).
    pub fn fundamental(rank: usize, j: usize) -> Self {
        let mut c = vec![0; rank];
        c[j - 1] = 1;
        Weight(c)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Sum of the coordinates.
    pub fn level(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn scaled(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|c| c * k).collect())
    }

    /// Parses `"1,0,2"`; an empty string is the rank-0 weight.
    pub fn parse(s: &str) -> Result<Weight, String> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Weight(Vec::new()));
        }
        s.split(',')
            .map(|p| p.trim().parse::<i64>().map_err(|e| format!("bad coordinate {p:?}: {e}")))
            .collect::<Result<Vec<_>, _>>()
            .map(Weight)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Add<&Weight> for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), rhs.rank());
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&Weight> for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), rhs.rank());
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|c| -c).collect())
    }
}

impl From<Vec<i64>> for Weight {
    fn from(v: Vec<i64>) -> Self {
        Weight(v)
    }
}

/// All dominant weights of the given rank with coordinate sum at most `max_level`,
/// in lexicographic order.
pub fn dominant_weights_up_to(rank: usize, max_level: i64) -> Vec<Weight> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; rank];
    fn rec(pos: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Weight>) {
        if pos == cur.len() {
            out.push(Weight(cur.clone()));
            return;
        }
        for v in 0..=left {
            cur[pos] = v;
            rec(pos + 1, left - v, cur, out);
        }
        cur[pos] = 0;
    }
    rec(0, max_level, &mut cur, &mut out);
    out.sort();
    out
}
