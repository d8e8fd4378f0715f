//! Half-space descriptions of branching cones.
//!
//! A [`ConeH`] is a homogeneous system `A x ≥ 0`, `E x = 0` over named coordinate
//! blocks. Weight blocks hold fundamental-weight coordinates; string blocks hold
//! string parameters `t_1 … t_N`. Derived weight blocks (μ of the tensor cone, η
//! of the Levi cone) are kept as explicit coordinates fixed by equality rows.
//!
//! Rows are stored integral: denominators cleared, divided by their gcd,
//! deduplicated and sorted. Equalities additionally get a canonical sign.

mod builders;
pub mod coweight;
pub mod tree;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::rootsys::Q;

pub use builders::{edge_block_name, levi_cone, string_block_name, string_cone, tree_fiber_cone, triple_cone};
pub use coweight::{
    coweight_value, degeneracy_pullback, degeneracy_pushforward, face_pullback, face_pullback_with_rank,
    face_pushforward, CoweightTuple,
};
pub use tree::Tree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockKind {
    Weight,
    String,
    Filling,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Block {
    pub name: String,
    pub kind: BlockKind,
    pub offset: usize,
    pub len: usize,
    /// Determined by equality rows from the other blocks.
    pub derived: bool,
}

/// Direction of the per-letter bound tying the string to `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LambdaBound {
    /// `t_k ≤ ⟨λ, α_{i_k}^∨⟩ − Σ_{ℓ>k} a_{i_ℓ i_k} t_ℓ`
    #[default]
    Upper,
    /// `t_k + Σ_{ℓ>k} a_{i_k i_ℓ} t_ℓ ≥ ⟨λ, α_{i_k}^∨⟩`
    Lower,
}

/// Sign convention for the derived weight of the tensor cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MuSign {
    /// `μ = λ + β − Σ t_k α_{i_k}`
    #[default]
    LambdaPlusBetaMinusString,
    /// `μ = Σ t_k α_{i_k} − λ + β`
    StringMinusLambdaPlusBeta,
}

/// How `⟨β, α_j^∨⟩` enters the trail inequalities from `s_j ω_j` to `w_0 ω_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BetaShift {
    /// `Σ d_k t_k + ⟨β, α_j^∨⟩ ≥ 0`
    #[default]
    Plus,
    /// `Σ d_k t_k − ⟨β, α_j^∨⟩ ≥ 0`
    Minus,
}

/// Convention switches for the cone builders. The defaults are the conventions
/// whose slice counts agree with the character oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ConeVariant {
    #[serde(default)]
    pub lambda_bound: LambdaBound,
    #[serde(default)]
    pub mu_sign: MuSign,
    #[serde(default)]
    pub beta_shift: BetaShift,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConeH {
    label: String,
    blocks: Vec<Block>,
    inequalities: Vec<Vec<i64>>,
    equalities: Vec<Vec<i64>>,
}

/// Clears denominators and divides by the gcd. `None` for the zero row.
pub(crate) fn normalize_row(row: &[Q]) -> Option<Vec<i64>> {
    let lcm = row.iter().fold(1i64, |acc, q| acc.lcm(q.denom()));
    let ints: Vec<i64> = row.iter().map(|q| (q * Q::from_integer(lcm)).to_integer()).collect();
    let g = ints.iter().fold(0i64, |g, v| g.gcd(v));
    if g == 0 {
        return None;
    }
    Some(ints.into_iter().map(|v| v / g).collect())
}

fn canonical_sign(mut row: Vec<i64>) -> Vec<i64> {
    if row.iter().find(|&&v| v != 0).is_some_and(|&v| v < 0) {
        for v in row.iter_mut() {
            *v = -*v;
        }
    }
    row
}

/// Accumulates blocks and rational rows, then normalizes into a [`ConeH`].
#[derive(Debug, Clone)]
pub(crate) struct ConeBuilder {
    label: String,
    blocks: Vec<Block>,
    dim: usize,
    inequalities: Vec<Vec<Q>>,
    equalities: Vec<Vec<Q>>,
}

impl ConeBuilder {
    pub(crate) fn new(label: impl Into<String>) -> Self {
        ConeBuilder {
            label: label.into(),
            blocks: Vec::new(),
            dim: 0,
            inequalities: Vec::new(),
            equalities: Vec::new(),
        }
    }

    pub(crate) fn block(&mut self, name: impl Into<String>, kind: BlockKind, len: usize, derived: bool) -> usize {
        let offset = self.dim;
        self.blocks.push(Block {
            name: name.into(),
            kind,
            offset,
            len,
            derived,
        });
        self.dim += len;
        offset
    }

    pub(crate) fn zero_row(&self) -> Vec<Q> {
        vec![Q::from_integer(0); self.dim]
    }

    pub(crate) fn inequality(&mut self, row: Vec<Q>) {
        debug_assert_eq!(row.len(), self.dim);
        self.inequalities.push(row);
    }

    pub(crate) fn equality(&mut self, row: Vec<Q>) {
        debug_assert_eq!(row.len(), self.dim);
        self.equalities.push(row);
    }

    /// `x_{offset+k} ≥ 0` for every coordinate of a block.
    pub(crate) fn nonnegative(&mut self, offset: usize, len: usize) {
        for k in 0..len {
            let mut row = self.zero_row();
            row[offset + k] = Q::from_integer(1);
            self.inequality(row);
        }
    }

    pub(crate) fn build(self) -> ConeH {
        let ineqs: BTreeSet<Vec<i64>> = self.inequalities.iter().filter_map(|r| normalize_row(r)).collect();
        let eqs: BTreeSet<Vec<i64>> = self
            .equalities
            .iter()
            .filter_map(|r| normalize_row(r))
            .map(canonical_sign)
            .collect();
        ConeH {
            label: self.label,
            blocks: self.blocks,
            inequalities: ineqs.into_iter().collect(),
            equalities: eqs.into_iter().collect(),
        }
    }
}

impl ConeH {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.len).sum()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, name: &str) -> Option<&Block> {
        self.blocks.iter().find(|b| b.name == name)
    }

    /// Rows `a` meaning `⟨a, x⟩ ≥ 0`.
    pub fn inequalities(&self) -> &[Vec<i64>] {
        &self.inequalities
    }

    /// Rows `e` meaning `⟨e, x⟩ = 0`.
    pub fn equalities(&self) -> &[Vec<i64>] {
        &self.equalities
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        let dot = |r: &Vec<i64>| -> i128 { r.iter().zip(x).map(|(a, v)| i128::from(*a) * i128::from(*v)).sum() };
        x.len() == self.dim()
            && self.inequalities.iter().all(|r| dot(r) >= 0)
            && self.equalities.iter().all(|r| dot(r) == 0)
    }

    /// Values of one block inside a full coordinate vector.
    pub fn block_values<'a>(&self, name: &str, x: &'a [i64]) -> Option<&'a [i64]> {
        let b = self.block(name)?;
        x.get(b.offset..b.offset + b.len)
    }

    /// The same cone with its blocks laid out in the given order and rows renormalized.
    pub fn reorder_blocks(&self, order: &[&str]) -> Option<ConeH> {
        if order.len() != self.blocks.len() {
            return None;
        }
        let mut builder = ConeBuilder::new(self.label.clone());
        let mut perm = vec![0usize; self.dim()];
        for name in order {
            let b = self.block(name)?;
            let off = builder.block(b.name.clone(), b.kind, b.len, b.derived);
            for k in 0..b.len {
                perm[b.offset + k] = off + k;
            }
        }
        let remap = |r: &Vec<i64>, builder: &ConeBuilder| {
            let mut row = builder.zero_row();
            for (c, &v) in r.iter().enumerate() {
                row[perm[c]] = Q::from_integer(v);
            }
            row
        };
        for r in &self.inequalities {
            let row = remap(r, &builder);
            builder.inequality(row);
        }
        for r in &self.equalities {
            let row = remap(r, &builder);
            builder.equality(row);
        }
        Some(builder.build())
    }

    /// Plain-text H-representation: a `"<rows> <dim+1>"` header, then one row
    /// `b a_1 … a_d` per constraint meaning `b + Σ a_i x_i ≥ 0`; each equality is
    /// written as two opposite inequalities.
    pub fn to_ine(&self) -> String {
        let d = self.dim();
        let n = self.inequalities.len() + 2 * self.equalities.len();
        let mut out = format!("{n} {}\n", d + 1);
        let mut line = |row: &mut dyn Iterator<Item = i64>| {
            out.push('0');
            for v in row {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        };
        for r in &self.inequalities {
            line(&mut r.iter().copied());
        }
        for r in &self.equalities {
            line(&mut r.iter().copied());
            line(&mut r.iter().map(|v| -v));
        }
        out
    }

    /// JSON sidecar naming the coordinate blocks of [`ConeH::to_ine`].
    pub fn blocks_json(&self) -> serde_json::Value {
        serde_json::json!({
            "label": self.label,
            "dimension": self.dim(),
            "blocks": self.blocks,
            "inequalities": self.inequalities.len(),
            "equalities": self.equalities.len(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[(i64, i64)]) -> Vec<Q> {
        v.iter().map(|&(n, d)| Q::new(n, d)).collect()
    }

    #[test]
    fn normalization_clears_denominators_and_gcd() {
        assert_eq!(normalize_row(&q(&[(1, 2), (-1, 2), (0, 1)])), Some(vec![1, -1, 0]));
        assert_eq!(normalize_row(&q(&[(4, 1), (6, 1)])), Some(vec![2, 3]));
        assert_eq!(normalize_row(&q(&[(0, 1), (0, 1)])), None);
        assert_eq!(canonical_sign(vec![0, -2, 1]), vec![0, 2, -1]);
    }

    #[test]
    fn builder_dedups_and_exports() {
        let mut b = ConeBuilder::new("demo");
        let x = b.block("x", BlockKind::Weight, 2, false);
        b.nonnegative(x, 2);
        b.inequality(q(&[(2, 1), (0, 1)]));
        b.equality(q(&[(-1, 3), (1, 3)]));
        let cone = b.build();
        assert_eq!(cone.inequalities(), &[vec![0, 1], vec![1, 0]]);
        assert_eq!(cone.equalities(), &[vec![1, -1]]);
        assert_eq!(cone.to_ine(), "4 3\n0 0 1\n0 1 0\n0 1 -1\n0 -1 1\n");
        let sidecar = cone.blocks_json();
        assert_eq!(sidecar["dimension"], 2);
        assert_eq!(sidecar["blocks"][0]["name"], "x");
        assert!(cone.contains(&[3, 3]));
        assert!(!cone.contains(&[3, 2]));
    }
}
