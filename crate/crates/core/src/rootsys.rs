//! Root data and Weyl-group words for finite root systems.
//!
//! Weights live in fundamental-weight coordinates, so the pairing with a simple
//! coroot is a coordinate lookup. Simple roots are the columns of the Cartan
//! matrix, with the convention `a_ij = ⟨α_j, α_i^∨⟩`.
//!
//! Only type A is built natively ([`RootSystem::type_a`]); any finite-type Cartan
//! matrix is accepted by [`RootSystem::from_cartan`] for pairings, reflections,
//! dominance and the character oracle.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::weight::Weight;

pub type Q = Ratio<i64>;

/// Upper bound on the number of positive roots accepted from an arbitrary
/// Cartan matrix; anything larger is not of finite type at desk scale.
const MAX_POSITIVE_ROOTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootSystem {
    rank: usize,
    cartan: Vec<Vec<i64>>,
    /// Positive roots in simple-root coordinates, sorted by height then lexicographically.
    positive_roots: Vec<Vec<i64>>,
    /// Matching positive coroots in simple-coroot coordinates.
    positive_coroots: Vec<Vec<i64>>,
    /// `d_i` with `d_i a_ij = d_j a_ji`; `(α_i, α_i) = 2 d_i`.
    symmetrizer: Vec<i64>,
    inverse_cartan: Vec<Vec<Q>>,
    type_a: bool,
}

/// A word `(i_1, …, i_L)` in the simple reflections, letters 1-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ReducedWord(pub Vec<usize>);

impl ReducedWord {
    pub fn new(letters: Vec<usize>) -> Self {
        ReducedWord(letters)
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &ReducedWord) -> ReducedWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        ReducedWord(v)
    }

    pub fn parse(s: &str) -> std::result::Result<ReducedWord, String> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(ReducedWord(Vec::new()));
        }
        s.split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|e| format!("bad letter {p:?}: {e}")))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(ReducedWord)
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl RootSystem {
    /// Cartan data of type `A_rank`.
    pub fn type_a(rank: usize) -> Result<Self> {
        if rank == 0 {
            return invalid("rank must be at least 1");
        }
        let cartan = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| match i.abs_diff(j) {
                        0 => 2,
                        1 => -1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect();
        Self::from_cartan(cartan)
    }

    /// Builds root data from a finite-type Cartan matrix.
    pub fn from_cartan(cartan: Vec<Vec<i64>>) -> Result<Self> {
        let rank = cartan.len();
        if rank == 0 {
            return invalid("Cartan matrix must be non-empty");
        }
        for (i, row) in cartan.iter().enumerate() {
            if row.len() != rank {
                return invalid("Cartan matrix must be square");
            }
            for (j, &a) in row.iter().enumerate() {
                if i == j && a != 2 {
                    return invalid(format!("diagonal entry a_{i}{i} must be 2"));
                }
                if i != j && (a > 0 || (a == 0) != (cartan[j][i] == 0)) {
                    return invalid(format!("entry a_{i}{j} = {a} is not a generalized Cartan entry"));
                }
            }
        }
        let symmetrizer = symmetrizer(&cartan)?;
        let inverse_cartan = invert(&cartan)
            .ok_or_else(|| Error::InvalidArgument("Cartan matrix is singular".into()))?;
        let positive_roots = positive_roots(&cartan)?;
        let positive_coroots = positive_roots
            .iter()
            .map(|root| {
                let norm: i64 = (0..rank)
                    .flat_map(|i| (0..rank).map(move |j| (i, j)))
                    .map(|(i, j)| root[i] * root[j] * symmetrizer[i] * cartan[i][j])
                    .sum();
                root.iter()
                    .zip(&symmetrizer)
                    .map(|(n, d)| 2 * n * d / norm)
                    .collect()
            })
            .collect();
        let type_a = (0..rank).all(|i| {
            (0..rank).all(|j| cartan[i][j] == if i == j { 2 } else if i.abs_diff(j) == 1 { -1 } else { 0 })
        });
        Ok(RootSystem {
            rank,
            cartan,
            positive_roots,
            positive_coroots,
            symmetrizer,
            inverse_cartan,
            type_a,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// `a_ij` with 1-based indices.
    pub fn cartan_entry(&self, i: usize, j: usize) -> i64 {
        self.cartan[i - 1][j - 1]
    }

    pub fn n_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn positive_coroots(&self) -> &[Vec<i64>] {
        &self.positive_coroots
    }

    pub fn symmetrizer(&self) -> &[i64] {
        &self.symmetrizer
    }

    pub fn is_type_a(&self) -> bool {
        self.type_a
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index == 0 || index > self.rank {
            return invalid(format!("simple index {index} out of range 1..={}", self.rank));
        }
        Ok(())
    }

    fn check_weight(&self, w: &Weight) -> Result<()> {
        if w.rank() != self.rank {
            return invalid(format!("weight {w} has rank {}, expected {}", w.rank(), self.rank));
        }
        Ok(())
    }

    pub(crate) fn require_dominant(&self, w: &Weight) -> Result<()> {
        self.check_weight(w)?;
        if !w.is_dominant() {
            return invalid(format!("weight {w} is not dominant"));
        }
        Ok(())
    }

    pub fn fundamental_weight(&self, j: usize) -> Weight {
        Weight::fundamental(self.rank, j)
    }

    /// `ρ`, the sum of the fundamental weights.
    pub fn rho(&self) -> Weight {
        Weight(vec![1; self.rank])
    }

    /// `α_i` in fundamental-weight coordinates (column `i` of the Cartan matrix).
    pub fn simple_root(&self, i: usize) -> Weight {
        Weight((0..self.rank).map(|k| self.cartan[k][i - 1]).collect())
    }

    /// `Σ n_i α_i` in fundamental-weight coordinates.
    pub fn root_combination(&self, coeffs: &[i64]) -> Weight {
        Weight(
            (0..self.rank)
                .map(|k| (0..self.rank).map(|i| self.cartan[k][i] * coeffs[i]).sum())
                .collect(),
        )
    }

    /// `⟨w, α_i^∨⟩`.
    pub fn coroot_pairing(&self, alpha_index: usize, w: &Weight) -> Result<i64> {
        self.check_index(alpha_index)?;
        self.check_weight(w)?;
        Ok(w.0[alpha_index - 1])
    }

    /// `⟨w, β^∨⟩` for the positive coroot with simple-coroot coordinates `coroot`.
    pub fn pairing_with_coroot(&self, w: &Weight, coroot: &[i64]) -> i64 {
        w.0.iter().zip(coroot).map(|(a, b)| a * b).sum()
    }

    /// `s_i(w) = w − ⟨w, α_i^∨⟩ α_i`.
    pub fn simple_reflection(&self, index: usize, w: &Weight) -> Result<Weight> {
        self.check_index(index)?;
        self.check_weight(w)?;
        Ok(self.reflect(index, w))
    }

    pub(crate) fn reflect(&self, index: usize, w: &Weight) -> Weight {
        let p = w.0[index - 1];
        if p == 0 {
            return w.clone();
        }
        Weight(
            w.0.iter()
                .enumerate()
                .map(|(k, c)| c - p * self.cartan[k][index - 1])
                .collect(),
        )
    }

    /// `s_{i_1} ⋯ s_{i_L}(w)`.
    pub fn apply_word(&self, word: &ReducedWord, w: &Weight) -> Weight {
        word.0.iter().rev().fold(w.clone(), |acc, &i| self.reflect(i, &acc))
    }

    /// Simple-root coordinates of `w`, solving `A x = w` exactly.
    pub fn root_coordinates(&self, w: &Weight) -> Vec<Q> {
        (0..self.rank)
            .map(|i| {
                (0..self.rank)
                    .map(|j| self.inverse_cartan[i][j] * Q::from_integer(w.0[j]))
                    .fold(Q::zero(), |a, b| a + b)
            })
            .collect()
    }

    /// `a ≤ b` in dominance order: `b − a` is a nonnegative integer combination of simple roots.
    pub fn dominance_leq(&self, a: &Weight, b: &Weight) -> bool {
        if a.rank() != self.rank || b.rank() != self.rank {
            return false;
        }
        let diff = b - a;
        self.root_coordinates(&diff)
            .iter()
            .all(|c| c.is_integer() && *c >= Q::zero())
    }

    /// Maps `w` into the dominant chamber by simple reflections; returns the
    /// dominant representative and the number of reflections used.
    pub fn to_dominant(&self, w: &Weight) -> (Weight, usize) {
        let mut cur = w.clone();
        let mut steps = 0;
        while let Some(i) = cur.0.iter().position(|&c| c < 0) {
            cur = self.reflect(i + 1, &cur);
            steps += 1;
        }
        (cur, steps)
    }

    /// The dual weight `−w_0(w)`, highest weight of `V(w)^*`.
    pub fn dual_weight(&self, w: &Weight) -> Weight {
        if self.type_a {
            let mut c = w.0.clone();
            c.reverse();
            return Weight(c);
        }
        let w0 = self.longest_element_word(&(1..=self.rank).collect());
        -&self.apply_word(&w0, w)
    }

    /// Whether `α` (fundamental-weight coordinates) is a positive root combination.
    fn is_positive_root(&self, alpha: &Weight) -> bool {
        let coords = self.root_coordinates(alpha);
        coords.iter().all(|c| *c >= Q::zero()) && coords.iter().any(|c| *c > Q::zero())
    }

    /// True iff `word` has no shorter expression (every letter increases length).
    pub fn validate_reduced_word(&self, word: &ReducedWord) -> bool {
        if word.0.iter().any(|&i| i == 0 || i > self.rank) {
            return false;
        }
        // s_{i_1}⋯s_{i_{k-1}}(α_{i_k}) > 0 for every k
        (0..word.len()).all(|k| {
            let alpha = self.simple_root(word.0[k]);
            let prefix = ReducedWord(word.0[..k].to_vec());
            self.is_positive_root(&self.apply_word(&prefix, &alpha))
        })
    }

    /// Reduced of length `N` and maps `ρ` to `−ρ`.
    pub fn is_longest_word(&self, word: &ReducedWord) -> bool {
        word.len() == self.n_positive_roots()
            && self.validate_reduced_word(word)
            && self.apply_word(word, &self.rho()) == -&self.rho()
    }

    fn check_subset(&self, subset: &BTreeSet<usize>) -> Result<()> {
        for &i in subset {
            self.check_index(i)?;
        }
        Ok(())
    }

    /// Lexicographically smallest reduced word for the longest element of the
    /// parabolic subgroup `W_I`.
    pub fn longest_element_word(&self, subset: &BTreeSet<usize>) -> ReducedWord {
        self.extend_greedily(ReducedWord(Vec::new()), subset)
    }

    /// Appends the smallest length-increasing letter from `letters` until none exists.
    fn extend_greedily(&self, mut word: ReducedWord, letters: &BTreeSet<usize>) -> ReducedWord {
        'outer: loop {
            for &i in letters {
                let alpha = self.simple_root(i);
                if self.is_positive_root(&self.apply_word(&word, &alpha)) {
                    word.0.push(i);
                    continue 'outer;
                }
            }
            return word;
        }
    }

    /// Length of the longest element of `W_I`.
    pub fn longest_length(&self, subset: &BTreeSet<usize>) -> usize {
        self.longest_element_word(subset).len()
    }

    /// All reduced words of the longest element of `W_I`, lexicographically sorted.
    pub fn reduced_words(&self, subset: &BTreeSet<usize>) -> Result<Vec<ReducedWord>> {
        self.check_subset(subset)?;
        let target = self.longest_length(subset);
        let mut out = Vec::new();
        let mut word = Vec::with_capacity(target);
        self.collect_reduced(&mut word, target, subset, &mut out);
        Ok(out)
    }

    fn collect_reduced(
        &self,
        word: &mut Vec<usize>,
        target: usize,
        letters: &BTreeSet<usize>,
        out: &mut Vec<ReducedWord>,
    ) {
        if word.len() == target {
            out.push(ReducedWord(word.clone()));
            return;
        }
        let prefix = ReducedWord(word.clone());
        for &i in letters {
            if self.is_positive_root(&self.apply_word(&prefix, &self.simple_root(i))) {
                word.push(i);
                self.collect_reduced(word, target, letters, out);
                word.pop();
            }
        }
    }

    /// The default word adapted to the Levi subgroup of `I`: `i_1` is the
    /// lexicographically smallest word for `w_0(I)`, `i_2` the greedy
    /// lexicographically smallest completion to a word for `w_0`.
    pub fn levi_adapted_word(&self, subset: &BTreeSet<usize>) -> Result<(ReducedWord, ReducedWord)> {
        self.check_subset(subset)?;
        let i1 = self.longest_element_word(subset);
        let all: BTreeSet<usize> = (1..=self.rank).collect();
        let full = self.extend_greedily(i1.clone(), &all);
        let i2 = ReducedWord(full.0[i1.len()..].to_vec());
        Ok((i1, i2))
    }

    /// Inner product `(λ, μ)` induced by the symmetrized Cartan matrix.
    pub fn inner_product(&self, a: &Weight, b: &Weight) -> Q {
        let mut acc = Q::zero();
        for i in 0..self.rank {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                acc += self.inverse_cartan[i][j]
                    * Q::from_integer(a.0[i] * b.0[j] * self.symmetrizer[i]);
            }
        }
        acc
    }

    /// `(w, β)` for a root `β` in simple-root coordinates.
    pub fn pair_with_root(&self, w: &Weight, root: &[i64]) -> i64 {
        (0..self.rank).map(|k| root[k] * self.symmetrizer[k] * w.0[k]).sum()
    }
}

fn symmetrizer(cartan: &[Vec<i64>]) -> Result<Vec<i64>> {
    let n = cartan.len();
    let mut d: Vec<Option<Q>> = vec![None; n];
    for start in 0..n {
        if d[start].is_some() {
            continue;
        }
        d[start] = Some(Q::one());
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let di = d[i].unwrap();
            for j in 0..n {
                if i == j || cartan[i][j] == 0 {
                    continue;
                }
                // d_i a_ij = d_j a_ji
                let dj = di * Q::new(cartan[i][j], cartan[j][i]);
                match d[j] {
                    None => {
                        d[j] = Some(dj);
                        stack.push(j);
                    }
                    Some(existing) if existing != dj => {
                        return invalid("Cartan matrix is not symmetrizable");
                    }
                    _ => {}
                }
            }
        }
    }
    let d: Vec<Q> = d.into_iter().map(Option::unwrap).collect();
    let lcm = d.iter().fold(1i64, |acc, q| num_integer::lcm(acc, *q.denom()));
    Ok(d.iter().map(|q| (q * Q::from_integer(lcm)).to_integer()).collect())
}

fn invert(m: &[Vec<i64>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Q> = row.iter().map(|&x| Q::from_integer(x)).collect();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let p = a[col][col];
        for x in a[col].iter_mut() {
            *x /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for c in 0..2 * n {
                    let v = a[col][c];
                    a[r][c] -= f * v;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Positive roots in simple-root coordinates via root strings, level by level.
fn positive_roots(cartan: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let n = cartan.len();
    let unit = |i: usize| -> Vec<i64> { (0..n).map(|k| i64::from(k == i)).collect() };
    let mut all: BTreeSet<Vec<i64>> = (0..n).map(unit).collect();
    let mut level: Vec<Vec<i64>> = (0..n).map(unit).collect();
    while !level.is_empty() {
        let mut next = BTreeSet::new();
        for root in &level {
            for i in 0..n {
                if *root == unit(i) {
                    continue;
                }
                // ⟨β, α_i^∨⟩ = Σ_j n_j a_ij
                let pairing: i64 = (0..n).map(|j| root[j] * cartan[i][j]).sum();
                let mut p = 0;
                let mut down = root.clone();
                loop {
                    down[i] -= 1;
                    if down[i] >= 0 && all.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                if p - pairing > 0 {
                    let mut up = root.clone();
                    up[i] += 1;
                    if !all.contains(&up) {
                        next.insert(up);
                    }
                }
            }
        }
        all.extend(next.iter().cloned());
        if all.len() > MAX_POSITIVE_ROOTS {
            return Err(Error::Unsupported("Cartan matrix is not of finite type".into()));
        }
        level = next.into_iter().collect();
    }
    let mut roots: Vec<Vec<i64>> = all.into_iter().collect();
    roots.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
    Ok(roots)
}
