//! Character-theoretic ground truth.
//!
//! Weight multiplicities come from Freudenthal's recursion, dimensions from the
//! Weyl product, tensor multiplicities from Brauer–Klimyk and Levi branching from
//! repeated subtraction of Levi characters. Nothing here reads cone or lattice
//! code, so counts produced by those modules can be checked against it.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::rootsys::RootSystem;
use crate::weight::Weight;

/// Weights of an irreducible representation with their multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightMultiset {
    entries: Vec<(Weight, u64)>,
}

impl WeightMultiset {
    pub fn entries(&self) -> &[(Weight, u64)] {
        &self.entries
    }

    pub fn multiplicity(&self, w: &Weight) -> u64 {
        self.entries
            .binary_search_by(|(x, _)| x.cmp(w))
            .map(|i| self.entries[i].1)
            .unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

type MemoKey = (Vec<Vec<i64>>, Weight);
type DominantTable = Arc<BTreeMap<Weight, u64>>;

fn memo() -> &'static Mutex<HashMap<MemoKey, DominantTable>> {
    static MEMO: OnceLock<Mutex<HashMap<MemoKey, DominantTable>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

fn to_u64(x: &BigInt, what: &str) -> Result<u64> {
    x.to_u64()
        .ok_or_else(|| Error::Overflow(format!("{what} {x} does not fit in u64")))
}

/// Multiplicities of the dominant weights of `V(λ)`.
pub fn dominant_multiplicities(rs: &RootSystem, lambda: &Weight) -> Result<DominantTable> {
    rs.require_dominant(lambda)?;
    let key = (rs.cartan().to_vec(), lambda.clone());
    if let Some(hit) = memo().lock().unwrap().get(&key) {
        return Ok(Arc::clone(hit));
    }
    let table = Arc::new(freudenthal(rs, lambda)?);
    memo().lock().unwrap().entry(key).or_insert_with(|| Arc::clone(&table));
    Ok(table)
}

/// Dominant `μ ≤ λ`, ordered by height of `λ − μ` then lexicographically on the
/// simple-root coordinates of `λ − μ`.
fn dominant_weights_below(rs: &RootSystem, lambda: &Weight) -> Vec<(Vec<i64>, Weight)> {
    let bound: Vec<i64> = rs
        .root_coordinates(lambda)
        .iter()
        .map(|q| q.floor().to_integer())
        .collect();
    let rank = rs.rank();
    let mut out = Vec::new();
    let mut n = vec![0i64; rank];
    loop {
        let mu = lambda - &rs.root_combination(&n);
        if mu.is_dominant() {
            out.push((n.clone(), mu));
        }
        // odometer over the box 0 ≤ n_i ≤ bound_i
        let mut k = 0;
        loop {
            if k == rank {
                out.sort_by_key(|(n, _)| (n.iter().sum::<i64>(), n.clone()));
                return out;
            }
            if n[k] < bound[k] {
                n[k] += 1;
                break;
            }
            n[k] = 0;
            k += 1;
        }
    }
}

fn freudenthal(rs: &RootSystem, lambda: &Weight) -> Result<BTreeMap<Weight, u64>> {
    let rho = rs.rho();
    let lr = lambda + &rho;
    let norm_top = to_big(rs.inner_product(&lr, &lr));
    let mut mult: BTreeMap<Weight, BigInt> = BTreeMap::new();
    for (_, mu) in dominant_weights_below(rs, lambda) {
        if mu == *lambda {
            mult.insert(mu, BigInt::one());
            continue;
        }
        let mr = &mu + &rho;
        let denom = &norm_top - to_big(rs.inner_product(&mr, &mr));
        let mut acc = BigRational::zero();
        for root in rs.positive_roots() {
            let alpha = rs.root_combination(root);
            let mut shifted = &mu + &alpha;
            loop {
                let (dom, _) = rs.to_dominant(&shifted);
                let m = match mult.get(&dom) {
                    Some(m) if !m.is_zero() => m.clone(),
                    _ => break,
                };
                let ip = BigInt::from(rs.pair_with_root(&shifted, root));
                acc += BigRational::from_integer(m * ip);
                shifted = &shifted + &alpha;
            }
        }
        let value = acc * BigRational::from_integer(BigInt::from(2)) / denom;
        if !value.is_integer() || value.is_negative() {
            return Err(Error::Overflow(format!(
                "Freudenthal produced non-integral multiplicity {value} at {mu}"
            )));
        }
        let v = value.to_integer();
        if !v.is_zero() {
            mult.insert(mu, v);
        }
    }
    mult.into_iter()
        .map(|(w, m)| to_u64(&m, "multiplicity").map(|m| (w, m)))
        .collect()
}

fn to_big(q: crate::rootsys::Q) -> BigRational {
    BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
}

/// The Weyl orbit of a weight, via closure under simple reflections.
pub fn weyl_orbit(rs: &RootSystem, w: &Weight) -> BTreeSet<Weight> {
    let mut seen = BTreeSet::from([w.clone()]);
    let mut stack = vec![w.clone()];
    while let Some(x) = stack.pop() {
        for i in 1..=rs.rank() {
            let y = rs.reflect(i, &x);
            if seen.insert(y.clone()) {
                stack.push(y);
            }
        }
    }
    seen
}

/// All weights of `V(λ)` with multiplicities.
pub fn weight_multiplicities(rs: &RootSystem, lambda: &Weight) -> Result<WeightMultiset> {
    let dominant = dominant_multiplicities(rs, lambda)?;
    let mut entries = Vec::new();
    for (mu, &m) in dominant.iter() {
        entries.extend(weyl_orbit(rs, mu).into_iter().map(|w| (w, m)));
    }
    entries.sort();
    Ok(WeightMultiset { entries })
}

/// `∏_{α>0} ⟨λ+ρ, α^∨⟩ / ⟨ρ, α^∨⟩`.
pub fn irrep_dimension(rs: &RootSystem, lambda: &Weight) -> Result<u64> {
    rs.require_dominant(lambda)?;
    let rho = rs.rho();
    let lr = lambda + &rho;
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for c in rs.positive_coroots() {
        num *= BigInt::from(rs.pairing_with_coroot(&lr, c));
        den *= BigInt::from(rs.pairing_with_coroot(&rho, c));
    }
    let q = BigRational::new(num, den);
    if !q.is_integer() {
        return Err(Error::Overflow(format!("Weyl product {q} is not integral")));
    }
    to_u64(&q.to_integer(), "dimension")
}

/// Full decomposition of `V(λ) ⊗ V(β)` by Brauer–Klimyk: each weight `ν` of
/// `V(λ)` contributes `±mult(ν)` to the constituent `w(ν+β+ρ) − ρ` when
/// `ν+β+ρ` is regular.
pub fn tensor_decomposition(
    rs: &RootSystem,
    lambda: &Weight,
    beta: &Weight,
) -> Result<BTreeMap<Weight, u64>> {
    rs.require_dominant(lambda)?;
    rs.require_dominant(beta)?;
    let rho = rs.rho();
    let shift = beta + &rho;
    let mut signed: BTreeMap<Weight, i128> = BTreeMap::new();
    for (nu, m) in weight_multiplicities(rs, lambda)?.entries() {
        let (dom, steps) = rs.to_dominant(&(nu + &shift));
        if dom.0.iter().any(|&c| c == 0) {
            continue;
        }
        let sign: i128 = if steps % 2 == 0 { 1 } else { -1 };
        *signed.entry(&dom - &rho).or_insert(0) += sign * i128::from(*m);
    }
    let mut out = BTreeMap::new();
    for (mu, c) in signed {
        if c < 0 {
            return Err(Error::Overflow(format!(
                "Brauer–Klimyk produced negative multiplicity {c} at {mu}"
            )));
        }
        if c > 0 {
            let c = u64::try_from(c).map_err(|_| Error::Overflow("tensor multiplicity".into()))?;
            out.insert(mu, c);
        }
    }
    Ok(out)
}

/// `dim Hom_G(V(μ), V(λ) ⊗ V(β))`.
pub fn tensor_multiplicity(rs: &RootSystem, lambda: &Weight, beta: &Weight, mu: &Weight) -> Result<u64> {
    rs.require_dominant(mu)?;
    Ok(tensor_decomposition(rs, lambda, beta)?.get(mu).copied().unwrap_or(0))
}

/// `dim Hom_G(V(λ_0), V(λ_1) ⊗ ⋯ ⊗ V(λ_n))`, folding the tensor product left to right.
pub fn multi_tensor_invariant_dim(rs: &RootSystem, lambdas: &[Weight]) -> Result<u64> {
    if lambdas.len() < 2 {
        return invalid("need λ_0 and at least one factor");
    }
    for l in lambdas {
        rs.require_dominant(l)?;
    }
    let mut current: BTreeMap<Weight, u64> = BTreeMap::from([(lambdas[1].clone(), 1)]);
    for factor in &lambdas[2..] {
        let mut next: BTreeMap<Weight, u64> = BTreeMap::new();
        for (nu, m) in &current {
            for (mu, c) in tensor_decomposition(rs, nu, factor)? {
                let e = next.entry(mu).or_insert(0);
                *e = e
                    .checked_add(m.checked_mul(c).ok_or_else(|| Error::Overflow("multi-tensor".into()))?)
                    .ok_or_else(|| Error::Overflow("multi-tensor".into()))?;
            }
        }
        current = next;
    }
    Ok(current.get(&lambdas[0]).copied().unwrap_or(0))
}

/// Sub-root-system on the simple roots `I` (sorted), with its Cartan submatrix.
fn levi_root_system(rs: &RootSystem, subset: &[usize]) -> Result<RootSystem> {
    let cartan = subset
        .iter()
        .map(|&i| subset.iter().map(|&j| rs.cartan_entry(i, j)).collect())
        .collect();
    RootSystem::from_cartan(cartan)
}

/// Decomposition of `V(λ)` restricted to the Levi subgroup with simple roots `I`,
/// as `(η, multiplicity)` pairs sorted by `η`. Each `η` is a full torus weight,
/// dominant for `I`.
pub fn levi_branching(rs: &RootSystem, subset: &BTreeSet<usize>, lambda: &Weight) -> Result<Vec<(Weight, u64)>> {
    rs.require_dominant(lambda)?;
    if let Some(&bad) = subset.iter().find(|&&i| i == 0 || i > rs.rank()) {
        return invalid(format!("simple index {bad} out of range"));
    }
    let mut remaining: BTreeMap<Weight, i128> = weight_multiplicities(rs, lambda)?
        .entries()
        .iter()
        .map(|(w, m)| (w.clone(), i128::from(*m)))
        .collect();
    let idx: Vec<usize> = subset.iter().copied().collect();
    let sub = if idx.is_empty() { None } else { Some(levi_root_system(rs, &idx)?) };
    let mut out = Vec::new();
    while !remaining.is_empty() {
        // a weight with no remaining weight above it in I-dominance is a Levi highest weight
        let eta = remaining
            .keys()
            .rev()
            .find(|w| {
                !remaining
                    .keys()
                    .any(|v| v != *w && levi_dominates(rs, &idx, w, v))
            })
            .cloned()
            .expect("finite poset has a maximal element");
        let m = remaining[&eta];
        if m <= 0 || !idx.iter().all(|&i| eta.0[i - 1] >= 0) {
            return Err(Error::Overflow(format!("Levi subtraction broke at {eta}")));
        }
        for (w, c) in levi_character(rs, sub.as_ref(), &idx, &eta)? {
            let e = remaining.get_mut(&w).ok_or_else(|| {
                Error::Overflow(format!("Levi character weight {w} missing from V(λ)"))
            })?;
            *e -= m * i128::from(c);
            if *e < 0 {
                return Err(Error::Overflow(format!("negative remainder at {w}")));
            }
            if *e == 0 {
                remaining.remove(&w);
            }
        }
        out.push((eta, u64::try_from(m).expect("positive")));
    }
    out.sort();
    Ok(out)
}

/// `v − w` is a nonzero nonnegative integer combination of `{α_i : i ∈ I}`.
fn levi_dominates(rs: &RootSystem, idx: &[usize], w: &Weight, v: &Weight) -> bool {
    let coords = rs.root_coordinates(&(v - w));
    coords.iter().enumerate().all(|(k, c)| {
        if idx.contains(&(k + 1)) {
            c.is_integer() && !c.is_negative()
        } else {
            c.is_zero()
        }
    }) && coords.iter().any(|c| !c.is_zero())
}

/// Character of the Levi irreducible with highest weight `η`, as full torus weights.
fn levi_character(
    rs: &RootSystem,
    sub: Option<&RootSystem>,
    idx: &[usize],
    eta: &Weight,
) -> Result<Vec<(Weight, u64)>> {
    let Some(sub) = sub else {
        return Ok(vec![(eta.clone(), 1)]);
    };
    let top = Weight(idx.iter().map(|&i| eta.0[i - 1]).collect());
    let mut out = Vec::new();
    for (w, m) in weight_multiplicities(sub, &top)?.entries() {
        let n = sub.root_coordinates(&(&top - w));
        let mut full = vec![0i64; rs.rank()];
        for (k, &i) in idx.iter().enumerate() {
            if !n[k].is_integer() {
                return Err(Error::Overflow("non-integral Levi root coordinates".into()));
            }
            full[i - 1] = n[k].to_integer();
        }
        out.push((eta - &rs.root_combination(&full), *m));
    }
    Ok(out)
}
