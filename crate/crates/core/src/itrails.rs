//! i-trails in the fundamental representations of type A.
//!
//! Every fundamental representation of `SL_{r+1}` is minuscule: weight spaces
//! are one-dimensional and `e_i^2` vanishes, so a raising-operator composition is
//! nonzero exactly when each unit step is an edge of the weight diagram.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::rootsys::{ReducedWord, RootSystem, Q};
use crate::weight::Weight;

/// Weights of `V(ω_j)` with the `α_i`-lowering edges between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightDiagram {
    rs: RootSystem,
    j: usize,
    weights: BTreeSet<Weight>,
    /// `(w, i) ↦ w − α_i`
    lower: BTreeMap<(Weight, usize), Weight>,
}

impl WeightDiagram {
    pub fn fundamental_index(&self) -> usize {
        self.j
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn weights(&self) -> &BTreeSet<Weight> {
        &self.weights
    }

    pub fn contains(&self, w: &Weight) -> bool {
        self.weights.contains(w)
    }

    /// The endpoint of the `i`-labelled edge leaving `w`, if any.
    pub fn lower(&self, w: &Weight, i: usize) -> Option<&Weight> {
        self.lower.get(&(w.clone(), i))
    }

    /// Edges `(w, w − α_i)` labelled `i`.
    pub fn edges(&self, i: usize) -> Vec<(Weight, Weight)> {
        self.lower
            .iter()
            .filter(|((_, label), _)| *label == i)
            .map(|((w, _), v)| (w.clone(), v.clone()))
            .collect()
    }

    pub fn n_edges(&self) -> usize {
        self.lower.len()
    }
}

/// Weight diagram of `Λ^j` of the defining representation of `SL_{r+1}`.
pub fn minuscule_weight_diagram(rs: &RootSystem, j: usize) -> Result<WeightDiagram> {
    if !rs.is_type_a() {
        return Err(Error::Unsupported("i-trails are only implemented for type A".into()));
    }
    if j == 0 || j > rs.rank() {
        return invalid(format!("fundamental index {j} out of range 1..={}", rs.rank()));
    }
    let top = rs.fundamental_weight(j);
    let mut weights = BTreeSet::from([top.clone()]);
    let mut lower = BTreeMap::new();
    let mut stack = vec![top];
    while let Some(w) = stack.pop() {
        for i in 1..=rs.rank() {
            // minuscule: pairings lie in {−1, 0, 1}; w − α_i is a weight iff the pairing is 1
            if w.0[i - 1] == 1 {
                let v = &w - &rs.simple_root(i);
                lower.insert((w.clone(), i), v.clone());
                if weights.insert(v.clone()) {
                    stack.push(v);
                }
            }
        }
    }
    Ok(WeightDiagram {
        rs: rs.clone(),
        j,
        weights,
        lower,
    })
}

/// A path `γ = γ_0, …, γ_L = η` with `γ_{k−1} − γ_k = c_k α_{i_k}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ITrail {
    pub word: ReducedWord,
    pub weights: Vec<Weight>,
    pub steps: Vec<u8>,
}

impl ITrail {
    pub fn start(&self) -> &Weight {
        &self.weights[0]
    }

    pub fn end(&self) -> &Weight {
        self.weights.last().expect("trail has at least one weight")
    }
}

/// All i-trails from `gamma` to `eta` in the diagram, by depth-first search over
/// the word positions. Sorted by weight sequence.
pub fn enumerate_itrails(diagram: &WeightDiagram, word: &ReducedWord, gamma: &Weight, eta: &Weight) -> Vec<ITrail> {
    if !diagram.contains(gamma) || !diagram.contains(eta) {
        return Vec::new();
    }
    let rs = &diagram.rs;
    // remaining[k][i] = occurrences of letter i among positions k.. of the word
    let letters = word.letters();
    let mut remaining = vec![vec![0i64; rs.rank()]; letters.len() + 1];
    for k in (0..letters.len()).rev() {
        remaining[k] = remaining[k + 1].clone();
        remaining[k][letters[k] - 1] += 1;
    }
    let mut out = Vec::new();
    let mut path = vec![gamma.clone()];
    let mut steps = Vec::with_capacity(letters.len());
    dfs(diagram, letters, &remaining, eta, &mut path, &mut steps, &mut out);
    out.sort();
    out.dedup_by(|a, b| a.0 == b.0);
    out.into_iter()
        .map(|(weights, steps)| ITrail {
            word: word.clone(),
            weights,
            steps,
        })
        .collect()
}

type RawTrail = (Vec<Weight>, Vec<u8>);

fn dfs(
    diagram: &WeightDiagram,
    letters: &[usize],
    remaining: &[Vec<i64>],
    eta: &Weight,
    path: &mut Vec<Weight>,
    steps: &mut Vec<u8>,
    out: &mut Vec<RawTrail>,
) {
    let k = steps.len();
    let cur = path.last().unwrap().clone();
    if k == letters.len() {
        if cur == *eta {
            out.push((path.clone(), steps.clone()));
        }
        return;
    }
    // prune: cur − η must be covered by the letters still available
    let gap = diagram.rs.root_coordinates(&(&cur - eta));
    let reachable = gap
        .iter()
        .zip(&remaining[k])
        .all(|(g, &avail)| g.is_integer() && g.to_integer() >= 0 && g.to_integer() <= avail);
    if !reachable {
        return;
    }
    path.push(cur.clone());
    steps.push(0);
    dfs(diagram, letters, remaining, eta, path, steps, out);
    steps.pop();
    path.pop();
    if let Some(next) = diagram.lower(&cur, letters[k]) {
        path.push(next.clone());
        steps.push(1);
        dfs(diagram, letters, remaining, eta, path, steps, out);
        steps.pop();
        path.pop();
    }
}

/// `d_k = ½⟨γ_{k−1} + γ_k, α_{i_k}^∨⟩`.
pub fn d_vector(rs: &RootSystem, trail: &ITrail) -> Vec<Q> {
    trail
        .word
        .letters()
        .iter()
        .enumerate()
        .map(|(k, &i)| {
            let pair = |w: &Weight| rs.coroot_pairing(i, w).expect("trail letter in range");
            Q::new(pair(&trail.weights[k]) + pair(&trail.weights[k + 1]), 2)
        })
        .collect()
}
