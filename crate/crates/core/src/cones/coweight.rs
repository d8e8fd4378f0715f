//! Coweight functionals on tuples of dominant weights, and the face and
//! degeneracy pullbacks between chains of different length.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::rootsys::{RootSystem, Q};
use crate::weight::Weight;

/// `(ρ_0, …, ρ_k)`. Each slot holds the coordinates dual to the fundamental
/// weights (simple-coroot coordinates), so `ρ_j(λ) = Σ_i ρ_j[i] λ[i]` for `λ`
/// in fundamental-weight coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoweightTuple {
    pub slots: Vec<Vec<Q>>,
}

impl CoweightTuple {
    pub fn new(slots: Vec<Vec<Q>>) -> Self {
        CoweightTuple { slots }
    }

    pub fn zero(ranks: &[usize]) -> Self {
        CoweightTuple {
            slots: ranks.iter().map(|&r| vec![Q::from_integer(0); r]).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.slots.iter().map(Vec::len).collect()
    }

    /// `ρ_j(α_i)` for every simple root of `rs`.
    fn simple_root_values(rs: &RootSystem, slot: &[Q]) -> Vec<Q> {
        (1..=rs.rank())
            .map(|i| {
                rs.simple_root(i)
                    .0
                    .iter()
                    .zip(slot)
                    .map(|(a, c)| c * Q::from_integer(*a))
                    .sum()
            })
            .collect()
    }

    /// Every slot is nonnegative on the dominant chamber, i.e. lies in its dual cone `Δ*`.
    pub fn in_dual_chamber(&self) -> bool {
        self.slots.iter().flatten().all(|c| *c >= Q::from_integer(0))
    }

    /// Every slot is nonnegative on every simple root, so dominance order is respected weakly.
    pub fn respects_dominance(&self, groups: &[&RootSystem]) -> bool {
        self.check_roots(groups, |v| v >= Q::from_integer(0))
    }

    /// Every slot is strictly positive on every simple root.
    pub fn strictly_respects_dominance(&self, groups: &[&RootSystem]) -> bool {
        self.check_roots(groups, |v| v > Q::from_integer(0))
    }

    fn check_roots(&self, groups: &[&RootSystem], ok: impl Fn(Q) -> bool) -> bool {
        groups.len() == self.slots.len()
            && self.slots.iter().zip(groups).all(|(slot, rs)| {
                slot.len() == rs.rank() && Self::simple_root_values(rs, slot).into_iter().all(&ok)
            })
    }
}

/// `Σ_j ⟨λ_j, ρ_j⟩`.
pub fn coweight_value(rho: &CoweightTuple, lambdas: &[Weight]) -> Result<Q> {
    if rho.len() != lambdas.len() {
        return invalid(format!("{} coweights for {} weights", rho.len(), lambdas.len()));
    }
    let mut acc = Q::from_integer(0);
    for (j, (slot, lambda)) in rho.slots.iter().zip(lambdas).enumerate() {
        if slot.len() != lambda.rank() {
            return invalid(format!("slot {j}: coweight rank {} vs weight rank {}", slot.len(), lambda.rank()));
        }
        for (c, &l) in slot.iter().zip(lambda.coords()) {
            acc += c * Q::from_integer(l);
        }
    }
    Ok(acc)
}

/// Inserts a zero coweight of the given rank at slot `position` (`1 ≤ position ≤ k`).
pub fn face_pullback_with_rank(rho: &CoweightTuple, position: usize, rank: usize) -> Result<CoweightTuple> {
    let k = rho.len().saturating_sub(1);
    if position == 0 || position > k {
        return invalid(format!("face position {position} out of range 1..={k}"));
    }
    let mut slots = rho.slots.clone();
    slots.insert(position, vec![Q::from_integer(0); rank]);
    Ok(CoweightTuple { slots })
}

/// Face pullback with the new slot taking the rank of slot `position − 1`.
pub fn face_pullback(rho: &CoweightTuple, position: usize) -> Result<CoweightTuple> {
    let rank = position
        .checked_sub(1)
        .and_then(|p| rho.slots.get(p))
        .map_or(0, Vec::len);
    face_pullback_with_rank(rho, position, rank)
}

/// Replaces `(ρ_i, ρ_{i+1})` by `ρ_i + ρ_{i+1}`.
pub fn degeneracy_pullback(rho: &CoweightTuple, position: usize) -> Result<CoweightTuple> {
    if position + 1 >= rho.len() {
        return invalid(format!("degeneracy position {position} needs slots {position} and {}", position + 1));
    }
    let (a, b) = (&rho.slots[position], &rho.slots[position + 1]);
    if a.len() != b.len() {
        return invalid(format!("slots {position} and {} have ranks {} and {}", position + 1, a.len(), b.len()));
    }
    let mut slots = rho.slots.clone();
    let merged = a.iter().zip(b).map(|(x, y)| x + y).collect();
    slots.splice(position..position + 2, [merged]);
    Ok(CoweightTuple { slots })
}

/// Forgets `λ_position`: the push-forward matching [`face_pullback`].
pub fn face_pushforward(lambdas: &[Weight], position: usize) -> Vec<Weight> {
    let mut out = lambdas.to_vec();
    out.remove(position);
    out
}

/// Repeats `λ_position`: the push-forward matching [`degeneracy_pullback`].
pub fn degeneracy_pushforward(lambdas: &[Weight], position: usize) -> Vec<Weight> {
    let mut out = lambdas.to_vec();
    out.insert(position, lambdas[position].clone());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qs(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| Q::from_integer(x)).collect()
    }

    #[test]
    fn values() {
        let rs = RootSystem::type_a(2).unwrap();
        let zero = CoweightTuple::zero(&[2]);
        assert_eq!(coweight_value(&zero, &[Weight(vec![3, 5])]).unwrap(), Q::from_integer(0));
        let rho_vee = CoweightTuple::new(vec![qs(&[1, 1])]);
        assert_eq!(coweight_value(&rho_vee, &[rs.simple_root(1)]).unwrap(), Q::from_integer(1));
        assert!(rho_vee.strictly_respects_dominance(&[&rs]));
        assert!(coweight_value(&rho_vee, &[Weight(vec![1])]).is_err());
        assert!(coweight_value(&rho_vee, &[]).is_err());
    }

    #[test]
    fn dual_chamber_versus_dominance() {
        let rs = RootSystem::type_a(2).unwrap();
        // the fundamental coweight ϖ_1 is in Δ* but negative on α_2
        let w1 = CoweightTuple::new(vec![qs(&[1, 0])]);
        assert!(w1.in_dual_chamber());
        assert!(!w1.respects_dominance(&[&rs]));
    }

    #[test]
    fn face_examples() {
        let rho = CoweightTuple::new(vec![qs(&[1, 2]), qs(&[3, 4])]);
        let up = face_pullback(&rho, 1).unwrap();
        assert_eq!(up.slots, vec![qs(&[1, 2]), qs(&[0, 0]), qs(&[3, 4])]);
        assert!(face_pullback(&rho, 0).is_err());
        assert!(face_pullback(&rho, 2).is_err());
        let z = face_pullback(&CoweightTuple::zero(&[1, 1, 1]), 2).unwrap();
        assert_eq!(z, CoweightTuple::zero(&[1, 1, 1, 1]));
    }

    #[test]
    fn degeneracy_examples() {
        let rho = CoweightTuple::new(vec![qs(&[1]), qs(&[0]), qs(&[5])]);
        let d = degeneracy_pullback(&rho, 0).unwrap();
        assert_eq!(d.slots, vec![qs(&[1]), qs(&[5])]);
        let doubled = degeneracy_pullback(&CoweightTuple::new(vec![qs(&[2, 1]), qs(&[2, 1])]), 0).unwrap();
        assert_eq!(doubled.slots, vec![qs(&[4, 2])]);
        let mixed = CoweightTuple::new(vec![qs(&[1]), qs(&[1, 1])]);
        assert!(degeneracy_pullback(&mixed, 0).is_err());
        assert!(degeneracy_pullback(&rho, 2).is_err());
    }
}
