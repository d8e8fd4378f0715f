use std::collections::BTreeSet;

use proptest::prelude::*;

use branchcones::oracle::{
    irrep_dimension, levi_branching, multi_tensor_invariant_dim, tensor_decomposition, tensor_multiplicity,
    weight_multiplicities, weyl_orbit,
};
use branchcones::weight::dominant_weights_up_to;
use branchcones::{Error, RootSystem, Weight};

fn a(rank: usize) -> RootSystem {
    RootSystem::type_a(rank).unwrap()
}

fn w(v: &[i64]) -> Weight {
    Weight(v.to_vec())
}

fn dominant(rank: usize, coords: &[i64]) -> Weight {
    Weight(coords[..rank].to_vec())
}

#[test]
fn spec_examples() {
    let a1 = a(1);
    let m = weight_multiplicities(&a1, &w(&[2])).unwrap();
    assert_eq!(m.entries(), &[(w(&[-2]), 1), (w(&[0]), 1), (w(&[2]), 1)]);
    let a2 = a(2);
    let adj = weight_multiplicities(&a2, &w(&[1, 1])).unwrap();
    assert_eq!(adj.multiplicity(&w(&[0, 0])), 2);
    assert_eq!(adj.len(), 7);
    assert_eq!(irrep_dimension(&a2, &w(&[1, 0])).unwrap(), 3);
    assert_eq!(irrep_dimension(&a2, &w(&[1, 1])).unwrap(), 8);
    assert_eq!(tensor_multiplicity(&a1, &w(&[1]), &w(&[1]), &w(&[2])).unwrap(), 1);
    assert_eq!(tensor_multiplicity(&a2, &w(&[1, 1]), &w(&[1, 1]), &w(&[1, 1])).unwrap(), 2);
    assert_eq!(multi_tensor_invariant_dim(&a1, &[w(&[2]), w(&[1]), w(&[1]), w(&[2])]).unwrap(), 2);
    assert_eq!(multi_tensor_invariant_dim(&a2, &[w(&[0, 0]), w(&[1, 0]), w(&[0, 1])]).unwrap(), 1);
    assert_eq!(multi_tensor_invariant_dim(&a2, &[w(&[1, 0]), w(&[1, 0])]).unwrap(), 1);
    assert_eq!(multi_tensor_invariant_dim(&a2, &[w(&[1, 0]), w(&[0, 1])]).unwrap(), 0);
}

#[test]
fn non_dominant_inputs_rejected() {
    let a2 = a(2);
    assert!(matches!(irrep_dimension(&a2, &w(&[-1, 0])), Err(Error::InvalidArgument(_))));
    assert!(weight_multiplicities(&a2, &w(&[1, -1])).is_err());
    assert!(tensor_multiplicity(&a2, &w(&[1, 0]), &w(&[0, -1]), &w(&[0, 0])).is_err());
    assert!(levi_branching(&a2, &BTreeSet::from([1]), &w(&[-1, 0])).is_err());
}

#[test]
fn character_totals_are_dimensions() {
    for r in 1..=3 {
        let rs = a(r);
        for lambda in dominant_weights_up_to(r, 5) {
            let chi = weight_multiplicities(&rs, &lambda).unwrap();
            assert_eq!(chi.total(), irrep_dimension(&rs, &lambda).unwrap(), "rank {r}, λ {lambda}");
        }
    }
}

#[test]
fn multiplicities_are_weyl_invariant() {
    let rs = a(3);
    for lambda in dominant_weights_up_to(3, 3) {
        let chi = weight_multiplicities(&rs, &lambda).unwrap();
        for (mu, m) in chi.entries() {
            for nu in weyl_orbit(&rs, mu) {
                assert_eq!(chi.multiplicity(&nu), *m);
            }
        }
    }
}

#[test]
fn tensor_dimensions_are_conserved() {
    for r in 1..=3 {
        let rs = a(r);
        for lambda in dominant_weights_up_to(r, 2) {
            for beta in dominant_weights_up_to(r, 2) {
                let total: u64 = tensor_decomposition(&rs, &lambda, &beta)
                    .unwrap()
                    .iter()
                    .map(|(mu, m)| m * irrep_dimension(&rs, mu).unwrap())
                    .sum();
                let product = irrep_dimension(&rs, &lambda).unwrap() * irrep_dimension(&rs, &beta).unwrap();
                assert_eq!(total, product, "rank {r}: {lambda} ⊗ {beta}");
            }
        }
    }
}

#[test]
fn levi_extremes_and_conservation() {
    let rs = a(3);
    for lambda in dominant_weights_up_to(3, 3) {
        let full = levi_branching(&rs, &(1..=3).collect(), &lambda).unwrap();
        assert_eq!(full, vec![(lambda.clone(), 1)]);
        let torus = levi_branching(&rs, &BTreeSet::new(), &lambda).unwrap();
        let chi = weight_multiplicities(&rs, &lambda).unwrap();
        assert_eq!(torus, chi.entries().to_vec());
        for subset in [BTreeSet::from([1]), BTreeSet::from([2]), BTreeSet::from([1, 2]), BTreeSet::from([1, 3])] {
            let idx: Vec<usize> = subset.iter().copied().collect();
            let sub = RootSystem::from_cartan(
                idx.iter().map(|&i| idx.iter().map(|&j| rs.cartan_entry(i, j)).collect()).collect(),
            )
            .unwrap();
            let total: u64 = levi_branching(&rs, &subset, &lambda)
                .unwrap()
                .iter()
                .map(|(eta, m)| m * irrep_dimension(&sub, &Weight(idx.iter().map(|&i| eta.0[i - 1]).collect())).unwrap())
                .sum();
            assert_eq!(total, irrep_dimension(&rs, &lambda).unwrap());
        }
    }
    let a2 = a(2);
    let parts = levi_branching(&a2, &BTreeSet::from([1]), &w(&[1, 0])).unwrap();
    assert_eq!(parts.len(), 2);
    assert!(parts.iter().all(|(_, m)| *m == 1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tensor_multiplicity_is_symmetric(
        rank in 1usize..=3,
        l in prop::collection::vec(0i64..=2, 3),
        b in prop::collection::vec(0i64..=2, 3),
        m in prop::collection::vec(0i64..=3, 3),
    ) {
        let rs = a(rank);
        let (l, b, m) = (dominant(rank, &l), dominant(rank, &b), dominant(rank, &m));
        prop_assert_eq!(
            tensor_multiplicity(&rs, &l, &b, &m).unwrap(),
            tensor_multiplicity(&rs, &b, &l, &m).unwrap()
        );
    }

    #[test]
    fn invariant_dimension_ignores_factor_order(
        rank in 1usize..=2,
        l0 in prop::collection::vec(0i64..=2, 2),
        ls in prop::collection::vec(prop::collection::vec(0i64..=1, 2), 3),
        shift in 0usize..3,
    ) {
        let rs = a(rank);
        let mut lambdas: Vec<Weight> = vec![dominant(rank, &l0)];
        lambdas.extend(ls.iter().map(|c| dominant(rank, c)));
        let base = multi_tensor_invariant_dim(&rs, &lambdas).unwrap();
        let mut rotated = lambdas.clone();
        rotated[1..].rotate_left(shift);
        prop_assert_eq!(multi_tensor_invariant_dim(&rs, &rotated).unwrap(), base);
        let mut reversed = lambdas.clone();
        reversed[1..].reverse();
        prop_assert_eq!(multi_tensor_invariant_dim(&rs, &reversed).unwrap(), base);
    }
}

#[test]
fn concurrent_use_matches_sequential() {
    let rs = a(3);
    let weights = dominant_weights_up_to(3, 3);
    let sequential: Vec<u64> = weights.iter().map(|l| weight_multiplicities(&rs, l).unwrap().total()).collect();
    let handles: Vec<_> = (0..4)
        .map(|_| {
            let rs = rs.clone();
            let weights = weights.clone();
            std::thread::spawn(move || {
                weights
                    .iter()
                    .map(|l| weight_multiplicities(&rs, l).unwrap().total())
                    .collect::<Vec<u64>>()
            })
        })
        .collect();
    for h in handles {
        assert_eq!(h.join().unwrap(), sequential);
    }
}
