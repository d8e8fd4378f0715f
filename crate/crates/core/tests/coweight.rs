use proptest::prelude::*;

use branchcones::cones::{
    coweight_value, degeneracy_pullback, degeneracy_pushforward, face_pullback, face_pushforward, CoweightTuple,
};
use branchcones::{RootSystem, Weight, Q};

fn slot() -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec((-30i64..=30, 1i64..=9).prop_map(|(n, d)| Q::new(n, d)), 2)
}

proptest! {
    #[test]
    fn face_identity(slots in prop::collection::vec(slot(), 3..=5), pos in 1usize..5, lams in prop::collection::vec(prop::collection::vec(-9i64..=9, 2), 6)) {
        let rho = CoweightTuple::new(slots);
        let pos = 1 + (pos - 1) % (rho.len() - 1);
        let pulled = face_pullback(&rho, pos).unwrap();
        let lambdas: Vec<Weight> = lams[..pulled.len()].iter().cloned().map(Weight).collect();
        prop_assert_eq!(
            coweight_value(&pulled, &lambdas).unwrap(),
            coweight_value(&rho, &face_pushforward(&lambdas, pos)).unwrap()
        );
    }

    #[test]
    fn degeneracy_identity(slots in prop::collection::vec(slot(), 3..=5), pos in 0usize..4, lams in prop::collection::vec(prop::collection::vec(-9i64..=9, 2), 5)) {
        let rho = CoweightTuple::new(slots);
        let pos = pos % (rho.len() - 1);
        let pulled = degeneracy_pullback(&rho, pos).unwrap();
        let lambdas: Vec<Weight> = lams[..pulled.len()].iter().cloned().map(Weight).collect();
        prop_assert_eq!(
            coweight_value(&pulled, &lambdas).unwrap(),
            coweight_value(&rho, &degeneracy_pushforward(&lambdas, pos)).unwrap()
        );
    }

    #[test]
    fn interior_coweights_order_dominance(c in prop::collection::vec(1i64..=20, 3), a in prop::collection::vec(0i64..=3, 3), n in prop::collection::vec(0i64..=2, 3)) {
        let rs = RootSystem::type_a(3).unwrap();
        // ρ with ρ(α_i) = c_i, solved through the inverse Cartan matrix
        let det = Q::from_integer(4);
        let inv = [[3, 2, 1], [2, 4, 2], [1, 2, 3]];
        let rho: Vec<Q> = (0..3).map(|i| (0..3).map(|j| Q::from_integer(inv[i][j] * c[j]) / det).sum()).collect();
        let tuple = CoweightTuple::new(vec![rho]);
        prop_assert!(tuple.strictly_respects_dominance(&[&rs]));
        let lo = Weight(a);
        let hi = &lo + &rs.root_combination(&n);
        let gap = coweight_value(&tuple, &[hi]).unwrap() - coweight_value(&tuple, &[lo]).unwrap();
        let expected: Q = n.iter().zip(&c).map(|(x, y)| Q::from_integer(x * y)).sum();
        prop_assert_eq!(gap, expected);
    }
}

#[test]
fn rho_vee_on_a_simple_root() {
    let rs = RootSystem::type_a(2).unwrap();
    let rho_vee = CoweightTuple::new(vec![vec![Q::from_integer(1), Q::from_integer(1)]]);
    assert_eq!(coweight_value(&rho_vee, &[rs.simple_root(1)]).unwrap(), Q::from_integer(1));
}
