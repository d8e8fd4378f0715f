use std::collections::BTreeMap;

use proptest::prelude::*;

use branchcones::cones::{string_cone, triple_cone, ConeVariant};
use branchcones::lattice::{count_points, enumerate_points, slice, EnumOptions, Polytope, Row};
use branchcones::{Error, ReducedWord, RootSystem};

fn fixed(pairs: &[(&str, &[i64])]) -> BTreeMap<String, Vec<i64>> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.to_vec())).collect()
}

#[test]
fn string_slices() {
    let a1 = RootSystem::type_a(1).unwrap();
    let cone = string_cone(&a1, &ReducedWord(vec![1]), &ConeVariant::default()).unwrap();
    let p = slice(&cone, &fixed(&[("lambda", &[3])])).unwrap();
    assert_eq!(p.bounds(), vec![(0, 3)]);
    let pts = enumerate_points(&p, &EnumOptions::default()).unwrap();
    assert_eq!(pts, vec![vec![0], vec![1], vec![2], vec![3]]);
    let empty = slice(&cone, &fixed(&[("lambda", &[-2])])).unwrap();
    assert!(empty.is_empty());
    assert!(enumerate_points(&empty, &EnumOptions::default()).unwrap().is_empty());
    assert_eq!(count_points(&empty, &EnumOptions::default()).unwrap(), 0);
    let a2 = RootSystem::type_a(2).unwrap();
    let cone = string_cone(&a2, &ReducedWord(vec![1, 2, 1]), &ConeVariant::default()).unwrap();
    let p = slice(&cone, &fixed(&[("lambda", &[1, 1])])).unwrap();
    assert_eq!(enumerate_points(&p, &EnumOptions::default()).unwrap().len(), 8);
}

#[test]
fn triple_slices() {
    let a1 = RootSystem::type_a(1).unwrap();
    let cone = triple_cone(&a1, &ReducedWord(vec![1]), &ConeVariant::default()).unwrap();
    let count = |mu: i64| {
        let p = slice(&cone, &fixed(&[("lambda", &[1]), ("beta", &[1]), ("mu", &[mu])])).unwrap();
        count_points(&p, &EnumOptions::default()).unwrap()
    };
    assert_eq!(count(0), 1);
    assert_eq!(count(1), 0);
    let a2 = RootSystem::type_a(2).unwrap();
    let cone = triple_cone(&a2, &ReducedWord(vec![2, 1, 2]), &ConeVariant::default()).unwrap();
    let p = slice(&cone, &fixed(&[("lambda", &[2, 1]), ("beta", &[1, 2]), ("mu", &[1, 1])])).unwrap();
    assert!(!p.is_empty());
    assert!(p.bounds().iter().all(|(lo, hi)| lo <= hi));
}

#[test]
fn unfixed_string_cone_is_unbounded() {
    let a2 = RootSystem::type_a(2).unwrap();
    let cone = string_cone(&a2, &ReducedWord(vec![1, 2, 1]), &ConeVariant::default()).unwrap();
    assert!(matches!(slice(&cone, &BTreeMap::new()), Err(Error::Unbounded { .. })));
    assert!(slice(&cone, &fixed(&[("nope", &[1])])).is_err());
    assert!(slice(&cone, &fixed(&[("lambda", &[1])])).is_err());
}

#[test]
fn point_cap_is_enforced() {
    let a2 = RootSystem::type_a(2).unwrap();
    let cone = string_cone(&a2, &ReducedWord(vec![1, 2, 1]), &ConeVariant::default()).unwrap();
    let p = slice(&cone, &fixed(&[("lambda", &[3, 3])])).unwrap();
    let opts = EnumOptions { cap: 10, threads: 1 };
    assert!(matches!(p.count_points(&opts), Err(Error::ResourceLimit { cap: 10 })));
    assert_eq!(p.count_points(&EnumOptions::default()).unwrap(), 64);
}

#[test]
fn threads_do_not_change_results() {
    let a2 = RootSystem::type_a(2).unwrap();
    let cone = triple_cone(&a2, &ReducedWord(vec![1, 2, 1]), &ConeVariant::default()).unwrap();
    let p = slice(&cone, &fixed(&[("lambda", &[2, 2]), ("beta", &[2, 1])])).unwrap();
    let one = p.enumerate_points(&EnumOptions { cap: 1_000_000, threads: 1 }).unwrap();
    let four = p.enumerate_points(&EnumOptions { cap: 1_000_000, threads: 4 }).unwrap();
    assert_eq!(one, four);
    assert_eq!(p.count_points(&EnumOptions { cap: 1_000_000, threads: 4 }).unwrap(), one.len() as u64);
}

/// Random rows in three variables inside the box `[−B, B]^3`.
fn boxed_rows(rows: &[(i64, [i64; 3])], b: i64) -> Vec<Row> {
    let mut out: Vec<Row> = rows.iter().map(|(c, a)| Row::new(*c, a.to_vec())).collect();
    for k in 0..3 {
        let mut up = vec![0; 3];
        up[k] = 1;
        out.push(Row::new(b, up.clone()));
        out.push(Row::new(b, up.iter().map(|v| -v).collect()));
    }
    out
}

fn brute_force(rows: &[Row], eqs: &[Row], b: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for x in -b..=b {
        for y in -b..=b {
            for z in -b..=b {
                let p = [x, y, z];
                if rows.iter().all(|r| r.eval(&p) >= 0) && eqs.iter().all(|r| r.eval(&p) == 0) {
                    out.push(p.to_vec());
                }
            }
        }
    }
    out
}

proptest! {
    #[test]
    fn enumeration_matches_brute_force(
        rows in prop::collection::vec((-6i64..=6, [-3i64..=3, -3i64..=3, -3i64..=3]), 0..5),
        eq in prop::option::of((-4i64..=4, [-2i64..=2, -2i64..=2, -2i64..=2])),
        extra in (-6i64..=6, [-3i64..=3, -3i64..=3, -3i64..=3]),
    ) {
        let b = 4;
        let ineqs = boxed_rows(&rows, b);
        let eqs: Vec<Row> = eq.iter().map(|(c, a)| Row::new(*c, a.to_vec())).collect();
        let p = Polytope::new(3, ineqs.clone(), eqs.clone()).unwrap();
        let opts = EnumOptions::default();
        let pts = p.enumerate_points(&opts).unwrap();
        prop_assert_eq!(&pts, &brute_force(&ineqs, &eqs, b));
        prop_assert_eq!(p.count_points(&opts).unwrap(), pts.len() as u64);
        for x in &pts {
            prop_assert!(p.contains(x));
        }
        // an added inequality never increases the count
        let tighter = p.with_inequality(Row::new(extra.0, extra.1.to_vec())).unwrap();
        prop_assert!(tighter.count_points(&opts).unwrap() <= pts.len() as u64);
    }
}
