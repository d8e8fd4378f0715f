use branchcones::itrails::{d_vector, enumerate_itrails, minuscule_weight_diagram};
use branchcones::oracle::irrep_dimension;
use branchcones::{ReducedWord, RootSystem, Q};

#[test]
fn diagrams_have_oracle_sizes_and_unique_edges() {
    for r in 1..=5 {
        let rs = RootSystem::type_a(r).unwrap();
        for j in 1..=r {
            let d = minuscule_weight_diagram(&rs, j).unwrap();
            assert_eq!(d.weights().len() as u64, irrep_dimension(&rs, &rs.fundamental_weight(j)).unwrap());
            for i in 1..=r {
                let edges = d.edges(i);
                let mut sources: Vec<_> = edges.iter().map(|(a, _)| a.clone()).collect();
                let mut targets: Vec<_> = edges.iter().map(|(_, b)| b.clone()).collect();
                sources.dedup();
                targets.sort();
                targets.dedup();
                assert_eq!(sources.len(), edges.len());
                assert_eq!(targets.len(), edges.len());
                for (a, b) in edges {
                    assert!(d.contains(&a) && d.contains(&b));
                    assert_eq!(&a - &b, rs.simple_root(i));
                }
            }
        }
    }
}

#[test]
fn trails_use_existing_edges_only() {
    let rs = RootSystem::type_a(3).unwrap();
    let all = (1..=3).collect();
    for word in rs.reduced_words(&all).unwrap().iter().take(6) {
        for j in 1..=3 {
            let d = minuscule_weight_diagram(&rs, j).unwrap();
            let top = rs.fundamental_weight(j);
            let bottom = rs.apply_word(word, &top);
            for start in d.weights() {
                for trail in enumerate_itrails(&d, word, start, &bottom) {
                    assert_eq!(trail.start(), start);
                    assert_eq!(trail.end(), &bottom);
                    assert_eq!(trail.weights.len(), word.len() + 1);
                    for (k, &c) in trail.steps.iter().enumerate() {
                        let i = word.letters()[k];
                        assert!(c <= 1);
                        if c == 1 {
                            assert_eq!(d.lower(&trail.weights[k], i), Some(&trail.weights[k + 1]));
                        } else {
                            assert_eq!(trail.weights[k], trail.weights[k + 1]);
                        }
                    }
                    let dv = d_vector(&rs, &trail);
                    assert_eq!(dv.len(), word.len());
                    assert!(dv.iter().all(|x| (x * Q::from_integer(2)).is_integer()));
                }
            }
        }
    }
}

#[test]
fn top_to_bottom_trail_is_unique_for_w0() {
    // ω_j → w_0 ω_j: the lowest weight is reached along exactly one path
    let rs = RootSystem::type_a(3).unwrap();
    let word = ReducedWord(vec![1, 2, 1, 3, 2, 1]);
    for j in 1..=3 {
        let d = minuscule_weight_diagram(&rs, j).unwrap();
        let top = rs.fundamental_weight(j);
        let trails = enumerate_itrails(&d, &word, &top, &rs.apply_word(&word, &top));
        assert_eq!(trails.len(), 1, "j = {j}");
    }
}
