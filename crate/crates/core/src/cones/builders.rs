//! Constructors for the string, tensor, Levi and tree fiber-product cones.

use std::collections::{BTreeMap, BTreeSet};

use super::tree::Tree;
use super::{BetaShift, BlockKind, ConeBuilder, ConeH, ConeVariant, LambdaBound, MuSign};
use crate::error::{invalid, Error, Result};
use crate::itrails::{d_vector, enumerate_itrails, minuscule_weight_diagram};
use crate::rootsys::{ReducedWord, RootSystem, Q};
use crate::weight::Weight;

fn qi(v: i64) -> Q {
    Q::from_integer(v)
}

fn require_longest(rs: &RootSystem, word: &ReducedWord) -> Result<()> {
    if !rs.is_type_a() {
        return Err(Error::Unsupported("cone builders need type-A i-trails".into()));
    }
    if !rs.is_longest_word(word) {
        return invalid(format!("{word} is not a reduced word for the longest element"));
    }
    Ok(())
}

/// d-vectors of every trail `start(j) → end(j)` in `V(ω_j)`, for all `j`, paired with `j`.
fn trail_d_vectors(
    rs: &RootSystem,
    word: &ReducedWord,
    start: impl Fn(usize) -> Weight,
    end: impl Fn(usize) -> Weight,
) -> Result<Vec<(usize, Vec<Q>)>> {
    let mut out = Vec::new();
    for j in 1..=rs.rank() {
        let diagram = minuscule_weight_diagram(rs, j)?;
        for trail in enumerate_itrails(&diagram, word, &start(j), &end(j)) {
            out.push((j, d_vector(rs, &trail)));
        }
    }
    Ok(out)
}

/// Column offsets of the blocks one copy of the tensor cone acts on.
#[derive(Clone, Copy)]
struct Slots {
    lambda: usize,
    t: usize,
    beta: Option<usize>,
    mu: Option<usize>,
}

/// `t ≥ 0` and the per-letter bounds tying the string to `λ`.
fn add_lambda_bounds(b: &mut ConeBuilder, rs: &RootSystem, word: &ReducedWord, s: Slots, variant: &ConeVariant) {
    let letters = word.letters();
    b.nonnegative(s.t, letters.len());
    for (k, &ik) in letters.iter().enumerate() {
        let mut row = b.zero_row();
        match variant.lambda_bound {
            LambdaBound::Upper => {
                row[s.lambda + ik - 1] += qi(1);
                row[s.t + k] -= qi(1);
                for (l, &il) in letters.iter().enumerate().skip(k + 1) {
                    row[s.t + l] -= qi(rs.cartan_entry(il, ik));
                }
            }
            LambdaBound::Lower => {
                row[s.lambda + ik - 1] -= qi(1);
                row[s.t + k] += qi(1);
                for (l, &il) in letters.iter().enumerate().skip(k + 1) {
                    row[s.t + l] += qi(rs.cartan_entry(ik, il));
                }
            }
        }
        b.inequality(row);
    }
}

/// `Σ_k d_k t_{offset+k} (+ shift) ≥ 0` for each trail.
fn add_trail_rows(b: &mut ConeBuilder, t: usize, rows: &[(usize, Vec<Q>)], shift: Option<(usize, BetaShift)>) {
    for (j, d) in rows {
        let mut row = b.zero_row();
        for (k, dk) in d.iter().enumerate() {
            row[t + k] += dk;
        }
        if let Some((beta, sign)) = shift {
            row[beta + j - 1] += match sign {
                BetaShift::Plus => qi(1),
                BetaShift::Minus => qi(-1),
            };
        }
        b.inequality(row);
    }
}

/// `target − Σ_k t_k α_{i_k} − Σ extra = 0`, with `sign` flipping the string term.
fn add_weight_equality(
    b: &mut ConeBuilder,
    rs: &RootSystem,
    word: &ReducedWord,
    target: usize,
    t: usize,
    terms: &[(usize, i64)],
    string_sign: i64,
) {
    for c in 0..rs.rank() {
        let mut row = b.zero_row();
        row[target + c] += qi(1);
        for &(off, coef) in terms {
            row[off + c] -= qi(coef);
        }
        for (k, &ik) in word.letters().iter().enumerate() {
            // α_{i_k} in fundamental-weight coordinates is the Cartan column
            row[t + k] += qi(string_sign * rs.cartan_entry(c + 1, ik));
        }
        b.equality(row);
    }
}

fn add_tensor_constraints(
    b: &mut ConeBuilder,
    rs: &RootSystem,
    word: &ReducedWord,
    s: Slots,
    variant: &ConeVariant,
    family1: &[(usize, Vec<Q>)],
    family3: &[(usize, Vec<Q>)],
) {
    let (beta, mu) = (s.beta.expect("tensor slots"), s.mu.expect("tensor slots"));
    add_trail_rows(b, s.t, family1, None);
    add_trail_rows(b, s.t, family3, Some((beta, variant.beta_shift)));
    add_lambda_bounds(b, rs, word, s, variant);
    match variant.mu_sign {
        MuSign::LambdaPlusBetaMinusString => {
            add_weight_equality(b, rs, word, mu, s.t, &[(s.lambda, 1), (beta, 1)], 1);
        }
        MuSign::StringMinusLambdaPlusBeta => {
            add_weight_equality(b, rs, word, mu, s.t, &[(s.lambda, -1), (beta, 1)], -1);
        }
    }
}

fn tensor_trail_families(rs: &RootSystem, word: &ReducedWord) -> Result<[Vec<(usize, Vec<Q>)>; 2]> {
    let w0 = |w: Weight| rs.apply_word(word, &w);
    let sj = |j: usize| rs.reflect(j, &rs.fundamental_weight(j));
    let family1 = trail_d_vectors(rs, word, |j| rs.fundamental_weight(j), |j| w0(sj(j)))?;
    let family3 = trail_d_vectors(rs, word, sj, |j| w0(rs.fundamental_weight(j)))?;
    Ok([family1, family3])
}

/// The string cone: blocks `lambda` and `t`.
pub fn string_cone(rs: &RootSystem, word: &ReducedWord, variant: &ConeVariant) -> Result<ConeH> {
    require_longest(rs, word)?;
    let mut b = ConeBuilder::new(format!("string {word}"));
    let lambda = b.block("lambda", BlockKind::Weight, rs.rank(), false);
    let t = b.block("t", BlockKind::String, word.len(), false);
    b.nonnegative(lambda, rs.rank());
    let family1 = trail_d_vectors(
        rs,
        word,
        |j| rs.fundamental_weight(j),
        |j| rs.apply_word(word, &rs.reflect(j, &rs.fundamental_weight(j))),
    )?;
    add_trail_rows(&mut b, t, &family1, None);
    let slots = Slots {
        lambda,
        t,
        beta: None,
        mu: None,
    };
    add_lambda_bounds(&mut b, rs, word, slots, variant);
    Ok(b.build())
}

/// The tensor-product cone: blocks `lambda`, `t`, `beta` and the derived `mu`.
pub fn triple_cone(rs: &RootSystem, word: &ReducedWord, variant: &ConeVariant) -> Result<ConeH> {
    require_longest(rs, word)?;
    let r = rs.rank();
    let mut b = ConeBuilder::new(format!("tensor {word}"));
    let lambda = b.block("lambda", BlockKind::Weight, r, false);
    let t = b.block("t", BlockKind::String, word.len(), false);
    let beta = b.block("beta", BlockKind::Weight, r, false);
    let mu = b.block("mu", BlockKind::Weight, r, true);
    for off in [lambda, beta, mu] {
        b.nonnegative(off, r);
    }
    let [family1, family3] = tensor_trail_families(rs, word)?;
    let slots = Slots {
        lambda,
        t,
        beta: Some(beta),
        mu: Some(mu),
    };
    add_tensor_constraints(&mut b, rs, word, slots, variant, &family1, &family3);
    Ok(b.build())
}

/// The Levi branching cone for the simple roots `subset`: blocks `lambda`, `t`
/// and the derived `eta`. The string is `i1 ++ i2` with `i1` a word for the
/// longest element of the Levi Weyl group; its first `|i1|` coordinates vanish.
pub fn levi_cone(
    rs: &RootSystem,
    subset: &BTreeSet<usize>,
    i1: &ReducedWord,
    i2: &ReducedWord,
    variant: &ConeVariant,
) -> Result<ConeH> {
    if !rs.is_type_a() {
        return Err(Error::Unsupported("cone builders need type-A i-trails".into()));
    }
    if let Some(bad) = subset.iter().find(|&&i| i == 0 || i > rs.rank()) {
        return invalid(format!("simple index {bad} out of range 1..={}", rs.rank()));
    }
    let word = i1.concat(i2);
    let adapted = i1.letters().iter().all(|i| subset.contains(i))
        && i1.len() == rs.longest_length(subset)
        && rs.validate_reduced_word(i1)
        && rs.is_longest_word(&word);
    if !adapted {
        return invalid(format!("string not adapted to L: {i1} then {i2}"));
    }
    let r = rs.rank();
    let subset_label: Vec<String> = subset.iter().map(usize::to_string).collect();
    let mut b = ConeBuilder::new(format!("levi {{{}}} {i1} | {i2}", subset_label.join(",")));
    let lambda = b.block("lambda", BlockKind::Weight, r, false);
    let t = b.block("t", BlockKind::String, word.len(), false);
    let eta = b.block("eta", BlockKind::Weight, r, true);
    b.nonnegative(lambda, r);
    for k in 0..i1.len() {
        let mut row = b.zero_row();
        row[t + k] = qi(1);
        b.equality(row);
    }
    let family = trail_d_vectors(
        rs,
        i2,
        |j| rs.apply_word(i1, &rs.fundamental_weight(j)),
        |j| rs.apply_word(&word, &rs.reflect(j, &rs.fundamental_weight(j))),
    )?;
    add_trail_rows(&mut b, t + i1.len(), &family, None);
    for &i in subset {
        let mut row = b.zero_row();
        row[eta + i - 1] = qi(1);
        b.inequality(row);
    }
    let slots = Slots {
        lambda,
        t,
        beta: None,
        mu: None,
    };
    add_lambda_bounds(&mut b, rs, &word, slots, variant);
    add_weight_equality(&mut b, rs, &word, eta, t, &[(lambda, 1)], 1);
    Ok(b.build())
}

/// Block name of the weight on a tree edge.
pub fn edge_block_name(tree: &Tree, e: usize) -> String {
    format!("edge:{}", tree.edge_name(e))
}

/// Block name of the string at an internal vertex.
pub fn string_block_name(v: usize) -> String {
    format!("string:{v}")
}

/// Fiber product of tensor cones over a trivalent tree: one weight block per
/// edge and one string block per internal vertex. At each internal vertex the
/// in-edge carries `μ` and the out-edges carry `λ` then `β`, ordered by their
/// smallest leaf.
pub fn tree_fiber_cone(
    rs: &RootSystem,
    tree: &Tree,
    strings: &BTreeMap<usize, ReducedWord>,
    variant: &ConeVariant,
) -> Result<ConeH> {
    if !tree.is_trivalent() {
        return Err(Error::Unsupported("tree fiber cones need a trivalent tree".into()));
    }
    for &v in tree.internal_vertices() {
        let word = strings
            .get(&v)
            .ok_or_else(|| Error::InvalidArgument(format!("no string given for internal vertex {v}")))?;
        require_longest(rs, word)?;
    }
    if let Some(v) = strings.keys().find(|v| !tree.internal_vertices().contains(v)) {
        return invalid(format!("string given for {v}, which is not an internal vertex"));
    }
    let r = rs.rank();
    let mut b = ConeBuilder::new(format!("tree {tree}"));
    let edge_off: Vec<usize> = (0..tree.edges().len())
        .map(|e| b.block(edge_block_name(tree, e), BlockKind::Weight, r, false))
        .collect();
    let string_off: BTreeMap<usize, usize> = tree
        .internal_vertices()
        .iter()
        .map(|&v| (v, b.block(string_block_name(v), BlockKind::String, strings[&v].len(), false)))
        .collect();
    for &off in &edge_off {
        b.nonnegative(off, r);
    }
    let mut families: BTreeMap<&ReducedWord, [Vec<(usize, Vec<Q>)>; 2]> = BTreeMap::new();
    for &v in tree.internal_vertices() {
        let word = &strings[&v];
        if !families.contains_key(word) {
            families.insert(word, tensor_trail_families(rs, word)?);
        }
        let input = tree.in_edge(v).expect("internal vertex has an in-edge");
        let out = tree.out_edges(v);
        let slots = Slots {
            lambda: edge_off[out[0]],
            t: string_off[&v],
            beta: Some(edge_off[out[1]]),
            mu: Some(edge_off[input]),
        };
        let [f1, f3] = &families[word];
        add_tensor_constraints(&mut b, rs, word, slots, variant, f1, f3);
    }
    Ok(b.build())
}
