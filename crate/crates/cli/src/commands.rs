use std::collections::BTreeMap;
use std::fs;

use anyhow::{bail, Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use branchcones::bz::{bz_template, enumerate_bz_with, enumerate_quilts, BzFilling};
use branchcones::cones::{
    coweight_value, degeneracy_pullback, degeneracy_pushforward, edge_block_name, face_pullback_with_rank,
    face_pushforward, levi_cone, string_cone, tree_fiber_cone, triple_cone, ConeH, CoweightTuple, Tree,
};
use branchcones::itrails::{d_vector, enumerate_itrails, minuscule_weight_diagram};
use branchcones::lattice::{slice, EnumOptions};
use branchcones::oracle::{irrep_dimension, levi_branching, multi_tensor_invariant_dim, tensor_multiplicity};
use branchcones::{ReducedWord, RootSystem, Weight, Q};

use crate::args::*;

/// A command's JSON result, plus a description of any disagreement with the oracle.
pub struct Outcome {
    pub value: Value,
    pub disagreement: Option<String>,
    /// Fail on disagreement even without `--verify`.
    pub always_enforced: bool,
}

impl Outcome {
    fn plain(value: Value) -> Self {
        Outcome::checked(value, None)
    }

    fn checked(value: Value, disagreement: Option<String>) -> Self {
        Outcome {
            value,
            disagreement,
            always_enforced: false,
        }
    }
}

pub struct Ctx {
    pub global: GlobalArgs,
    pub opts: EnumOptions,
}

impl Ctx {
    pub fn new(global: GlobalArgs) -> Result<Self> {
        let mut opts = EnumOptions::from_env()?;
        if let Some(t) = global.threads {
            if t == 0 {
                bail!(branchcones::Error::InvalidArgument("--threads must be at least 1".into()));
            }
            opts.threads = t;
        }
        Ok(Ctx { global, opts })
    }
}

fn root_system(rank: usize) -> Result<RootSystem> {
    Ok(RootSystem::type_a(rank)?)
}

fn fixed(pairs: &[(&str, &Weight)]) -> BTreeMap<String, Vec<i64>> {
    pairs.iter().map(|(k, w)| (k.to_string(), w.0.clone())).collect()
}

fn check_rank(rs: &RootSystem, what: &str, w: &Weight) -> Result<()> {
    if w.rank() != rs.rank() {
        bail!(branchcones::Error::InvalidArgument(format!(
            "{what} {w} has {} coordinates, rank is {}",
            w.rank(),
            rs.rank()
        )));
    }
    Ok(())
}

fn disagreement(agree: bool, what: impl FnOnce() -> String) -> Option<String> {
    (!agree).then(what)
}

pub fn dim(ctx: &Ctx, a: &DimArgs) -> Result<Outcome> {
    let rs = root_system(a.rank)?;
    check_rank(&rs, "lambda", &a.lambda)?;
    let word = a.word.resolve(&rs);
    let cone = string_cone(&rs, &word, &ctx.global.variant())?;
    let count = slice(&cone, &fixed(&[("lambda", &a.lambda)]))?.count_points(&ctx.opts)?;
    if !ctx.global.verify {
        return Ok(Outcome::plain(json!({ "count": count })));
    }
    let oracle = if a.lambda.is_dominant() { irrep_dimension(&rs, &a.lambda)? } else { 0 };
    Ok(Outcome::checked(
        json!({ "count": count, "oracle": oracle, "agree": count == oracle }),
        disagreement(count == oracle, || format!("string cone gives {count}, dimension is {oracle}")),
    ))
}

pub fn lr(ctx: &Ctx, a: &LrArgs) -> Result<Outcome> {
    let rs = root_system(a.rank)?;
    for (name, w) in [("lambda", &a.lambda), ("beta", &a.beta), ("mu", &a.mu)] {
        check_rank(&rs, name, w)?;
    }
    let word = a.word.resolve(&rs);
    let cone = triple_cone(&rs, &word, &ctx.global.variant())?;
    let count = slice(&cone, &fixed(&[("lambda", &a.lambda), ("beta", &a.beta), ("mu", &a.mu)]))?
        .count_points(&ctx.opts)?;
    let dominant = a.lambda.is_dominant() && a.beta.is_dominant() && a.mu.is_dominant();
    let oracle = if dominant { tensor_multiplicity(&rs, &a.lambda, &a.beta, &a.mu)? } else { 0 };
    Ok(Outcome::checked(
        json!({ "count": count, "oracle": oracle, "agree": count == oracle }),
        disagreement(count == oracle, || format!("tensor cone gives {count}, oracle {oracle}")),
    ))
}

pub fn branch(ctx: &Ctx, a: &BranchArgs) -> Result<Outcome> {
    let rs = root_system(a.rank)?;
    check_rank(&rs, "lambda", &a.lambda)?;
    let subset = &a.subset.0;
    let (i1, i2) = match (&a.i1, &a.i2) {
        (Some(i1), Some(i2)) => (i1.clone(), i2.clone()),
        _ => rs.levi_adapted_word(subset)?,
    };
    let cone = levi_cone(&rs, subset, &i1, &i2, &ctx.global.variant())?;
    let p = slice(&cone, &fixed(&[("lambda", &a.lambda)]))?;
    let mut counts: BTreeMap<Weight, u64> = BTreeMap::new();
    for x in p.enumerate_points(&ctx.opts)? {
        let full = p.lift(&x).context("slice lost its provenance")?;
        let eta = Weight(cone.block_values("eta", &full).context("levi cone has no eta block")?.to_vec());
        *counts.entry(eta).or_default() += 1;
    }
    let oracle: BTreeMap<Weight, u64> = if a.lambda.is_dominant() {
        levi_branching(&rs, subset, &a.lambda)?.into_iter().collect()
    } else {
        BTreeMap::new()
    };
    let agree = counts == oracle;
    let list = |m: &BTreeMap<Weight, u64>| -> Vec<Value> {
        m.iter().map(|(eta, n)| json!({ "eta": eta, "count": n })).collect()
    };
    Ok(Outcome::checked(
        json!({
            "i1": i1,
            "i2": i2,
            "components": list(&counts),
            "points": counts.values().sum::<u64>(),
            "oracle": list(&oracle),
            "agree": agree,
        }),
        disagreement(agree, || "Levi cone counts differ from the branching oracle".to_string()),
    ))
}

fn vertex_strings(rs: &RootSystem, tree: &Tree, given: &[VertexString]) -> Result<BTreeMap<usize, ReducedWord>> {
    let default = WordChoice::Default.resolve(rs);
    let mut strings: BTreeMap<usize, ReducedWord> =
        tree.internal_vertices().iter().map(|&v| (v, default.clone())).collect();
    for s in given {
        if !strings.contains_key(&s.vertex) {
            bail!(branchcones::Error::InvalidArgument(format!("{} is not an internal vertex", s.vertex)));
        }
        strings.insert(s.vertex, s.word.clone());
    }
    Ok(strings)
}

pub fn invariant(ctx: &Ctx, a: &InvariantArgs) -> Result<Outcome> {
    let rs = root_system(a.rank)?;
    let tree = Tree::parse(&a.tree)?;
    if a.leaves.len() != tree.n_leaves() {
        bail!(branchcones::Error::InvalidArgument(format!(
            "tree has {} leaves, got {} --leaf weights",
            tree.n_leaves(),
            a.leaves.len()
        )));
    }
    for w in &a.leaves {
        check_rank(&rs, "leaf", w)?;
    }
    let mut out = serde_json::Map::new();
    let mut counts = Vec::new();
    if a.method != Method::Quilt {
        let strings = vertex_strings(&rs, &tree, &a.strings)?;
        let cone = tree_fiber_cone(&rs, &tree, &strings, &ctx.global.variant())?;
        let leaf_values: BTreeMap<String, Vec<i64>> = (0..=tree.n())
            .map(|l| (edge_block_name(&tree, tree.leaf_edge(l)), a.leaves[l].0.clone()))
            .collect();
        let n = slice(&cone, &leaf_values)?.count_points(&ctx.opts)?;
        out.insert("cone".into(), json!(n));
        counts.push(n);
    }
    if a.method != Method::Cone {
        let q = enumerate_quilts(a.rank + 1, &tree, &a.leaves, false, &ctx.opts)?;
        out.insert("quilts".into(), json!(q.count));
        counts.push(q.count);
    }
    let oracle = if a.leaves.iter().all(Weight::is_dominant) {
        multi_tensor_invariant_dim(&rs, &a.leaves)?
    } else {
        0
    };
    let agree = counts.iter().all(|&c| c == oracle);
    out.insert("oracle".into(), json!(oracle));
    out.insert("agree".into(), json!(agree));
    Ok(Outcome::checked(
        Value::Object(out),
        disagreement(agree, || format!("counts {counts:?}, oracle {oracle}")),
    ))
}

pub fn bz(ctx: &Ctx, a: &BzArgs) -> Result<Outcome> {
    let t = bz_template(a.m)?;
    let fillings = enumerate_bz_with(&t, &a.l1, &a.l2, &a.l3, &ctx.opts)?;
    let count = fillings.len() as u64;
    let mut out = serde_json::Map::new();
    out.insert("template".into(), json!(t.descriptor()));
    out.insert("count".into(), json!(count));
    if a.list {
        let values: Vec<&Vec<i64>> = fillings.iter().map(|f: &BzFilling| &f.values).collect();
        out.insert("fillings".into(), json!(values));
    }
    let mut disagreement_msg = None;
    if ctx.global.verify {
        let rs = root_system(a.m - 1)?;
        let dominant = [&a.l1, &a.l2, &a.l3].iter().all(|w| w.is_dominant());
        let oracle = if dominant { tensor_multiplicity(&rs, &a.l1, &a.l3, &rs.dual_weight(&a.l2))? } else { 0 };
        out.insert("oracle".into(), json!(oracle));
        out.insert("agree".into(), json!(count == oracle));
        disagreement_msg = disagreement(count == oracle, || format!("{count} fillings, invariant dimension {oracle}"));
    }
    Ok(Outcome::checked(
        Value::Object(out),
        disagreement_msg,
    ))
}

pub fn cone_export(ctx: &Ctx, a: &ConeExportArgs) -> Result<Outcome> {
    let variant = ctx.global.variant();
    let cone: ConeH = match a.kind {
        ConeKind::Bz => bz_template(a.rank + 1)?.cone(),
        kind => {
            let rs = root_system(a.rank)?;
            match kind {
                ConeKind::String => string_cone(&rs, &a.word.resolve(&rs), &variant)?,
                ConeKind::C3 => triple_cone(&rs, &a.word.resolve(&rs), &variant)?,
                ConeKind::Levi => {
                    let (i1, i2) = rs.levi_adapted_word(&a.subset.0)?;
                    levi_cone(&rs, &a.subset.0, &i1, &i2, &variant)?
                }
                ConeKind::Tree => {
                    let edges = a.tree.as_deref().unwrap_or("0-4,1-4,4-5,2-5,3-5");
                    let tree = Tree::parse(edges)?;
                    let strings = vertex_strings(&rs, &tree, &a.strings)?;
                    tree_fiber_cone(&rs, &tree, &strings, &variant)?
                }
                ConeKind::Bz => unreachable!(),
            }
        }
    };
    let sidecar_path = a.out.with_extension("json");
    if sidecar_path == a.out {
        bail!(branchcones::Error::InvalidArgument("--out must not end in .json; the sidecar uses that name".into()));
    }
    fs::write(&a.out, cone.to_ine()).with_context(|| format!("writing {}", a.out.display()))?;
    let sidecar = serde_json::to_string_pretty(&cone.blocks_json())? + "\n";
    fs::write(&sidecar_path, sidecar).with_context(|| format!("writing {}", sidecar_path.display()))?;
    Ok(Outcome::plain(json!({
        "label": cone.label(),
        "ine": a.out.display().to_string(),
        "sidecar": sidecar_path.display().to_string(),
        "dimension": cone.dim(),
        "inequalities": cone.inequalities().len(),
        "equalities": cone.equalities().len(),
    })))
}

pub fn itrails(_ctx: &Ctx, a: &ItrailsArgs) -> Result<Outcome> {
    let rs = root_system(a.rank)?;
    let word = a.word.resolve(&rs);
    if !rs.is_longest_word(&word) {
        bail!(branchcones::Error::InvalidArgument(format!("{word} is not a reduced word for the longest element")));
    }
    let js: Vec<usize> = match a.j {
        Some(j) => vec![j],
        None => (1..=rs.rank()).collect(),
    };
    let mut trails = Vec::new();
    for j in js {
        let diagram = minuscule_weight_diagram(&rs, j)?;
        let omega = rs.fundamental_weight(j);
        let s_omega = rs.simple_reflection(j, &omega)?;
        let (from, to) = match (&a.from, &a.to) {
            (Some(f), Some(t)) => (f.clone(), t.clone()),
            _ => match a.family {
                TrailFamily::String => (omega.clone(), rs.apply_word(&word, &s_omega)),
                TrailFamily::Tensor => (s_omega, rs.apply_word(&word, &omega)),
            },
        };
        for t in enumerate_itrails(&diagram, &word, &from, &to) {
            let d: Vec<String> = d_vector(&rs, &t).iter().map(Q::to_string).collect();
            trails.push(json!({ "j": j, "weights": t.weights, "steps": t.steps, "d": d }));
        }
    }
    Ok(Outcome::plain(json!({ "word": word, "count": trails.len(), "trails": trails })))
}

fn random_tuple(rng: &mut ChaCha8Rng, ranks: &[usize]) -> CoweightTuple {
    CoweightTuple::new(
        ranks
            .iter()
            .map(|&r| (0..r).map(|_| Q::new(rng.gen_range(-50..=50), rng.gen_range(1..=12))).collect())
            .collect(),
    )
}

fn random_weights(rng: &mut ChaCha8Rng, ranks: &[usize]) -> Vec<Weight> {
    ranks
        .iter()
        .map(|&r| Weight((0..r).map(|_| rng.gen_range(-6..=6)).collect()))
        .collect()
}

pub fn maps_check(_ctx: &Ctx, a: &MapsCheckArgs) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let (mut face_fail, mut degen_fail) = (Vec::new(), Vec::new());
    let mut checked = 0u64;
    for &k in &a.k {
        if k == 0 {
            bail!(branchcones::Error::InvalidArgument("chain length k must be at least 1".into()));
        }
        for sample in 0..a.samples {
            let ranks: Vec<usize> = (0..=k).map(|_| rng.gen_range(1..=3)).collect();
            let rho = random_tuple(&mut rng, &ranks);
            let i = rng.gen_range(1..=k);
            let pulled = face_pullback_with_rank(&rho, i, rng.gen_range(1..=3))?;
            let lambdas = random_weights(&mut rng, &pulled.ranks());
            if coweight_value(&pulled, &lambdas)? != coweight_value(&rho, &face_pushforward(&lambdas, i))? {
                face_fail.push(json!({ "k": k, "sample": sample, "position": i }));
            }

            let i = rng.gen_range(0..k);
            let mut ranks: Vec<usize> = (0..=k).map(|_| rng.gen_range(1..=3)).collect();
            ranks[i + 1] = ranks[i];
            let rho = random_tuple(&mut rng, &ranks);
            let pulled = degeneracy_pullback(&rho, i)?;
            let lambdas = random_weights(&mut rng, &pulled.ranks());
            if coweight_value(&pulled, &lambdas)? != coweight_value(&rho, &degeneracy_pushforward(&lambdas, i))? {
                degen_fail.push(json!({ "k": k, "sample": sample, "position": i }));
            }
            checked += 1;
        }
    }
    let ok = face_fail.is_empty() && degen_fail.is_empty();
    Ok(Outcome {
        value: json!({
            "seed": a.seed,
            "k": a.k,
            "face": { "checked": checked, "failures": face_fail },
            "degeneracy": { "checked": checked, "failures": degen_fail },
            "ok": ok,
        }),
        disagreement: disagreement(ok, || "pullback identities failed".to_string()),
        always_enforced: true,
    })
}
