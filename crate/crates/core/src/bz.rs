//! Berenstein–Zelevinsky triangles for `SL_m` and quilts of them over trees.
//!
//! The big triangle with `m − 1` small triangles to a side holds `m(m−1)/2`
//! upward small triangles, indexed by `(row, position)` with rows `1..m−1` from
//! the top and positions `1..row` from the left. Each contributes its three
//! corners in the order (top, left, right), so the vertex of corner `c` on
//! triangle `(r, p)` has index `3·((r−1)r/2 + p − 1) + c`.
//!
//! Between the upward triangles `A = (r, p)`, `B = (r+1, p)` and
//! `C = (r+1, p+1)` sits a hexagon whose boundary runs
//! `A.left, A.right, C.top, C.left, B.right, B.top`. Boundary weights are read
//! counter-clockwise: side 1 down the left edge, side 2 along the bottom from
//! left to right, side 3 up the right edge.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cones::{Block, BlockKind, ConeBuilder, ConeH, Tree};
use crate::error::{invalid, Error, Result};
use crate::lattice::{slice, EnumOptions};
use crate::rootsys::Q;
use crate::weight::{dominant_weights_up_to, Weight};

/// Version tag of the vertex indexing written into serialized fillings.
pub const INDEX_SCHEME: &str = "upward-rows-top-left-right/1";

pub const TOP: usize = 0;
pub const LEFT: usize = 1;
pub const RIGHT: usize = 2;

/// Six vertex indices around a hexagon, in cyclic order; entries `k` and
/// `k+1` form one side, and the side opposite `(k, k+1)` is `(k+3, k+4)`.
pub type Hexagon = [usize; 6];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BzTemplate {
    m: usize,
    triangles: Vec<(usize, usize)>,
    hexagons: Vec<Hexagon>,
    /// Per side, the two vertices of each bordering small triangle in reading order.
    boundary: [Vec<(usize, usize)>; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TemplateDescriptor {
    pub m: usize,
    pub index_scheme: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BzFilling {
    pub values: Vec<i64>,
}

fn triangle_index(r: usize, p: usize) -> usize {
    (r - 1) * r / 2 + p - 1
}

/// Vertex index of `corner` on the upward triangle `(r, p)`.
pub fn vertex_index(r: usize, p: usize, corner: usize) -> usize {
    3 * triangle_index(r, p) + corner
}

pub fn bz_template(m: usize) -> Result<BzTemplate> {
    if m < 2 {
        return invalid(format!("BZ triangles need m ≥ 2, got {m}"));
    }
    let triangles: Vec<(usize, usize)> = (1..m).flat_map(|r| (1..=r).map(move |p| (r, p))).collect();
    let mut hexagons = Vec::new();
    for r in 1..m.saturating_sub(1) {
        for p in 1..=r {
            let v = vertex_index;
            hexagons.push([
                v(r, p, LEFT),
                v(r, p, RIGHT),
                v(r + 1, p + 1, TOP),
                v(r + 1, p + 1, LEFT),
                v(r + 1, p, RIGHT),
                v(r + 1, p, TOP),
            ]);
        }
    }
    let side1 = (1..m).map(|j| (vertex_index(j, 1, TOP), vertex_index(j, 1, LEFT))).collect();
    let side2 = (1..m)
        .map(|j| (vertex_index(m - 1, j, LEFT), vertex_index(m - 1, j, RIGHT)))
        .collect();
    let side3 = (1..m)
        .map(|j| (vertex_index(m - j, m - j, RIGHT), vertex_index(m - j, m - j, TOP)))
        .collect();
    Ok(BzTemplate {
        m,
        triangles,
        hexagons,
        boundary: [side1, side2, side3],
    })
}

impl BzTemplate {
    pub fn m(&self) -> usize {
        self.m
    }

    /// Rank of `SL_m`.
    pub fn rank(&self) -> usize {
        self.m - 1
    }

    pub fn n_vertices(&self) -> usize {
        3 * self.triangles.len()
    }

    pub fn triangles(&self) -> &[(usize, usize)] {
        &self.triangles
    }

    pub fn hexagons(&self) -> &[Hexagon] {
        &self.hexagons
    }

    pub fn boundary(&self) -> &[Vec<(usize, usize)>; 3] {
        &self.boundary
    }

    pub fn descriptor(&self) -> TemplateDescriptor {
        TemplateDescriptor {
            m: self.m,
            index_scheme: INDEX_SCHEME,
        }
    }

    /// The hexagon rows `h[k] + h[k+1] − h[k+3] − h[k+4] = 0` that `values` violates.
    fn hexagon_violations(&self, values: &[i64]) -> Vec<usize> {
        self.hexagons
            .iter()
            .enumerate()
            .filter(|(_, h)| {
                (0..3).any(|k| values[h[k]] + values[h[k + 1]] != values[h[k + 3]] + values[h[(k + 4) % 6]])
            })
            .map(|(i, _)| i)
            .collect()
    }

    fn side_weight(&self, side: usize, values: &[i64]) -> Weight {
        Weight(self.boundary[side].iter().map(|&(a, b)| values[a] + values[b]).collect())
    }

    /// Cone of all nonnegative fillings: a `vertices` block plus derived
    /// boundary-weight blocks `lambda1`, `lambda2`, `lambda3`.
    pub fn cone(&self) -> ConeH {
        let n = self.n_vertices();
        let r = self.rank();
        let mut b = ConeBuilder::new(format!("bz m={}", self.m));
        let verts = b.block("vertices", BlockKind::Filling, n, false);
        let sides: Vec<usize> = (1..=3)
            .map(|s| b.block(format!("lambda{s}"), BlockKind::Weight, r, true))
            .collect();
        b.nonnegative(verts, n);
        for h in &self.hexagons {
            for k in 0..3 {
                let mut row = b.zero_row();
                row[verts + h[k]] += Q::from_integer(1);
                row[verts + h[k + 1]] += Q::from_integer(1);
                row[verts + h[k + 3]] -= Q::from_integer(1);
                row[verts + h[(k + 4) % 6]] -= Q::from_integer(1);
                b.equality(row);
            }
        }
        for (s, &off) in sides.iter().enumerate() {
            for (j, &(x, y)) in self.boundary[s].iter().enumerate() {
                let mut row = b.zero_row();
                row[off + j] = Q::from_integer(1);
                row[verts + x] -= Q::from_integer(1);
                row[verts + y] -= Q::from_integer(1);
                b.equality(row);
            }
        }
        b.build()
    }
}

impl BzFilling {
    pub fn new(values: Vec<i64>) -> Self {
        BzFilling { values }
    }

    /// Coordinatewise sum.
    pub fn add(&self, other: &BzFilling) -> BzFilling {
        BzFilling {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn to_json(&self, t: &BzTemplate) -> serde_json::Value {
        serde_json::json!({ "template": t.descriptor(), "values": self.values })
    }
}

/// The three boundary weights `(λ_1, λ_2, λ_3)` of a filling.
pub fn boundary_weights(t: &BzTemplate, f: &BzFilling) -> Result<(Weight, Weight, Weight)> {
    if f.values.len() != t.n_vertices() {
        return Err(Error::InvalidFilling(format!(
            "expected {} vertex values, got {}",
            t.n_vertices(),
            f.values.len()
        )));
    }
    if let Some(v) = f.values.iter().find(|&&v| v < 0) {
        return Err(Error::InvalidFilling(format!("negative vertex value {v}")));
    }
    let bad = t.hexagon_violations(&f.values);
    if !bad.is_empty() {
        return Err(Error::InvalidFilling(format!("hexagon conditions fail at {bad:?}")));
    }
    Ok((t.side_weight(0, &f.values), t.side_weight(1, &f.values), t.side_weight(2, &f.values)))
}

/// All fillings with boundary `(l1, l2, l3)`, in lexicographic order of vertex values.
pub fn enumerate_bz(t: &BzTemplate, l1: &Weight, l2: &Weight, l3: &Weight) -> Result<Vec<BzFilling>> {
    enumerate_bz_with(t, l1, l2, l3, &EnumOptions::from_env()?)
}

pub fn enumerate_bz_with(
    t: &BzTemplate,
    l1: &Weight,
    l2: &Weight,
    l3: &Weight,
    opts: &EnumOptions,
) -> Result<Vec<BzFilling>> {
    let cone = t.cone();
    let p = slice(&cone, &boundary_assignment(t, [l1, l2, l3])?)?;
    let verts: &Block = cone.block("vertices").expect("template cone has a vertices block");
    p.enumerate_points(opts)?
        .into_iter()
        .map(|x| {
            let full = p.lift(&x).expect("slice keeps provenance");
            Ok(BzFilling::new(full[verts.offset..verts.offset + verts.len].to_vec()))
        })
        .collect()
}

pub fn count_bz(t: &BzTemplate, l1: &Weight, l2: &Weight, l3: &Weight, opts: &EnumOptions) -> Result<u64> {
    slice(&t.cone(), &boundary_assignment(t, [l1, l2, l3])?)?.count_points(opts)
}

fn boundary_assignment(t: &BzTemplate, weights: [&Weight; 3]) -> Result<BTreeMap<String, Vec<i64>>> {
    let mut fixed = BTreeMap::new();
    for (s, w) in weights.iter().enumerate() {
        if w.rank() != t.rank() {
            return invalid(format!("weight {w} has rank {}, SL_{} needs {}", w.rank(), t.m, t.rank()));
        }
        fixed.insert(format!("lambda{}", s + 1), w.0.clone());
    }
    Ok(fixed)
}

/// Type-A duality: reverse the fundamental-weight coordinates.
fn dual(w: &Weight) -> Weight {
    Weight(w.0.iter().rev().copied().collect())
}

/// One BZ triangle per internal vertex of a trivalent tree, glued along edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Quilt {
    /// Weight on every tree edge, in the tree's edge order.
    pub edge_weights: Vec<Weight>,
    /// Filling at every internal vertex, in the tree's internal-vertex order.
    pub fillings: Vec<BzFilling>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuiltCount {
    pub count: u64,
    pub quilts: Option<Vec<Quilt>>,
}

impl QuiltCount {
    pub fn to_json(&self, t: &BzTemplate, tree: &Tree) -> serde_json::Value {
        let edges: Vec<[usize; 2]> = tree.edges().iter().map(|&(a, b)| [a, b]).collect();
        serde_json::json!({
            "template": t.descriptor(),
            "tree": { "edges": edges, "leaves": (0..=tree.n()).collect::<Vec<_>>() },
            "count": self.count,
            "quilts": self.quilts,
        })
    }
}

/// Triangle boundary at an internal vertex: `(λ, μ*, β)` for in-edge `μ` and out-edges `λ`, `β`.
fn vertex_boundary(tree: &Tree, v: usize, edge_weights: &[Weight]) -> [Weight; 3] {
    let input = tree.in_edge(v).expect("internal vertex has an in-edge");
    let out = tree.out_edges(v);
    [
        edge_weights[out[0]].clone(),
        dual(&edge_weights[input]),
        edge_weights[out[1]].clone(),
    ]
}

/// Quilts with the given leaf weights; `leaves[k]` sits on leaf `k`, and leaf 0
/// is the source so the count is `dim Hom(V(λ_0), V(λ_1) ⊗ … ⊗ V(λ_n))`.
/// Internal edge weights range over dominant weights whose level is at most
/// the total leaf level on either side of the edge.
pub fn enumerate_quilts(m: usize, tree: &Tree, leaves: &[Weight], list: bool, opts: &EnumOptions) -> Result<QuiltCount> {
    let t = bz_template(m)?;
    if !tree.is_trivalent() {
        return Err(Error::Unsupported("quilts need a trivalent tree".into()));
    }
    if leaves.len() != tree.n_leaves() {
        return invalid(format!("tree has {} leaves, got {} weights", tree.n_leaves(), leaves.len()));
    }
    for w in leaves {
        if w.rank() != t.rank() {
            return invalid(format!("weight {w} has rank {}, SL_{m} needs {}", w.rank(), t.rank()));
        }
        if !w.is_dominant() {
            return invalid(format!("leaf weight {w} is not dominant"));
        }
    }
    let total: i64 = leaves.iter().map(Weight::level).sum();
    let internal_edges = tree.internal_edges();
    let candidates: Vec<Vec<Weight>> = internal_edges
        .iter()
        .map(|&e| {
            let below: i64 = tree.leaves_below(tree.edges()[e].1).iter().map(|&l| leaves[l].level()).sum();
            dominant_weights_up_to(t.rank(), below.min(total - below))
        })
        .collect();
    let mut assignments: Vec<Vec<Weight>> = vec![Vec::new()];
    for cands in &candidates {
        assignments = assignments
            .into_iter()
            .flat_map(|prefix| {
                cands.iter().map(move |w| {
                    let mut next = prefix.clone();
                    next.push(w.clone());
                    next
                })
            })
            .collect();
    }
    let base: Vec<Weight> = (0..tree.edges().len())
        .map(|e| {
            let (a, b) = tree.edges()[e];
            match (tree.is_leaf(a), tree.is_leaf(b)) {
                (true, _) => leaves[a].clone(),
                (_, true) => leaves[b].clone(),
                _ => Weight::zero(t.rank()),
            }
        })
        .collect();
    let cache: std::sync::Mutex<HashMap<[Weight; 3], Vec<BzFilling>>> = Default::default();
    let per_assignment = |assignment: &Vec<Weight>| -> Result<(u64, Vec<Quilt>)> {
        let mut edge_weights = base.clone();
        for (&e, w) in internal_edges.iter().zip(assignment) {
            edge_weights[e] = w.clone();
        }
        let mut per_vertex = Vec::new();
        for &v in tree.internal_vertices() {
            let key = vertex_boundary(tree, v, &edge_weights);
            let hit = cache.lock().expect("cache lock").get(&key).cloned();
            let fillings = match hit {
                Some(f) => f,
                None => {
                    let f = enumerate_bz_with(&t, &key[0], &key[1], &key[2], opts)?;
                    cache.lock().expect("cache lock").insert(key, f.clone());
                    f
                }
            };
            if fillings.is_empty() {
                return Ok((0, Vec::new()));
            }
            per_vertex.push(fillings);
        }
        let count = per_vertex.iter().try_fold(1u64, |acc, f| acc.checked_mul(f.len() as u64));
        let count = count.ok_or_else(|| Error::Overflow("quilt count exceeds u64".into()))?;
        let mut quilts = Vec::new();
        if list {
            let mut combos: Vec<Vec<BzFilling>> = vec![Vec::new()];
            for fs in &per_vertex {
                combos = combos
                    .into_iter()
                    .flat_map(|prefix| {
                        fs.iter().map(move |f| {
                            let mut next = prefix.clone();
                            next.push(f.clone());
                            next
                        })
                    })
                    .collect();
            }
            quilts = combos
                .into_iter()
                .map(|fillings| Quilt {
                    edge_weights: edge_weights.clone(),
                    fillings,
                })
                .collect();
        }
        Ok((count, quilts))
    };
    let results: Vec<Result<(u64, Vec<Quilt>)>> = if opts.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?;
        pool.install(|| assignments.par_iter().map(per_assignment).collect())
    } else {
        assignments.iter().map(per_assignment).collect()
    };
    let mut count = 0u64;
    let mut quilts = Vec::new();
    for r in results {
        let (c, q) = r?;
        count = count
            .checked_add(c)
            .ok_or_else(|| Error::Overflow("quilt count exceeds u64".into()))?;
        quilts.extend(q);
    }
    Ok(QuiltCount {
        count,
        quilts: list.then_some(quilts),
    })
}
