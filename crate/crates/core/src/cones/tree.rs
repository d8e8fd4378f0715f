//! Oriented trees with leaves `0..=n`, leaf 0 the source.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tree {
    n: usize,
    /// Edges as given, oriented parent → child.
    edges: Vec<(usize, usize)>,
    internal: Vec<usize>,
}

impl Tree {
    /// Builds a tree from undirected edges. Leaves must be exactly `0..=n` and
    /// internal vertices must be numbered above `n`.
    pub fn new(edges: &[(usize, usize)]) -> Result<Tree> {
        if edges.is_empty() {
            return invalid("tree needs at least one edge");
        }
        let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &(a, b) in edges {
            if a == b {
                return invalid(format!("self-loop at {a}"));
            }
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        if adj.len() != edges.len() + 1 {
            return invalid("edge list is not a tree (|V| ≠ |E| + 1)");
        }
        let leaves: BTreeSet<usize> = adj.iter().filter(|(_, nb)| nb.len() == 1).map(|(&v, _)| v).collect();
        let n = leaves.len() - 1;
        if leaves != (0..=n).collect() {
            return invalid(format!("leaves must be labelled 0..={n}, found {leaves:?}"));
        }
        let internal: Vec<usize> = adj.keys().copied().filter(|v| !leaves.contains(v)).collect();
        if let Some(&bad) = internal.iter().find(|&&v| v <= n) {
            return invalid(format!("internal vertex {bad} must be numbered above {n}"));
        }
        // orient away from leaf 0
        let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
        let mut seen = BTreeSet::from([0usize]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[&v] {
                if seen.insert(w) {
                    parent.insert(w, v);
                    queue.push_back(w);
                }
            }
        }
        if seen.len() != adj.len() {
            return invalid("edge list is not connected");
        }
        let oriented = edges
            .iter()
            .map(|&(a, b)| if parent.get(&b) == Some(&a) { (a, b) } else { (b, a) })
            .collect();
        Ok(Tree {
            n,
            edges: oriented,
            internal,
        })
    }

    /// Parses `"0-4,1-4,4-5,2-5,3-5"`.
    pub fn parse(s: &str) -> Result<Tree> {
        let mut edges = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (a, b) = part
                .split_once('-')
                .ok_or_else(|| crate::Error::InvalidArgument(format!("bad edge {part:?}")))?;
            let parse = |x: &str| {
                x.trim()
                    .parse::<usize>()
                    .map_err(|e| crate::Error::InvalidArgument(format!("bad vertex {x:?}: {e}")))
            };
            edges.push((parse(a)?, parse(b)?));
        }
        Tree::new(&edges)
    }

    /// The tree with a single internal vertex `n+1` joined to leaves `0..=n`.
    pub fn star(n: usize) -> Tree {
        let edges: Vec<(usize, usize)> = (0..=n).map(|l| (l, n + 1)).collect();
        Tree::new(&edges).expect("star is a tree")
    }

    /// Largest leaf label; leaves are `0..=n`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_leaves(&self) -> usize {
        self.n + 1
    }

    /// Oriented edges `(parent, child)` in input order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn internal_vertices(&self) -> &[usize] {
        &self.internal
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        v <= self.n
    }

    pub fn edge_name(&self, e: usize) -> String {
        let (a, b) = self.edges[e];
        format!("{}-{}", a.min(b), a.max(b))
    }

    pub fn in_edge(&self, v: usize) -> Option<usize> {
        self.edges.iter().position(|&(_, c)| c == v)
    }

    /// Outgoing edges of `v`, ordered by the smallest leaf below each.
    pub fn out_edges(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.edges.len()).filter(|&e| self.edges[e].0 == v).collect();
        out.sort_by_key(|&e| (self.leaves_below(self.edges[e].1).into_iter().min(), e));
        out
    }

    /// Leaves in the subtree hanging from `v`.
    pub fn leaves_below(&self, v: usize) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            if self.is_leaf(x) && x != 0 {
                out.insert(x);
            }
            stack.extend(self.edges.iter().filter(|&&(p, _)| p == x).map(|&(_, c)| c));
        }
        out
    }

    /// Edge joining a leaf to the rest of the tree.
    pub fn leaf_edge(&self, leaf: usize) -> usize {
        self.edges
            .iter()
            .position(|&(a, b)| a == leaf || b == leaf)
            .expect("every leaf has an edge")
    }

    pub fn is_trivalent(&self) -> bool {
        self.internal
            .iter()
            .all(|&v| self.edges.iter().filter(|&&(a, b)| a == v || b == v).count() == 3)
    }

    /// Internal edges: those joining two internal vertices.
    pub fn internal_edges(&self) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| !self.is_leaf(self.edges[e].0) && !self.is_leaf(self.edges[e].1))
            .collect()
    }

    /// The same tree with leaf labels `0` and `k` exchanged, so leaf `k` becomes the source.
    pub fn reroot(&self, k: usize) -> Result<Tree> {
        if k > self.n {
            return invalid(format!("leaf {k} does not exist"));
        }
        let swap = |v: usize| if v == 0 { k } else if v == k { 0 } else { v };
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|&(a, b)| (swap(a), swap(b))).collect();
        Tree::new(&edges)
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.edges.len()).map(|e| self.edge_name(e)).collect();
        write!(f, "{}", parts.join(","))
    }
}
