//! Exact lattice-point enumeration in bounded slices of rational cones.
//!
//! Rows are integral: `b + ⟨a, x⟩ ≥ 0` or `b + ⟨a, x⟩ = 0`. Bounds are tightened
//! by integer interval propagation (ceil of lower, floor of upper); variables
//! that propagation leaves unbounded are certified by Fourier–Motzkin projection.
//! Enumeration branches on the free variable with the narrowest interval.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicU64, Ordering};

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::cones::ConeH;
use crate::error::{invalid, Error, Result};

pub const DEFAULT_POINT_CAP: u64 = 10_000_000;
pub const POINT_CAP_ENV: &str = "BRANCHCONES_POINT_CAP";

/// Propagation passes before giving up on further tightening; bounds stay sound.
const MAX_PASSES: usize = 1_000;
/// Row budget for a single Fourier–Motzkin projection.
const FM_ROW_LIMIT: usize = 50_000;

/// `constant + ⟨coeffs, x⟩ (≥ | =) 0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Row {
    pub constant: i64,
    pub coeffs: Vec<i64>,
}

impl Row {
    pub fn new(constant: i64, coeffs: Vec<i64>) -> Self {
        Row { constant, coeffs }
    }

    pub fn eval(&self, x: &[i64]) -> i128 {
        i128::from(self.constant)
            + self
                .coeffs
                .iter()
                .zip(x)
                .map(|(a, v)| i128::from(*a) * i128::from(*v))
                .sum::<i128>()
    }

    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|&a| a == 0)
    }

    fn negated(&self) -> Row {
        Row {
            constant: -self.constant,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumOptions {
    pub cap: u64,
    pub threads: usize,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            cap: DEFAULT_POINT_CAP,
            threads: 1,
        }
    }
}

impl EnumOptions {
    /// Defaults, with the cap overridden by `BRANCHCONES_POINT_CAP` when set.
    pub fn from_env() -> Result<Self> {
        let mut opts = EnumOptions::default();
        if let Ok(v) = std::env::var(POINT_CAP_ENV) {
            opts.cap = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("{POINT_CAP_ENV}={v:?} is not a nonnegative integer")))?;
        }
        Ok(opts)
    }
}

/// Where a slice came from: the cone's dimension, the fixed block values and the
/// cone column behind each free coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub cone_dim: usize,
    pub fixed: BTreeMap<String, Vec<i64>>,
    pub fixed_values: Vec<Option<i64>>,
    pub free_columns: Vec<usize>,
}

/// A bounded polyhedron with certified integer bounds on every coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Polytope {
    dim: usize,
    inequalities: Vec<Row>,
    equalities: Vec<Row>,
    lower: Vec<i64>,
    upper: Vec<i64>,
    empty: bool,
    provenance: Option<Provenance>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Bounds {
    lo: Vec<Option<i64>>,
    hi: Vec<Option<i64>>,
}

impl Bounds {
    fn unbounded(dim: usize) -> Self {
        Bounds {
            lo: vec![None; dim],
            hi: vec![None; dim],
        }
    }

    fn width(&self, i: usize) -> Option<i64> {
        match (self.lo[i], self.hi[i]) {
            (Some(l), Some(h)) => Some(h - l),
            _ => None,
        }
    }
}

fn gcd_all(values: impl IntoIterator<Item = i64>) -> i64 {
    values.into_iter().fold(0i64, |g, v| g.gcd(&v))
}

/// Integer tightening: divide by the coefficient gcd, rounding the constant
/// down for inequalities. Returns `None` for an equality with no integer solution.
fn tighten(row: Row, equality: bool) -> Option<Row> {
    let g = gcd_all(row.coeffs.iter().copied());
    if g <= 1 {
        return Some(row);
    }
    if equality && row.constant % g != 0 {
        return None;
    }
    Some(Row {
        constant: Integer::div_floor(&row.constant, &g),
        coeffs: row.coeffs.iter().map(|a| a / g).collect(),
    })
}

fn ceil_div(a: i128, b: i128) -> i128 {
    Integer::div_ceil(&a, &b)
}

fn floor_div(a: i128, b: i128) -> i128 {
    Integer::div_floor(&a, &b)
}

fn clamp64(v: i128) -> i64 {
    v.clamp(i128::from(i64::MIN / 4), i128::from(i64::MAX / 4)) as i64
}

/// Tightens bounds to a fixpoint (or the pass limit). `false` means infeasible.
fn propagate(rows: &[Row], b: &mut Bounds) -> bool {
    for _ in 0..MAX_PASSES {
        let mut changed = false;
        for row in rows {
            let mut finite: i128 = i128::from(row.constant);
            let mut infinite = 0usize;
            let mut inf_at = usize::MAX;
            let mut contrib: Vec<Option<i128>> = Vec::with_capacity(row.coeffs.len());
            for (i, &a) in row.coeffs.iter().enumerate() {
                let c = match a {
                    0 => Some(0),
                    a if a > 0 => b.hi[i].map(|h| i128::from(a) * i128::from(h)),
                    a => b.lo[i].map(|l| i128::from(a) * i128::from(l)),
                };
                match c {
                    Some(v) => finite += v,
                    None => {
                        infinite += 1;
                        inf_at = i;
                    }
                }
                contrib.push(c);
            }
            if infinite == 0 && finite < 0 {
                return false;
            }
            if infinite > 1 {
                continue;
            }
            for (j, &a) in row.coeffs.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let rest = match (infinite, contrib[j]) {
                    (0, Some(cj)) => finite - cj,
                    (1, None) if inf_at == j => finite,
                    _ => continue,
                };
                let a = i128::from(a);
                if a > 0 {
                    let nl = clamp64(ceil_div(-rest, a));
                    if b.lo[j].map_or(true, |l| nl > l) {
                        b.lo[j] = Some(nl);
                        changed = true;
                    }
                } else {
                    let nh = clamp64(floor_div(rest, -a));
                    if b.hi[j].map_or(true, |h| nh < h) {
                        b.hi[j] = Some(nh);
                        changed = true;
                    }
                }
                if let (Some(l), Some(h)) = (b.lo[j], b.hi[j]) {
                    if l > h {
                        return false;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    true
}

/// Outcome of projecting onto one coordinate.
enum Projection {
    Infeasible,
    Interval(Option<(i128, i128)>, Option<(i128, i128)>),
}

fn normalize_wide(row: &mut (i128, Vec<i128>)) {
    let g = row.1.iter().chain(std::iter::once(&row.0)).fold(0i128, |g, v| g.gcd(v));
    if g > 1 {
        row.0 /= g;
        for a in row.1.iter_mut() {
            *a /= g;
        }
    }
}

/// Fourier–Motzkin projection of the rational relaxation onto coordinate `keep`.
/// Bounds are returned as fractions `(numerator, denominator)`.
fn fm_project(rows: &[Row], bounds: &Bounds, keep: usize) -> Result<Projection> {
    let dim = bounds.lo.len();
    let mut sys: Vec<(i128, Vec<i128>)> = rows
        .iter()
        .map(|r| (i128::from(r.constant), r.coeffs.iter().map(|&a| i128::from(a)).collect()))
        .collect();
    for i in 0..dim {
        let unit = |s: i128| {
            let mut v = vec![0i128; dim];
            v[i] = s;
            v
        };
        if let Some(l) = bounds.lo[i] {
            sys.push((-i128::from(l), unit(1)));
        }
        if let Some(h) = bounds.hi[i] {
            sys.push((i128::from(h), unit(-1)));
        }
    }
    let mut order: Vec<usize> = (0..dim).filter(|&i| i != keep).collect();
    order.sort_by_key(|&i| (bounds.width(i).map_or(i128::MAX, i128::from), i));
    for var in order {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), BTreeSet::new());
        for r in sys {
            match r.1[var].signum() {
                1 => pos.push(r),
                -1 => neg.push(r),
                _ => {
                    rest.insert(r);
                }
            }
        }
        for p in &pos {
            for n in &neg {
                let (pa, na) = (p.1[var], -n.1[var]);
                let combine = |x: i128, y: i128| -> Result<i128> {
                    x.checked_mul(na)
                        .and_then(|u| y.checked_mul(pa).and_then(|v| u.checked_add(v)))
                        .ok_or_else(|| Error::Overflow("Fourier–Motzkin coefficients".into()))
                };
                let mut row = (combine(p.0, n.0)?, vec![0i128; dim]);
                for k in 0..dim {
                    row.1[k] = combine(p.1[k], n.1[k])?;
                }
                normalize_wide(&mut row);
                if row.1.iter().all(|&a| a == 0) {
                    if row.0 < 0 {
                        return Ok(Projection::Infeasible);
                    }
                    continue;
                }
                rest.insert(row);
            }
        }
        if rest.len() > FM_ROW_LIMIT {
            return Err(Error::BoundednessUndecided { coordinate: keep });
        }
        sys = rest.into_iter().collect();
    }
    let (mut lo, mut hi): (Option<(i128, i128)>, Option<(i128, i128)>) = (None, None);
    for (c, a) in sys {
        let a = a[keep];
        // c + a x ≥ 0
        if a > 0 {
            let cand = (-c, a);
            if lo.map_or(true, |(n, d)| cand.0 * d > n * cand.1) {
                lo = Some(cand);
            }
        } else if a < 0 {
            let cand = (c, -a);
            if hi.map_or(true, |(n, d)| cand.0 * d < n * cand.1) {
                hi = Some(cand);
            }
        } else if c < 0 {
            return Ok(Projection::Infeasible);
        }
    }
    Ok(Projection::Interval(lo, hi))
}

impl Polytope {
    /// Builds and certifies a polytope from integral rows in `dim` variables.
    pub fn new(dim: usize, inequalities: Vec<Row>, equalities: Vec<Row>) -> Result<Self> {
        Self::build(dim, inequalities, equalities, None)
    }

    fn empty_of(dim: usize, provenance: Option<Provenance>) -> Self {
        Polytope {
            dim,
            inequalities: Vec::new(),
            equalities: Vec::new(),
            lower: Vec::new(),
            upper: Vec::new(),
            empty: true,
            provenance,
        }
    }

    fn build(dim: usize, inequalities: Vec<Row>, equalities: Vec<Row>, provenance: Option<Provenance>) -> Result<Self> {
        for r in inequalities.iter().chain(&equalities) {
            if r.coeffs.len() != dim {
                return invalid(format!("row of length {} in a {dim}-dimensional polytope", r.coeffs.len()));
            }
        }
        let mut ineqs = BTreeSet::new();
        let mut eqs = BTreeSet::new();
        for r in inequalities {
            if r.is_constant() {
                if r.constant < 0 {
                    return Ok(Self::empty_of(dim, provenance));
                }
                continue;
            }
            ineqs.insert(tighten(r, false).expect("inequalities always tighten"));
        }
        for r in equalities {
            if r.is_constant() {
                if r.constant != 0 {
                    return Ok(Self::empty_of(dim, provenance));
                }
                continue;
            }
            match tighten(r, true) {
                Some(r) => {
                    let r = if r.coeffs.iter().find(|&&a| a != 0).is_some_and(|&a| a < 0) { r.negated() } else { r };
                    eqs.insert(r);
                }
                None => return Ok(Self::empty_of(dim, provenance)),
            }
        }
        let mut p = Polytope {
            dim,
            inequalities: ineqs.into_iter().collect(),
            equalities: eqs.into_iter().collect(),
            lower: Vec::new(),
            upper: Vec::new(),
            empty: false,
            provenance,
        };
        p.certify()?;
        Ok(p)
    }

    fn all_rows(&self) -> Vec<Row> {
        let mut rows = self.inequalities.clone();
        for e in &self.equalities {
            rows.push(e.clone());
            rows.push(e.negated());
        }
        rows
    }

    fn certify(&mut self) -> Result<()> {
        let rows = self.all_rows();
        let mut b = Bounds::unbounded(self.dim);
        if !propagate(&rows, &mut b) {
            *self = Self::empty_of(self.dim, self.provenance.take());
            return Ok(());
        }
        for i in 0..self.dim {
            if b.lo[i].is_some() && b.hi[i].is_some() {
                continue;
            }
            match fm_project(&rows, &b, i)? {
                Projection::Infeasible => {
                    *self = Self::empty_of(self.dim, self.provenance.take());
                    return Ok(());
                }
                Projection::Interval(lo, hi) => {
                    let (ln, ld) = lo.ok_or(Error::Unbounded { coordinate: i, side: "lower" })?;
                    let (hn, hd) = hi.ok_or(Error::Unbounded { coordinate: i, side: "upper" })?;
                    let l = clamp64(ceil_div(ln, ld));
                    let h = clamp64(floor_div(hn, hd));
                    b.lo[i] = Some(b.lo[i].map_or(l, |x| x.max(l)));
                    b.hi[i] = Some(b.hi[i].map_or(h, |x| x.min(h)));
                }
            }
            if !propagate(&rows, &mut b) {
                *self = Self::empty_of(self.dim, self.provenance.take());
                return Ok(());
            }
        }
        self.lower = b.lo.into_iter().map(|v| v.expect("certified")).collect();
        self.upper = b.hi.into_iter().map(|v| v.expect("certified")).collect();
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// True when the polytope is known to contain no lattice point.
    pub fn is_empty(&self) -> bool {
        self.empty
    }

    pub fn inequalities(&self) -> &[Row] {
        &self.inequalities
    }

    pub fn equalities(&self) -> &[Row] {
        &self.equalities
    }

    /// Certified integer bounds per coordinate (empty for an empty polytope).
    pub fn bounds(&self) -> Vec<(i64, i64)> {
        self.lower.iter().copied().zip(self.upper.iter().copied()).collect()
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    /// The same region with one more inequality.
    pub fn with_inequality(&self, row: Row) -> Result<Polytope> {
        if self.empty {
            return Ok(self.clone());
        }
        let mut ineqs = self.inequalities.clone();
        ineqs.push(row);
        Self::build(self.dim, ineqs, self.equalities.clone(), self.provenance.clone())
    }

    /// Whether `x` satisfies every row exactly.
    pub fn contains(&self, x: &[i64]) -> bool {
        !self.empty
            && x.len() == self.dim
            && self.inequalities.iter().all(|r| r.eval(x) >= 0)
            && self.equalities.iter().all(|r| r.eval(x) == 0)
    }

    /// Embeds a point of the slice back into the coordinates of its source cone.
    pub fn lift(&self, x: &[i64]) -> Option<Vec<i64>> {
        let p = self.provenance.as_ref()?;
        let mut full: Vec<i64> = p.fixed_values.iter().map(|v| v.unwrap_or(0)).collect();
        for (k, &col) in p.free_columns.iter().enumerate() {
            full[col] = x[k];
        }
        Some(full)
    }

    /// Lexicographically sorted, duplicate-free list of lattice points.
    pub fn enumerate_points(&self, opts: &EnumOptions) -> Result<Vec<Vec<i64>>> {
        let mut points = self.run(opts, true)?.1;
        points.sort();
        Ok(points)
    }

    pub fn count_points(&self, opts: &EnumOptions) -> Result<u64> {
        Ok(self.run(opts, false)?.0)
    }

    fn run(&self, opts: &EnumOptions, collect: bool) -> Result<(u64, Vec<Vec<i64>>)> {
        if self.empty {
            return Ok((0, Vec::new()));
        }
        let rows = self.all_rows();
        let mut b = Bounds {
            lo: self.lower.iter().map(|&v| Some(v)).collect(),
            hi: self.upper.iter().map(|&v| Some(v)).collect(),
        };
        if !propagate(&rows, &mut b) {
            return Ok((0, Vec::new()));
        }
        let counter = AtomicU64::new(0);
        let search = Search {
            rows: &rows,
            checks: self,
            cap: opts.cap,
            counter: &counter,
            collect,
        };
        let branch = choose_branch(&b);
        match branch {
            Some(var) if opts.threads > 1 => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(opts.threads)
                    .build()
                    .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
                let (lo, hi) = (b.lo[var].unwrap(), b.hi[var].unwrap());
                let parts: Vec<Result<Vec<Vec<i64>>>> = pool.install(|| {
                    (lo..=hi)
                        .into_par_iter()
                        .map(|v| {
                            let mut local = b.clone();
                            local.lo[var] = Some(v);
                            local.hi[var] = Some(v);
                            let mut out = Vec::new();
                            search.descend(local, &mut out).map(|_| out)
                        })
                        .collect()
                });
                let mut all = Vec::new();
                for part in parts {
                    all.extend(part?);
                }
                Ok((counter.load(Ordering::SeqCst), all))
            }
            _ => {
                let mut out = Vec::new();
                search.descend(b, &mut out)?;
                Ok((counter.load(Ordering::SeqCst), out))
            }
        }
    }
}

/// Narrowest unfixed interval; ties go to the lower index.
fn choose_branch(b: &Bounds) -> Option<usize> {
    (0..b.lo.len())
        .filter_map(|i| b.width(i).filter(|&w| w > 0).map(|w| (w, i)))
        .min()
        .map(|(_, i)| i)
}

struct Search<'a> {
    rows: &'a [Row],
    checks: &'a Polytope,
    cap: u64,
    counter: &'a AtomicU64,
    collect: bool,
}

impl Search<'_> {
    fn descend(&self, mut b: Bounds, out: &mut Vec<Vec<i64>>) -> Result<()> {
        if !propagate(self.rows, &mut b) {
            return Ok(());
        }
        match choose_branch(&b) {
            None => {
                let x: Vec<i64> = b.lo.iter().map(|v| v.unwrap()).collect();
                if self.checks.contains(&x) {
                    let n = self.counter.fetch_add(1, Ordering::SeqCst) + 1;
                    if n > self.cap {
                        return Err(Error::ResourceLimit { cap: self.cap });
                    }
                    if self.collect {
                        out.push(x);
                    }
                }
                Ok(())
            }
            Some(var) => {
                let (lo, hi) = (b.lo[var].unwrap(), b.hi[var].unwrap());
                for v in lo..=hi {
                    let mut next = b.clone();
                    next.lo[var] = Some(v);
                    next.hi[var] = Some(v);
                    self.descend(next, out)?;
                }
                Ok(())
            }
        }
    }
}

/// Substitutes the given block values into `cone` and certifies the remaining region.
pub fn slice(cone: &ConeH, fixed: &BTreeMap<String, Vec<i64>>) -> Result<Polytope> {
    let mut fixed_values: Vec<Option<i64>> = vec![None; cone.dim()];
    for (name, values) in fixed {
        let block = cone
            .block(name)
            .ok_or_else(|| Error::InvalidArgument(format!("cone has no block named {name:?}")))?;
        if values.len() != block.len {
            return invalid(format!("block {name:?} has length {}, got {} values", block.len, values.len()));
        }
        for (k, &v) in values.iter().enumerate() {
            fixed_values[block.offset + k] = Some(v);
        }
    }
    let free_columns: Vec<usize> = (0..cone.dim()).filter(|&c| fixed_values[c].is_none()).collect();
    let substitute = |coeffs: &[i64]| -> Row {
        let constant = coeffs
            .iter()
            .zip(&fixed_values)
            .filter_map(|(a, v)| v.map(|v| a * v))
            .sum();
        Row::new(constant, free_columns.iter().map(|&c| coeffs[c]).collect())
    };
    let provenance = Provenance {
        cone_dim: cone.dim(),
        fixed: fixed.clone(),
        fixed_values: fixed_values.clone(),
        free_columns: free_columns.clone(),
    };
    Polytope::build(
        free_columns.len(),
        cone.inequalities().iter().map(|r| substitute(r)).collect(),
        cone.equalities().iter().map(|r| substitute(r)).collect(),
        Some(provenance),
    )
}

pub fn enumerate_points(p: &Polytope, opts: &EnumOptions) -> Result<Vec<Vec<i64>>> {
    p.enumerate_points(opts)
}

pub fn count_points(p: &Polytope, opts: &EnumOptions) -> Result<u64> {
    p.count_points(opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn interval(lo: i64, hi: i64) -> Polytope {
        Polytope::new(1, vec![Row::new(-lo, vec![1]), Row::new(hi, vec![-1])], vec![]).unwrap()
    }

    #[test]
    fn interval_points() {
        let p = interval(0, 3);
        let opts = EnumOptions::default();
        assert_eq!(p.enumerate_points(&opts).unwrap(), vec![vec![0], vec![1], vec![2], vec![3]]);
        assert_eq!(p.count_points(&opts).unwrap(), 4);
    }

    #[test]
    fn empty_polytope() {
        let p = interval(2, 1);
        assert!(p.is_empty());
        assert!(p.enumerate_points(&EnumOptions::default()).unwrap().is_empty());
        assert_eq!(p.count_points(&EnumOptions::default()).unwrap(), 0);
        // 2x = 1 has no integer solution
        let q = Polytope::new(1, vec![], vec![Row::new(-1, vec![2])]).unwrap();
        assert!(q.is_empty());
    }

    #[test]
    fn unbounded_is_an_error() {
        let err = Polytope::new(2, vec![Row::new(0, vec![1, 0]), Row::new(0, vec![0, 1])], vec![]).unwrap_err();
        assert!(matches!(err, Error::Unbounded { .. }));
    }

    #[test]
    fn fourier_motzkin_certifies_what_propagation_cannot() {
        // x = y, 0 ≤ x + y ≤ 4: no row bounds a single variable on its own
        let p = Polytope::new(
            2,
            vec![Row::new(0, vec![1, 1]), Row::new(4, vec![-1, -1])],
            vec![Row::new(0, vec![1, -1])],
        )
        .unwrap();
        assert_eq!(p.count_points(&EnumOptions::default()).unwrap(), 3);
        assert_eq!(p.bounds(), vec![(0, 2), (0, 2)]);
    }

    #[test]
    fn cap_is_enforced() {
        let p = interval(0, 99);
        let opts = EnumOptions { cap: 10, threads: 1 };
        assert_eq!(p.count_points(&opts).unwrap_err(), Error::ResourceLimit { cap: 10 });
    }

    #[test]
    fn parallel_matches_sequential() {
        // triangle x, y ≥ 0, x + 2y ≤ 12
        let p = Polytope::new(
            2,
            vec![Row::new(0, vec![1, 0]), Row::new(0, vec![0, 1]), Row::new(12, vec![-1, -2])],
            vec![],
        )
        .unwrap();
        let seq = p.enumerate_points(&EnumOptions::default()).unwrap();
        let par = p.enumerate_points(&EnumOptions { cap: DEFAULT_POINT_CAP, threads: 4 }).unwrap();
        assert_eq!(seq, par);
        assert_eq!(seq.len(), 49);
    }

    #[test]
    fn tighten_rounds_inequalities_down() {
        // 2x − 3 ≥ 0 ⇒ x ≥ 2 over the integers
        let p = Polytope::new(1, vec![Row::new(-3, vec![2]), Row::new(5, vec![-1])], vec![]).unwrap();
        assert_eq!(p.enumerate_points(&EnumOptions::default()).unwrap(), vec![vec![2], vec![3], vec![4], vec![5]]);
    }
}
