//! Exact feasibility checks for multiplicity systems `A·m = b`.
//!
//! Three stages, in order: integer solvability ignoring signs (Hermite normal
//! form), linear-programming bounds over the rationals, and a branch-and-bound
//! search for a nonnegative integer point.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{lcm_big, qbig, Q};
use crate::error::{Error, Result};

/// `A·x = b` with per-variable bounds; `None` is unbounded on that side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearSystem {
    pub a: Vec<Vec<Q>>,
    pub b: Vec<Q>,
    pub lower: Vec<Option<Q>>,
    pub upper: Vec<Option<Q>>,
}

impl LinearSystem {
    /// A system with all variables bounded below by zero.
    pub fn nonneg(a: Vec<Vec<Q>>, b: Vec<Q>) -> Result<Self> {
        let n = a.first().map_or(0, |r| r.len());
        Self::new(a, b, vec![Some(Q::zero()); n], vec![None; n])
    }

    pub fn new(a: Vec<Vec<Q>>, b: Vec<Q>, lower: Vec<Option<Q>>, upper: Vec<Option<Q>>) -> Result<Self> {
        let n = lower.len();
        if a.len() != b.len() || a.iter().any(|r| r.len() != n) || upper.len() != n {
            return Err(Error::InvalidArgument("inconsistent linear system dimensions".into()));
        }
        for (l, u) in lower.iter().zip(&upper) {
            if let (Some(l), Some(u)) = (l, u) {
                if l > u {
                    return Err(Error::InvalidArgument(format!("lower bound {l} exceeds upper bound {u}")));
                }
            }
        }
        Ok(LinearSystem { a, b, lower, upper })
    }

    pub fn from_ints(a: &[Vec<i64>], b: &[i64]) -> Self {
        let a: Vec<Vec<Q>> = a.iter().map(|r| r.iter().map(|&x| Q::from_integer(x.into())).collect()).collect();
        let b = b.iter().map(|&x| Q::from_integer(x.into())).collect();
        Self::nonneg(a, b).expect("consistent dimensions")
    }

    pub fn num_vars(&self) -> usize {
        self.lower.len()
    }

    pub fn num_rows(&self) -> usize {
        self.b.len()
    }

    /// Exact check that `x` satisfies every row and bound.
    pub fn satisfied_by(&self, x: &[Q]) -> bool {
        if x.len() != self.num_vars() {
            return false;
        }
        let rows_ok = self
            .a
            .iter()
            .zip(&self.b)
            .all(|(row, b)| row.iter().zip(x).fold(Q::zero(), |acc, (a, v)| acc + a * v) == *b);
        let bounds_ok = x.iter().enumerate().all(|(j, v)| {
            self.lower[j].as_ref().is_none_or(|l| v >= l) && self.upper[j].as_ref().is_none_or(|u| v <= u)
        });
        rows_ok && bounds_ok
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stage {
    Integrality,
    Bounds,
    Search,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Feasibility {
    Infeasible,
    Feasible(Vec<BigInt>),
    Unknown(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityResult {
    pub status: Feasibility,
    pub stage: Stage,
    pub nodes: u64,
}

impl FeasibilityResult {
    pub fn is_infeasible(&self) -> bool {
        self.status == Feasibility::Infeasible
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self.status, Feasibility::Feasible(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_nodes: u64,
    /// LP tightening passes are skipped above this many variables.
    pub tighten_max_vars: usize,
    pub time_limit: Option<Duration>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_nodes: 20_000, tighten_max_vars: 400, time_limit: None }
    }
}

/// Whether `m` is a sum of (repeated) elements of `parts`.
pub fn partition_exists(m: i64, parts: &[u64]) -> bool {
    if m < 0 {
        return false;
    }
    if m == 0 {
        return true;
    }
    let parts: Vec<u64> = parts.iter().copied().filter(|&p| p > 0).collect();
    if parts.is_empty() {
        return false;
    }
    let m = m as u64;
    let g = parts.iter().fold(0u64, |acc, &p| acc.gcd(&p));
    if m % g != 0 {
        return false;
    }
    let m = m / g;
    let mut reduced: Vec<u64> = parts.iter().map(|p| p / g).collect();
    reduced.sort_unstable();
    reduced.dedup();
    if reduced[0] == 1 {
        return true;
    }
    // Brauer–Schur bound for the Frobenius number of a coprime set
    let lo = reduced[0] as u128;
    let hi = *reduced.last().unwrap() as u128;
    if (m as u128) > (lo - 1) * (hi - 1) {
        return true;
    }
    // residues modulo the smallest part: shortest representable value in each class
    let a = reduced[0] as usize;
    let mut best = vec![u64::MAX; a];
    best[0] = 0;
    let mut done = vec![false; a];
    for _ in 0..a {
        let Some(r) = (0..a).filter(|&r| !done[r] && best[r] != u64::MAX).min_by_key(|&r| best[r]) else { break };
        done[r] = true;
        for &p in &reduced[1..] {
            let nr = (r + (p as usize % a)) % a;
            let nv = best[r] + p;
            if nv < best[nr] {
                best[nr] = nv;
            }
        }
    }
    let r = (m % a as u64) as usize;
    best[r] != u64::MAX && best[r] <= m
}

/// Rows of `[A | b]` scaled to integers.
fn integer_rows(sys: &LinearSystem) -> Vec<(Vec<BigInt>, BigInt)> {
    sys.a
        .iter()
        .zip(&sys.b)
        .map(|(row, b)| {
            let den = row.iter().chain(std::iter::once(b)).fold(BigInt::one(), |acc, x| lcm_big(&acc, x.denom()));
            let scale = qbig(&den);
            (row.iter().map(|x| (x * &scale).to_integer()).collect(), (b * &scale).to_integer())
        })
        .collect()
}

/// Fraction-free echelon form of `[A | b]`: the rows of a maximal independent
/// set of rows of `A` and the absolute value of a nonzero maximal minor on
/// them. `None` when `b` is not in the rational column space.
fn independent_rows(rows: &[(Vec<BigInt>, BigInt)], n: usize) -> Option<(Vec<usize>, BigInt)> {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|(r, b)| r.iter().cloned().chain(std::iter::once(b.clone())).collect())
        .collect();
    let mut order: Vec<usize> = (0..m.len()).collect();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(rank, p);
        order.swap(rank, p);
        let (top, rest) = m.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in rest.iter_mut() {
            let f = row[col].clone();
            for k in col + 1..=n {
                row[k] = (&pivot_row[col] * &row[k] - &f * &pivot_row[k]) / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = pivot_row[col].clone();
        rank += 1;
    }
    if m[rank..].iter().any(|r| !r[n].is_zero()) {
        return None;
    }
    order.truncate(rank);
    Some((order, prev.abs()))
}

/// Whether `A·x = b` has a solution in integers (signs and bounds ignored).
///
/// The column lattice of a full-row-rank integer matrix contains `D·Z^m` for
/// any nonzero maximal minor `D`, so the Hermite reduction runs modulo `D`.
pub fn has_integral_solution(sys: &LinearSystem) -> bool {
    let rows = integer_rows(sys);
    let n = sys.num_vars();
    let Some((keep, d)) = independent_rows(&rows, n) else { return false };
    let r = keep.len();
    if r == 0 {
        return true;
    }
    let reduce = |x: &mut BigInt| *x = x.mod_floor(&d);
    let mut gens: Vec<Vec<BigInt>> = (0..n)
        .map(|j| keep.iter().map(|&i| rows[i].0[j].mod_floor(&d)).collect())
        .filter(|g: &Vec<BigInt>| g.iter().any(|x| !x.is_zero()))
        .collect();
    let mut pivots: Vec<Vec<BigInt>> = Vec::with_capacity(r);
    for i in 0..r {
        let mut piv = vec![BigInt::zero(); r];
        piv[i] = d.clone();
        for g in gens.iter_mut() {
            if g[i].is_zero() {
                continue;
            }
            let (a, b) = (piv[i].clone(), g[i].clone());
            let e = a.extended_gcd(&b);
            let (pa, pb) = (&a / &e.gcd, &b / &e.gcd);
            for k in i..r {
                let (u, v) = (piv[k].clone(), g[k].clone());
                piv[k] = &u * &e.x + &v * &e.y;
                g[k] = &v * &pa - &u * &pb;
                if k > i {
                    reduce(&mut piv[k]);
                    reduce(&mut g[k]);
                }
            }
        }
        if piv[i].is_negative() {
            piv.iter_mut().for_each(|x| *x = -&*x);
            piv.iter_mut().skip(i + 1).for_each(reduce);
        }
        gens.retain(|g| g.iter().any(|x| !x.is_zero()));
        pivots.push(piv);
    }
    let mut res: Vec<BigInt> = keep.iter().map(|&i| rows[i].1.mod_floor(&d)).collect();
    for (i, piv) in pivots.iter().enumerate() {
        let (quo, rem) = res[i].div_rem(&piv[i]);
        if !rem.is_zero() {
            return false;
        }
        for k in i..r {
            res[k] -= &quo * &piv[k];
            reduce(&mut res[k]);
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Max(Q, Vec<Q>),
}

/// Dense bounded-variable simplex on an integer-preserving tableau: the true
/// tableau is `t / det`, and every entry of `t` is a minor of the original
/// matrix, so pivots need exact divisions only.
#[derive(Clone)]
struct Simplex {
    /// rows × (n structural + artificial) columns
    t: Vec<Vec<BigInt>>,
    det: BigInt,
    /// values of basic variables
    xb: Vec<Q>,
    basis: Vec<usize>,
    /// column at its upper bound (nonbasic only)
    at_upper: Vec<bool>,
    lower: Vec<Q>,
    upper: Vec<Option<Q>>,
    /// number of structural columns
    n: usize,
    /// consecutive pivots that did not move the point
    degenerate_run: usize,
}

const BLAND_AFTER: usize = 50;

enum Step {
    Optimal,
    Unbounded,
    Moved,
}

enum Restore {
    Feasible,
    Infeasible,
    GaveUp,
}

impl Simplex {
    /// Phase I for `A y = b`, `lower ≤ y ≤ upper`; `None` when infeasible.
    fn feasible(a: &[Vec<Q>], b: &[Q], lower: &[Q], upper: &[Option<Q>]) -> Option<Simplex> {
        let m = b.len();
        let n = upper.len();
        let mut t: Vec<Vec<BigInt>> = Vec::with_capacity(m);
        let mut xb = Vec::with_capacity(m);
        for i in 0..m {
            let rhs = a[i].iter().zip(lower).fold(b[i].clone(), |acc, (x, l)| acc - x * l);
            let den = a[i].iter().fold(BigInt::one(), |acc, x| lcm_big(&acc, x.denom()));
            let scale = if rhs.is_negative() { -qbig(&den) } else { qbig(&den) };
            let mut row: Vec<BigInt> = a[i].iter().map(|x| (x * &scale).to_integer()).collect();
            row.extend((0..m).map(|k| if k == i { BigInt::one() } else { BigInt::zero() }));
            t.push(row);
            xb.push(rhs * &scale);
        }
        let mut lo = lower.to_vec();
        lo.extend(std::iter::repeat_n(Q::zero(), m));
        let mut up = upper.to_vec();
        up.extend(std::iter::repeat_n(None, m));
        let mut s = Simplex {
            t,
            det: BigInt::one(),
            xb,
            basis: (n..n + m).collect(),
            at_upper: vec![false; n + m],
            lower: lo,
            upper: up,
            n,
            degenerate_run: 0,
        };
        let mut cost = vec![BigInt::zero(); n + m];
        for c in cost.iter_mut().skip(n) {
            *c = BigInt::one();
        }
        let bounded = s.run(&cost);
        debug_assert!(bounded.is_some(), "phase one is bounded");
        if s.basis.iter().zip(&s.xb).any(|(&v, x)| v >= n && x.is_positive()) {
            return None;
        }
        // drive zero-valued artificials out of the basis
        let mut i = 0;
        while i < s.basis.len() {
            if s.basis[i] >= n {
                match (0..n).find(|&j| !s.t[i][j].is_zero() && !s.basis.contains(&j)) {
                    Some(j) => {
                        let v = s.value(j);
                        s.pivot(i, j);
                        s.xb[i] = v;
                        s.at_upper[j] = false;
                        i += 1;
                    }
                    None => {
                        s.t.remove(i);
                        s.xb.remove(i);
                        s.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
        for row in s.t.iter_mut() {
            row.truncate(n);
        }
        s.at_upper.truncate(n);
        s.lower.truncate(n);
        s.upper.truncate(n);
        Some(s)
    }

    fn value(&self, j: usize) -> Q {
        if let Some(i) = self.basis.iter().position(|&b| b == j) {
            self.xb[i].clone()
        } else if self.at_upper[j] {
            self.upper[j].clone().unwrap()
        } else {
            self.lower[j].clone()
        }
    }

    fn point(&self) -> Vec<Q> {
        (0..self.n).map(|j| self.value(j)).collect()
    }

    fn entry(&self, i: usize, j: usize) -> Q {
        Q::new(self.t[i][j].clone(), self.det.clone())
    }

    /// Moves every basic value by `−T_j·delta` for a change `delta` of column `j`.
    fn shift_basics(&mut self, j: usize, delta: &Q) {
        for i in 0..self.t.len() {
            if !self.t[i][j].is_zero() {
                let d = self.entry(i, j) * delta;
                self.xb[i] -= d;
            }
        }
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.t[r][j].clone();
        let prow = self.t[r].clone();
        for i in 0..self.t.len() {
            if i == r {
                continue;
            }
            let f = self.t[i][j].clone();
            for (x, y) in self.t[i].iter_mut().zip(&prow) {
                let mut v = &*x * &p;
                if !f.is_zero() && !y.is_zero() {
                    v -= &f * y;
                }
                *x = v / &self.det;
            }
        }
        self.det = p;
        self.basis[r] = j;
    }

    /// Minimizes `cost·y` from a feasible basis; `None` when unbounded.
    fn run(&mut self, cost: &[BigInt]) -> Option<()> {
        self.degenerate_run = 0;
        loop {
            match self.step(cost) {
                Step::Optimal => return Some(()),
                Step::Unbounded => return None,
                Step::Moved => {}
            }
        }
    }

    fn step(&mut self, cost: &[BigInt]) -> Step {
        let width = self.t.first().map_or(self.n, |r| r.len()).min(cost.len());
        let mut is_basic = vec![false; width];
        for &b in &self.basis {
            if b < width {
                is_basic[b] = true;
            }
        }
        // entering column: Dantzig's rule, or Bland's rule while stalling
        let bland = self.degenerate_run >= BLAND_AFTER;
        let mut enter: Option<(usize, BigInt)> = None;
        for j in 0..width {
            if is_basic[j] || self.upper[j].as_ref() == Some(&self.lower[j]) {
                continue;
            }
            let mut d = &cost[j] * &self.det;
            for (i, &bv) in self.basis.iter().enumerate() {
                if !cost[bv].is_zero() && !self.t[i][j].is_zero() {
                    d -= &cost[bv] * &self.t[i][j];
                }
            }
            if self.det.is_negative() {
                d = -d;
            }
            if (!self.at_upper[j] && d.is_negative()) || (self.at_upper[j] && d.is_positive()) {
                let gain = d.abs();
                if bland {
                    enter = Some((j, gain));
                    break;
                }
                if enter.as_ref().is_none_or(|(_, g)| gain > *g) {
                    enter = Some((j, gain));
                }
            }
        }
        let Some((j, _)) = enter else { return Step::Optimal };
        let dir = if self.at_upper[j] { -Q::one() } else { Q::one() };
        let col: Vec<Q> = (0..self.t.len()).map(|i| self.entry(i, j)).collect();
        // ratio test (limit, variable, row, leaves at upper); ties go to the smallest variable
        let mut best: Option<(Q, usize, Option<usize>, bool)> =
            self.upper[j].as_ref().map(|u| (u - &self.lower[j], j, None, false));
        for (i, tij) in col.iter().enumerate() {
            let rate = -&dir * tij;
            if rate.is_zero() {
                continue;
            }
            let bv = self.basis[i];
            let (limit, to_upper) = if rate.is_negative() {
                (Some((&self.xb[i] - &self.lower[bv]) / -&rate), false)
            } else {
                (self.upper[bv].as_ref().map(|u| (u - &self.xb[i]) / &rate), true)
            };
            if let Some(l) = limit {
                let better = match &best {
                    None => true,
                    Some((bl, bidx, _, _)) => l < *bl || (l == *bl && bv < *bidx),
                };
                if better {
                    best = Some((l, bv, Some(i), to_upper));
                }
            }
        }
        let Some((theta, _, row, to_upper)) = best else { return Step::Unbounded };
        if theta.is_zero() {
            self.degenerate_run += 1;
        } else {
            self.degenerate_run = 0;
        }
        for (i, tij) in col.iter().enumerate() {
            if !tij.is_zero() {
                let d = &dir * tij * &theta;
                self.xb[i] -= d;
            }
        }
        match row {
            None => {
                self.at_upper[j] = !self.at_upper[j];
            }
            Some(r) => {
                let leaving = self.basis[r];
                let entering_value = &self.value(j) + &dir * &theta;
                self.pivot(r, j);
                self.xb[r] = entering_value;
                self.at_upper[j] = false;
                self.at_upper[leaving] = to_upper;
            }
        }
        Step::Moved
    }

    /// Replaces the bounds of structural column `j`; basic values may become
    /// infeasible until [`Simplex::restore`] runs.
    fn set_bounds(&mut self, j: usize, lower: Q, upper: Option<Q>) {
        let basic = self.basis.contains(&j);
        let old = self.value(j);
        self.lower[j] = lower;
        self.upper[j] = upper;
        if !basic {
            if self.upper[j].is_none() {
                self.at_upper[j] = false;
            }
            let new = self.value(j);
            if new != old {
                let delta = new - old;
                self.shift_basics(j, &delta);
            }
        }
    }

    /// Dual simplex with zero costs: pivots until every basic value is within
    /// its bounds, or a row proves that no point exists.
    fn restore(&mut self, max_pivots: usize) -> Restore {
        for _ in 0..max_pivots {
            let infeasible = (0..self.basis.len())
                .filter(|&i| {
                    let bv = self.basis[i];
                    self.xb[i] < self.lower[bv] || self.upper[bv].as_ref().is_some_and(|u| self.xb[i] > *u)
                })
                .min_by_key(|&i| self.basis[i]);
            let Some(r) = infeasible else { return Restore::Feasible };
            let bv = self.basis[r];
            let raise = self.xb[r] < self.lower[bv];
            let target = if raise { self.lower[bv].clone() } else { self.upper[bv].clone().unwrap() };
            let det_neg = self.det.is_negative();
            let mut is_basic = vec![false; self.n];
            self.basis.iter().for_each(|&b| is_basic[b] = true);
            // x_r changes by −T_rj·Δ_j
            let enter = (0..self.n).find(|&j| {
                if is_basic[j] || self.t[r][j].is_zero() || self.upper[j].as_ref() == Some(&self.lower[j]) {
                    return false;
                }
                let positive = self.t[r][j].is_positive() != det_neg;
                let can_raise_j = !self.at_upper[j];
                // raising x_r needs Δ_j of sign opposite to T_rj
                if raise {
                    positive != can_raise_j
                } else {
                    positive == can_raise_j
                }
            });
            let Some(j) = enter else { return Restore::Infeasible };
            let trj = self.entry(r, j);
            let delta = (&self.xb[r] - &target) / &trj;
            let new_value = self.value(j) + &delta;
            self.shift_basics(j, &delta);
            self.pivot(r, j);
            self.xb[r] = new_value;
            self.at_upper[j] = false;
            self.at_upper[bv] = !raise;
        }
        Restore::GaveUp
    }
}

/// Standard form of a system: variables with a finite lower bound are kept,
/// the others are negated (`x = −y`) or split (`x = y⁺ − y⁻`).
struct Standard {
    a: Vec<Vec<Q>>,
    b: Vec<Q>,
    lower: Vec<Q>,
    upper: Vec<Option<Q>>,
    /// for each original variable: (column, negated, column of the negative part)
    map: Vec<(usize, bool, Option<usize>)>,
}

fn standard(sys: &LinearSystem) -> Standard {
    let m = sys.num_rows();
    let mut cols: Vec<Vec<Q>> = Vec::new();
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    let mut map = Vec::new();
    for j in 0..sys.num_vars() {
        let col: Vec<Q> = (0..m).map(|i| sys.a[i][j].clone()).collect();
        match (&sys.lower[j], &sys.upper[j]) {
            (Some(l), u) => {
                map.push((cols.len(), false, None));
                lower.push(l.clone());
                upper.push(u.clone());
                cols.push(col);
            }
            (None, Some(u)) => {
                map.push((cols.len(), true, None));
                lower.push(-u.clone());
                upper.push(None);
                cols.push(col.iter().map(|x| -x).collect());
            }
            (None, None) => {
                map.push((cols.len(), false, Some(cols.len() + 1)));
                lower.extend([Q::zero(), Q::zero()]);
                upper.extend([None, None]);
                cols.push(col.clone());
                cols.push(col.iter().map(|x| -x).collect());
            }
        }
    }
    let a = (0..m).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    Standard { a, b: sys.b.clone(), lower, upper, map }
}

/// An LP over a fixed system that can be optimized for several objectives.
pub struct LpSolver {
    std: Standard,
    simplex: Option<Simplex>,
}

impl LpSolver {
    pub fn new(sys: &LinearSystem) -> Self {
        let std = standard(sys);
        let simplex = Simplex::feasible(&std.a, &std.b, &std.lower, &std.upper);
        LpSolver { std, simplex }
    }

    pub fn is_feasible(&self) -> bool {
        self.simplex.is_some()
    }

    /// The current vertex in original coordinates.
    pub fn point(&self) -> Option<Vec<Q>> {
        let s = self.simplex.as_ref()?;
        Some(
            self.std
                .map
                .iter()
                .map(|(y, negated, neg)| {
                    let mut v = s.value(*y);
                    if let Some(n) = neg {
                        v -= s.value(*n);
                    }
                    if *negated {
                        -v
                    } else {
                        v
                    }
                })
                .collect(),
        )
    }

    /// Maximizes `Σ obj_j x_j`.
    pub fn maximize(&mut self, obj: &[Q]) -> LpOutcome {
        let Some(s) = self.simplex.as_mut() else { return LpOutcome::Infeasible };
        let den = obj.iter().fold(BigInt::one(), |acc, x| lcm_big(&acc, x.denom()));
        let scale = qbig(&den);
        let mut cost = vec![BigInt::zero(); self.std.upper.len()];
        for (j, (y, negated, neg)) in self.std.map.iter().enumerate() {
            let c = (&obj[j] * &scale).to_integer();
            let c = if *negated { c } else { -c };
            cost[*y] = c.clone();
            if let Some(n) = neg {
                cost[*n] = -c;
            }
        }
        if s.run(&cost).is_none() {
            return LpOutcome::Unbounded;
        }
        let x = self.point().unwrap();
        let val = x.iter().zip(obj).fold(Q::zero(), |acc, (a, b)| acc + a * b);
        LpOutcome::Max(val, x)
    }
}

/// Maximum of variable `var` subject to the system.
pub fn lp_max(sys: &LinearSystem, var: usize) -> LpOutcome {
    let mut obj = vec![Q::zero(); sys.num_vars()];
    obj[var] = Q::one();
    LpSolver::new(sys).maximize(&obj)
}

fn unknown(stage: Stage, nodes: u64, why: String) -> FeasibilityResult {
    FeasibilityResult { status: Feasibility::Unknown(why), stage, nodes }
}

fn infeasible(stage: Stage, nodes: u64) -> FeasibilityResult {
    FeasibilityResult { status: Feasibility::Infeasible, stage, nodes }
}

/// Decides whether the system has a point with every coordinate a nonnegative
/// integer (lower bounds are raised to zero). Stages run in order and the
/// first decisive one is reported.
pub fn has_nonneg_integer_solution(sys: &LinearSystem, budget: &Budget) -> FeasibilityResult {
    let start = Instant::now();
    let out_of_time = || budget.time_limit.is_some_and(|t| start.elapsed() > t);
    let n = sys.num_vars();
    let mut sys = sys.clone();
    for l in sys.lower.iter_mut() {
        let v = l.take().map_or(Q::zero(), |v| v.ceil().max(Q::zero()));
        *l = Some(v);
    }
    for u in sys.upper.iter_mut() {
        if let Some(v) = u.as_mut() {
            *v = v.floor();
        }
    }
    if sys.lower.iter().zip(&sys.upper).any(|(l, u)| matches!((l, u), (Some(l), Some(u)) if l > u)) {
        return infeasible(Stage::Bounds, 0);
    }
    if !has_integral_solution(&sys) {
        return infeasible(Stage::Integrality, 0);
    }
    let mut lp = LpSolver::new(&sys);
    if !lp.is_feasible() {
        return infeasible(Stage::Bounds, 0);
    }
    let mut lower: Vec<Q> = sys.lower.iter().map(|l| l.clone().unwrap()).collect();
    let mut upper = sys.upper.clone();
    if n <= budget.tighten_max_vars {
        for j in 0..n {
            let mut obj = vec![Q::zero(); n];
            obj[j] = Q::one();
            if let LpOutcome::Max(v, _) = lp.maximize(&obj) {
                let f = v.floor();
                if upper[j].as_ref().is_none_or(|u| f < *u) {
                    upper[j] = Some(f);
                }
            }
            obj[j] = -Q::one();
            if let LpOutcome::Max(v, _) = lp.maximize(&obj) {
                lower[j] = lower[j].clone().max((-v).ceil());
            }
            if upper[j].as_ref().is_some_and(|u| lower[j] > *u) {
                return infeasible(Stage::Bounds, 0);
            }
            if out_of_time() {
                return unknown(Stage::Bounds, 0, "time limit during bound tightening".into());
            }
        }
    }
    let mut root = lp.simplex.take().expect("feasible");
    for j in 0..n {
        root.set_bounds(j, lower[j].clone(), upper[j].clone());
    }
    let max_pivots = 20 * (n + root.basis.len()) + 100;
    match root.restore(max_pivots) {
        Restore::Feasible => {}
        Restore::Infeasible => return infeasible(Stage::Bounds, 0),
        Restore::GaveUp => match Simplex::feasible(&sys.a, &sys.b, &lower, &upper) {
            Some(s) => root = s,
            None => return infeasible(Stage::Bounds, 0),
        },
    }
    let half = Q::new(BigInt::one(), BigInt::from(2));
    let mut nodes = 0u64;
    let mut stack: Vec<Simplex> = vec![root];
    while let Some(node) = stack.pop() {
        nodes += 1;
        if nodes > budget.max_nodes || out_of_time() {
            return unknown(Stage::Search, nodes - 1, format!("search budget exhausted after {} nodes", nodes - 1));
        }
        let x = node.point();
        // most fractional coordinate
        let pick = x
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_integer())
            .min_by(|(_, a), (_, b)| {
                let da = (a.fract().abs() - &half).abs();
                let db = (b.fract().abs() - &half).abs();
                da.cmp(&db)
            })
            .map(|(j, v)| (j, v.clone()));
        let Some((j, v)) = pick else {
            assert!(sys.satisfied_by(&x), "witness must satisfy the system");
            let witness = x.iter().map(|v| v.to_integer()).collect();
            return FeasibilityResult { status: Feasibility::Feasible(witness), stage: Stage::Search, nodes };
        };
        let children = [(node.lower[j].clone(), Some(v.floor())), (v.ceil(), node.upper[j].clone())];
        // explore the rounded-down branch first
        for (lo, up) in children.into_iter().rev() {
            if up.as_ref().is_some_and(|u| lo > *u) {
                continue;
            }
            let mut child = node.clone();
            child.set_bounds(j, lo, up);
            match child.restore(max_pivots) {
                Restore::Feasible => stack.push(child),
                Restore::Infeasible => {}
                Restore::GaveUp => {
                    let (mut l, mut u) = (child.lower.clone(), child.upper.clone());
                    l.truncate(n);
                    u.truncate(n);
                    if let Some(s) = Simplex::feasible(&sys.a, &sys.b, &l, &u) {
                        stack.push(s);
                    }
                }
            }
        }
    }
    infeasible(Stage::Search, nodes)
}

/// Integer value of a rational if it fits into `i64`.
pub fn to_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}
