//! Integrable highest-weight modules of affine algebras at positive level.
//!
//! Graded dimensions come from the lattice-sum character formula
//! `Σ_γ ch_γ(0) q^{e(γ)} / ∏(1−q^n)^d`, where `γ` runs over `λ + κM`, `M` is
//! the lattice spanned by the long roots (equivalently the image of the
//! coroot lattice) and `κ = k + h∨`.

use std::collections::HashMap;
use std::sync::{LazyLock, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factorial, q128_to_q, Q};
use crate::error::{Error, Result};
use crate::liealg::{formal_dim, sym2_moments, weight_system, weyl_dim, CartanElement, LieData, Weight, WeightSystem, R128};
use crate::liealg::irrep_moments;
use crate::rootsys::{Factor, RootSystem};

/// One dominant weight per factor of a root system, in the system's factor order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModuleLabel(pub Vec<Weight>);

impl ModuleLabel {
    pub fn vacuum(rs: &RootSystem) -> Self {
        ModuleLabel(rs.factors().iter().map(|f| Weight::zero(f.ty.rank as usize)).collect())
    }

    pub fn is_vacuum(&self) -> bool {
        self.0.iter().all(Weight::is_zero)
    }
}

impl std::fmt::Display for ModuleLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|w| w.to_string()).collect();
        write!(f, "({})", parts.join(" "))
    }
}

/// Graded dimensions of a module starting at its lowest conformal weight `offset`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedDims {
    pub offset: Q,
    pub dims: Vec<BigInt>,
}

/// `(θ∨, λ) = Σ a_i∨ λ_i`.
pub fn level_of(data: &LieData, lam: &Weight) -> i64 {
    data.comarks.iter().zip(&lam.0).map(|(a, l)| a * l).sum()
}

pub fn is_integrable(factor: &Factor, lam: &Weight) -> bool {
    let data = LieData::get(factor.ty);
    lam.0.len() == data.rank && lam.is_dominant() && level_of(&data, lam) <= factor.level as i64
}

/// All integrable weights at the factor's level, in lexicographic label order.
pub fn integrable_weights(factor: &Factor) -> Vec<Weight> {
    let data = LieData::get(factor.ty);
    let mut out = Vec::new();
    let mut cur = vec![0i64; data.rank];
    fn rec(i: usize, budget: i64, comarks: &[i64], cur: &mut Vec<i64>, out: &mut Vec<Weight>) {
        if i == comarks.len() {
            out.push(Weight(cur.clone()));
            return;
        }
        let mut v = 0;
        while v * comarks[i] <= budget {
            cur[i] = v;
            rec(i + 1, budget - v * comarks[i], comarks, cur, out);
            v += 1;
        }
        cur[i] = 0;
    }
    rec(0, factor.level as i64, &data.comarks, &mut cur, &mut out);
    out
}

pub(crate) fn kappa(factor: &Factor) -> i64 {
    factor.level as i64 + factor.ty.dual_coxeter() as i64
}

pub(crate) fn conformal_weight_r(data: &LieData, level: u64, lam: &Weight) -> R128 {
    data.casimir(lam) / R128::from_integer(2 * (level as i128 + data.dual_coxeter() as i128))
}

/// `h_λ = (λ, λ+2ρ) / 2(k+h∨)`.
pub fn conformal_weight(factor: &Factor, lam: &Weight) -> Result<Q> {
    if !is_integrable(factor, lam) {
        return Err(Error::InvalidArgument(format!("{lam} is not integrable for {factor}")));
    }
    let data = LieData::get(factor.ty);
    Ok(q128_to_q(&conformal_weight_r(&data, factor.level, lam)))
}

/// Integrable weights with `h_λ ≤ max_h`, with their conformal weights.
pub fn weights_up_to(factor: &Factor, max_h: R128) -> Vec<(Weight, R128)> {
    let data = LieData::get(factor.ty);
    let mut out = Vec::new();
    let mut cur = vec![0i64; data.rank];
    // (λ, λ+2ρ) grows with every label since the inverse Cartan matrix is positive.
    fn rec(
        i: usize,
        budget: i64,
        data: &LieData,
        level: u64,
        max_h: R128,
        cur: &mut Vec<i64>,
        out: &mut Vec<(Weight, R128)>,
    ) {
        if i == data.rank {
            let w = Weight(cur.clone());
            let h = conformal_weight_r(data, level, &w);
            if h <= max_h {
                out.push((w, h));
            }
            return;
        }
        let mut v = 0;
        while v * data.comarks[i] <= budget {
            cur[i] = v;
            let probe = Weight(cur.iter().enumerate().map(|(j, &x)| if j <= i { x } else { 0 }).collect());
            if conformal_weight_r(data, level, &probe) > max_h {
                break;
            }
            rec(i + 1, budget - v * data.comarks[i], data, level, max_h, cur, out);
            v += 1;
        }
        cur[i] = 0;
    }
    rec(0, factor.level as i64, &data, factor.level, max_h, &mut cur, &mut out);
    out
}

const LATTICE_CAP: usize = 2_000_000;

/// Integer vectors `n` with `κ nᵀGn/2 + b·n ≤ bound` for a positive definite
/// even integral `G`, by Fincke–Pohst enumeration.
fn lattice_points(g: &[Vec<i64>], kappa: i64, b: &[i64], bound: i64, cap: usize) -> Result<Vec<(Vec<i64>, i64)>> {
    let r = g.len();
    let mut qm: Vec<Vec<f64>> = g.iter().map(|row| row.iter().map(|&x| x as f64).collect()).collect();
    // center c solves κ G c = −b
    let center = solve(&qm, &b.iter().map(|&x| -(x as f64) / kappa as f64).collect::<Vec<_>>());
    let mut cgc = 0.0;
    for i in 0..r {
        for j in 0..r {
            cgc += center[i] * qm[i][j] * center[j];
        }
    }
    let radius = 2.0 * bound as f64 / kappa as f64 + cgc;
    for i in 0..r {
        for j in i + 1..r {
            qm[j][i] = qm[i][j];
            qm[i][j] /= qm[i][i];
        }
        for k in i + 1..r {
            for l in k..r {
                qm[k][l] -= qm[k][i] * qm[i][l];
            }
        }
    }
    let eps = 1e-7 * (1.0 + radius.abs());
    let mut out = Vec::new();
    let mut x = vec![0i64; r];
    struct Ctx<'a> {
        qm: &'a [Vec<f64>],
        c: &'a [f64],
        g: &'a [Vec<i64>],
        b: &'a [i64],
        kappa: i64,
        bound: i64,
        eps: f64,
        cap: usize,
    }
    fn rec(i: usize, t: f64, x: &mut Vec<i64>, ctx: &Ctx, out: &mut Vec<(Vec<i64>, i64)>) -> Result<()> {
        let r = x.len();
        let mut s = 0.0;
        for j in i + 1..r {
            s += ctx.qm[i][j] * (x[j] as f64 - ctx.c[j]);
        }
        let mid = ctx.c[i] - s;
        let rad = (t.max(0.0) / ctx.qm[i][i]).sqrt();
        let lo = (mid - rad - ctx.eps).ceil() as i64;
        let hi = (mid + rad + ctx.eps).floor() as i64;
        for v in lo..=hi {
            x[i] = v;
            let d = v as f64 - mid;
            let rest = t - ctx.qm[i][i] * d * d;
            if rest < -ctx.eps {
                continue;
            }
            if i == 0 {
                let val = exact_form(ctx.g, ctx.kappa, ctx.b, x);
                if val <= ctx.bound as i128 {
                    if out.len() >= ctx.cap {
                        return Err(Error::Resource(format!("more than {} lattice points", ctx.cap)));
                    }
                    out.push((x.clone(), val as i64));
                }
            } else {
                rec(i - 1, rest, x, ctx, out)?;
            }
        }
        x[i] = 0;
        Ok(())
    }
    if r == 0 {
        return Ok(vec![(vec![], 0)]);
    }
    let ctx = Ctx { qm: &qm, c: &center, g, b, kappa, bound, eps, cap };
    rec(r - 1, radius + eps, &mut x, &ctx, &mut out)?;
    Ok(out)
}

fn exact_form(g: &[Vec<i64>], kappa: i64, b: &[i64], x: &[i64]) -> i128 {
    let r = x.len();
    let mut quad: i128 = 0;
    for i in 0..r {
        if x[i] == 0 {
            continue;
        }
        for j in 0..r {
            quad += (x[i] * g[i][j] * x[j]) as i128;
        }
    }
    let lin: i128 = (0..r).map(|i| (b[i] * x[i]) as i128).sum();
    kappa as i128 * quad / 2 + lin
}

fn solve(a: &[Vec<f64>], rhs: &[f64]) -> Vec<f64> {
    let n = rhs.len();
    let mut m: Vec<Vec<f64>> = a.iter().zip(rhs).map(|(row, &r)| {
        let mut v = row.clone();
        v.push(r);
        v
    }).collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&p, &q| m[p][col].abs().total_cmp(&m[q][col].abs()))
            .unwrap();
        m.swap(col, piv);
        for row in 0..n {
            if row != col {
                let f = m[row][col] / m[col][col];
                if f != 0.0 {
                    for k in col..=n {
                        let v = m[col][k];
                        m[row][k] -= f * v;
                    }
                }
            }
        }
    }
    (0..n).map(|i| m[i][n] / m[i][i]).collect()
}

/// Coefficients of `∏_{n≥1} (1−q^n)^{−d}` up to `q^depth`.
pub fn free_boson_series(d: u64, depth: usize) -> Vec<BigInt> {
    let sigma: Vec<i64> = (0..=depth as i64)
        .map(|n| if n == 0 { 0 } else { (1..=n).filter(|k| n % k == 0).sum() })
        .collect();
    let mut a = vec![BigInt::zero(); depth + 1];
    a[0] = BigInt::one();
    for n in 1..=depth {
        let mut acc = BigInt::zero();
        for k in 1..=n {
            acc += &a[n - k] * sigma[k];
        }
        a[n] = acc * d / n;
    }
    a
}

static GRADED: LazyLock<Mutex<HashMap<(Factor, Weight), Vec<BigInt>>>> = LazyLock::new(|| Mutex::new(HashMap::new()));

/// Graded dimensions of `L(k, λ)` at conformal weights `h_λ, h_λ+1, …, h_λ+depth`.
pub fn graded_dims(factor: &Factor, lam: &Weight, depth: usize) -> Result<GradedDims> {
    if !is_integrable(factor, lam) {
        return Err(Error::InvalidArgument(format!("{lam} is not integrable for {factor}")));
    }
    let data = LieData::get(factor.ty);
    let offset = q128_to_q(&conformal_weight_r(&data, factor.level, lam));
    let key = (*factor, lam.clone());
    if let Some(v) = GRADED.lock().unwrap().get(&key) {
        if v.len() > depth {
            return Ok(GradedDims { offset, dims: v[..=depth].to_vec() });
        }
    }
    let k = kappa(factor);
    let b: Vec<i64> = lam.0.iter().map(|x| x + 1).collect();
    let points = lattice_points(&data.coroot_gram, k, &b, depth as i64, LATTICE_CAP)?;
    let mut theta = vec![BigInt::zero(); depth + 1];
    for (n, e) in points {
        let gamma: Vec<i64> = (0..data.rank)
            .map(|j| lam.0[j] + k * (0..data.rank).map(|i| n[i] * data.coroot_gram[i][j]).sum::<i64>())
            .collect();
        theta[e as usize] += formal_dim(&data, &Weight(gamma));
    }
    let free = free_boson_series(factor.ty.dim(), depth);
    let dims = convolve(&theta, &free, depth);
    GRADED.lock().unwrap().insert(key, dims.clone());
    Ok(GradedDims { offset, dims })
}

/// Truncated product of two coefficient lists.
pub fn convolve(a: &[BigInt], b: &[BigInt], depth: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); depth + 1];
    for (i, x) in a.iter().enumerate().take(depth + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(depth + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Graded dimensions of a product module up to `depth` above its lowest weight.
pub fn product_graded_dims(rs: &RootSystem, label: &ModuleLabel, depth: usize) -> Result<Vec<BigInt>> {
    let mut acc = vec![BigInt::zero(); depth + 1];
    acc[0] = BigInt::one();
    for (f, w) in rs.factors().iter().zip(&label.0) {
        let gd = graded_dims(f, w, depth)?;
        acc = convolve(&acc, &gd.dims, depth);
    }
    if rs.abelian_rank > 0 {
        acc = convolve(&acc, &free_boson_series(rs.abelian_rank as u64, depth), depth);
    }
    Ok(acc)
}

/// Weight system of the conformal-weight-2 subspace of the vacuum module.
pub fn vacuum_depth2(factor: &Factor) -> Result<WeightSystem> {
    let data = LieData::get(factor.ty);
    let adj = weight_system(&data, &data.theta(), u64::MAX)?;
    let mut out = crate::liealg::sym2_weights(&data)?;
    for (w, m) in adj.iter() {
        out.add(w.clone(), *m);
    }
    if factor.level == 1 {
        let two_theta = Weight(data.theta().0.iter().map(|x| 2 * x).collect());
        let v = weight_system(&data, &two_theta, u64::MAX)?;
        for (w, m) in v.iter() {
            let e = out.entries.get_mut(w).expect("V(2θ) weights lie in Sym² of the adjoint");
            *e -= m;
            if *e == 0 {
                out.entries.remove(w);
            }
        }
    }
    Ok(out)
}

pub(crate) fn two_theta(data: &LieData) -> Weight {
    Weight(data.theta().0.iter().map(|x| 2 * x).collect())
}

/// `dim Sym²g + dim g − [k = 1]·dim V(2θ)`.
pub fn vacuum_depth2_dim(factor: &Factor) -> BigInt {
    let d = BigInt::from(factor.ty.dim());
    let mut out = &d * (&d + 1u32) / 2u32 + &d;
    if factor.level == 1 {
        let data = LieData::get(factor.ty);
        out -= weyl_dim(&data, &two_theta(&data)).expect("dominant");
    }
    out
}

/// Moments of the vacuum conformal-weight-2 subspace of one factor.
pub fn vacuum_depth2_moments(factor: &Factor, h: &CartanElement, j_max: usize) -> Result<Vec<BigInt>> {
    let data = LieData::get(factor.ty);
    let adj = irrep_moments(&data, &data.theta(), h, j_max)?;
    let mut out: Vec<BigInt> = sym2_moments(&adj).into_iter().zip(&adj).map(|(a, b)| a + b).collect();
    if factor.level == 1 {
        let v = irrep_moments(&data, &two_theta(&data), h, j_max)?;
        for (o, x) in out.iter_mut().zip(v) {
            *o -= x;
        }
    }
    Ok(out)
}

/// A block of interchangeable factor positions (all carrying the same factor).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub factor: Factor,
    pub positions: Vec<usize>,
}

/// Cells of the full symmetry: all copies of one factor form one block.
pub fn factor_cells(rs: &RootSystem) -> Vec<Cell> {
    let mut out: Vec<Cell> = Vec::new();
    for (i, f) in rs.factors().iter().enumerate() {
        match out.last_mut() {
            Some(c) if c.factor == *f => c.positions.push(i),
            _ => out.push(Cell { factor: *f, positions: vec![i] }),
        }
    }
    out
}

/// Singleton cells: no collapsing at all.
pub fn singleton_cells(rs: &RootSystem) -> Vec<Cell> {
    rs.factors()
        .iter()
        .enumerate()
        .map(|(i, f)| Cell { factor: *f, positions: vec![i] })
        .collect()
}

/// A module label standing for `size` labels that differ by permuting
/// positions inside cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleOrbit {
    pub label: ModuleLabel,
    pub size: BigInt,
    pub conformal_weight: R128,
}

/// Non-vacuum modules with integral total conformal weight `≤ max_h`, collapsed
/// along `cells`. Fails when more than `cap` partial labels are visited.
pub fn module_orbits(rs: &RootSystem, cells: &[Cell], max_h: i64, cap: usize) -> Result<Vec<ModuleOrbit>> {
    let max = R128::from_integer(max_h as i128);
    // Per cell: multisets of non-vacuum weights with total h ≤ max.
    let mut per_cell: Vec<Vec<(Vec<(Weight, usize)>, R128, BigInt)>> = Vec::new();
    let mut visited = 0usize;
    for cell in cells {
        let ws: Vec<(Weight, R128)> = weights_up_to(&cell.factor, max).into_iter().filter(|(w, _)| !w.is_zero()).collect();
        let n = cell.positions.len();
        let mut opts = Vec::new();
        let mut chosen: Vec<(usize, usize)> = Vec::new();
        multisets(&ws, 0, n, R128::from_integer(0), max, &mut chosen, &mut opts, &mut visited, cap)?;
        let fact_n = factorial(n as u64);
        let opts = opts
            .into_iter()
            .map(|(sel, h)| {
                let used: usize = sel.iter().map(|(_, m)| m).sum();
                let mut den = factorial((n - used) as u64);
                for (_, m) in &sel {
                    den *= factorial(*m as u64);
                }
                let picked = sel.iter().map(|(i, m)| (ws[*i].0.clone(), *m)).collect();
                (picked, h, &fact_n / den)
            })
            .collect();
        per_cell.push(opts);
    }
    let mut out = Vec::new();
    let mut pick = vec![0usize; cells.len()];
    combine(rs, cells, &per_cell, 0, R128::from_integer(0), max, &mut pick, &mut out, &mut visited, cap)?;
    out.sort_by(|a, b| a.conformal_weight.cmp(&b.conformal_weight).then_with(|| a.label.cmp(&b.label)));
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn multisets(
    ws: &[(Weight, R128)],
    start: usize,
    slots: usize,
    h: R128,
    max: R128,
    chosen: &mut Vec<(usize, usize)>,
    out: &mut Vec<(Vec<(usize, usize)>, R128)>,
    visited: &mut usize,
    cap: usize,
) -> Result<()> {
    *visited += 1;
    if *visited > cap {
        return Err(Error::Resource(format!("more than {cap} partial module labels")));
    }
    out.push((chosen.clone(), h));
    for i in start..ws.len() {
        let wh = ws[i].1;
        let mut m = 1;
        while m <= slots && h + wh * R128::from_integer(m as i128) <= max {
            chosen.push((i, m));
            multisets(ws, i + 1, slots - m, h + wh * R128::from_integer(m as i128), max, chosen, out, visited, cap)?;
            chosen.pop();
            m += 1;
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments, clippy::type_complexity)]
fn combine(
    rs: &RootSystem,
    cells: &[Cell],
    per_cell: &[Vec<(Vec<(Weight, usize)>, R128, BigInt)>],
    i: usize,
    h: R128,
    max: R128,
    pick: &mut Vec<usize>,
    out: &mut Vec<ModuleOrbit>,
    visited: &mut usize,
    cap: usize,
) -> Result<()> {
    if i == cells.len() {
        if h.is_integer() && h > R128::from_integer(0) {
            let mut label = ModuleLabel::vacuum(rs);
            let mut size = BigInt::one();
            for (c, cell) in cells.iter().enumerate() {
                let (sel, _, sz) = &per_cell[c][pick[c]];
                size *= sz;
                let mut pos = cell.positions.iter();
                for (w, m) in sel {
                    for _ in 0..*m {
                        label.0[*pos.next().unwrap()] = w.clone();
                    }
                }
            }
            out.push(ModuleOrbit { label, size, conformal_weight: h });
        }
        return Ok(());
    }
    for (k, (_, ch, _)) in per_cell[i].iter().enumerate() {
        let nh = h + *ch;
        if nh > max {
            continue;
        }
        *visited += 1;
        if *visited > cap {
            return Err(Error::Resource(format!("more than {cap} partial module labels")));
        }
        pick[i] = k;
        combine(rs, cells, per_cell, i + 1, nh, max, pick, out, visited, cap)?;
    }
    Ok(())
}

/// All module labels of total conformal weight exactly `target`, either
/// listed individually or one representative per permutation orbit.
pub fn modules_with_conformal_weight(rs: &RootSystem, target: i64, collapse: bool) -> Result<Vec<ModuleLabel>> {
    if !rs.is_semisimple() {
        return Err(Error::InvalidArgument("module enumeration needs a semisimple root system".into()));
    }
    if target == 0 {
        return Ok(vec![ModuleLabel::vacuum(rs)]);
    }
    let cells = if collapse { factor_cells(rs) } else { singleton_cells(rs) };
    let t = R128::from_integer(target as i128);
    Ok(module_orbits(rs, &cells, target, 10_000_000)?
        .into_iter()
        .filter(|o| o.conformal_weight == t)
        .map(|o| o.label)
        .collect())
}

/// Dimension of the lowest-weight space of a product module.
pub fn top_dim(rs: &RootSystem, label: &ModuleLabel) -> BigInt {
    rs.factors()
        .iter()
        .zip(&label.0)
        .map(|(f, w)| weyl_dim(&LieData::get(f.ty), w).expect("dominant label"))
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::qf;
    use crate::rootsys::{parse_symbol, Family, SimpleType};

    fn fac(f: Family, r: u32, k: u64) -> Factor {
        Factor::new(SimpleType::new(f, r).unwrap(), k).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn integrable_sets() {
        assert_eq!(integrable_weights(&fac(Family::A, 1, 2)).len(), 3);
        assert_eq!(integrable_weights(&fac(Family::E, 8, 1)).len(), 1);
        assert_eq!(integrable_weights(&fac(Family::A, 2, 1)).len(), 3);
        assert_eq!(integrable_weights(&fac(Family::D, 4, 1)).len(), 4);
    }

    #[test]
    fn conformal_weights() {
        assert_eq!(conformal_weight(&fac(Family::A, 1, 2), &Weight(vec![2])).unwrap(), qf(1, 2));
        assert_eq!(conformal_weight(&fac(Family::A, 1, 4), &Weight(vec![2])).unwrap(), qf(1, 3));
        assert_eq!(conformal_weight(&fac(Family::G, 2, 3), &Weight(vec![0, 0])).unwrap(), qf(0, 1));
        assert!(conformal_weight(&fac(Family::A, 1, 1), &Weight(vec![2])).is_err());
    }

    #[test]
    fn a1_graded_dims() {
        let a11 = fac(Family::A, 1, 1);
        assert_eq!(graded_dims(&a11, &Weight(vec![0]), 3).unwrap().dims, ints(&[1, 3, 4, 7]));
        assert_eq!(graded_dims(&fac(Family::A, 1, 2), &Weight(vec![0]), 2).unwrap().dims, ints(&[1, 3, 9]));
        assert_eq!(graded_dims(&a11, &Weight(vec![0]), 0).unwrap().dims, ints(&[1]));
        // θ_{√2ℤ+1/√2}/η: 2, 2, 6, 8, ...
        assert_eq!(graded_dims(&a11, &Weight(vec![1]), 3).unwrap().dims, ints(&[2, 2, 6, 8]));
    }

    #[test]
    fn e8_level_one_matches_theta_series() {
        // E4/η^8 = q^{-1/3}(1 + 248q + 4124q² + 34752q³ + …)
        let e8 = fac(Family::E, 8, 1);
        assert_eq!(graded_dims(&e8, &Weight::zero(8), 3).unwrap().dims, ints(&[1, 248, 4124, 34752]));
    }

    #[test]
    fn tops_are_weyl_dims() {
        for ty in SimpleType::all_up_to_rank(4) {
            for k in 1..=3 {
                let f = Factor::new(ty, k).unwrap();
                let data = LieData::get(ty);
                for w in integrable_weights(&f) {
                    let g = graded_dims(&f, &w, 1).unwrap();
                    assert_eq!(g.dims[0], weyl_dim(&data, &w).unwrap(), "{f} {w}");
                    assert!(g.dims[1] >= BigInt::zero());
                }
            }
        }
    }

    #[test]
    fn vacuum_depth2_agrees_with_character() {
        for (f, r, k) in [(Family::A, 1, 1), (Family::A, 1, 2), (Family::G, 2, 1), (Family::B, 3, 1), (Family::A, 3, 2)] {
            let fa = fac(f, r, k);
            let g = graded_dims(&fa, &Weight::zero(r as usize), 2).unwrap();
            assert_eq!(BigInt::from(vacuum_depth2(&fa).unwrap().dim()), g.dims[2], "{fa}");
            assert_eq!(vacuum_depth2_dim(&fa), g.dims[2], "{fa}");
        }
        assert_eq!(vacuum_depth2_dim(&fac(Family::A, 1, 1)), BigInt::from(4));
        assert_eq!(vacuum_depth2_dim(&fac(Family::A, 1, 3)), BigInt::from(9));
    }

    #[test]
    fn vacuum_moments_match_weights() {
        let fa = fac(Family::B, 2, 1);
        let h = CartanElement::new(0, vec![1, 1]);
        let ws = vacuum_depth2(&fa).unwrap();
        assert_eq!(vacuum_depth2_moments(&fa, &h, 6).unwrap(), crate::liealg::moments(&ws, &h, 6));
    }

    #[test]
    fn modules_of_small_weight() {
        // [2] is not integrable at level 1 and h_[1] = 1/4
        let rs = parse_symbol("A1,1^2").unwrap();
        assert!(modules_with_conformal_weight(&rs, 1, false).unwrap().is_empty());
        let rs = parse_symbol("A1,1^4").unwrap();
        let all = modules_with_conformal_weight(&rs, 1, false).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].to_string(), "([1] [1] [1] [1])");
        let rs = parse_symbol("A1,2^2").unwrap();
        let mut got: Vec<String> = modules_with_conformal_weight(&rs, 1, false).unwrap().iter().map(|l| l.to_string()).collect();
        got.sort();
        assert_eq!(got, vec!["([2] [2])"]);
        let rs = parse_symbol("A1,1^4 A1,2").unwrap();
        assert_eq!(modules_with_conformal_weight(&rs, 1, false).unwrap().len(), 1 + 6);
        assert_eq!(modules_with_conformal_weight(&rs, 1, true).unwrap().len(), 2);
    }

    #[test]
    fn modules_target_zero_is_vacuum() {
        let rs = parse_symbol("A2,4^7").unwrap();
        assert_eq!(modules_with_conformal_weight(&rs, 0, true).unwrap(), vec![ModuleLabel::vacuum(&rs)]);
        assert!(!modules_with_conformal_weight(&rs, 2, true).unwrap().is_empty());
    }

    #[test]
    fn orbit_sizes_sum_to_uncollapsed_count() {
        let rs = parse_symbol("A1,2^3 A2,1^2").unwrap();
        for target in 1..=2 {
            let all = modules_with_conformal_weight(&rs, target, false).unwrap();
            let orbits = module_orbits(&rs, &factor_cells(&rs), target, 1_000_000).unwrap();
            let total: BigInt = orbits
                .iter()
                .filter(|o| o.conformal_weight == R128::from_integer(target as i128))
                .map(|o| o.size.clone())
                .sum();
            assert_eq!(total, BigInt::from(all.len()));
        }
    }

    #[test]
    fn product_grading_is_convolution() {
        let rs = parse_symbol("A1,1^2").unwrap();
        let vac = product_graded_dims(&rs, &ModuleLabel::vacuum(&rs), 2).unwrap();
        // lattice A1² : 1, 6, 2·4 + 9 = 17
        assert_eq!(vac, ints(&[1, 6, 17]));
    }
}
