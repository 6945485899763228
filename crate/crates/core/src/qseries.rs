//! Exact q-expansions: Eisenstein series, eta products, the discriminant,
//! the modular invariant, characters of holomorphic vertex algebras, and the
//! moment identities obtained from Taylor coefficients of their Jacobi-form
//! refinements.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, factorial, primitive_integer_vector, q, qbig, qf, Q};
use crate::error::{Error, Result};

/// `q^offset · Σ_{n=0}^{N} a_n q^n`, exact up to and including `q^{offset+N}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QSeries {
    pub offset: Q,
    pub coeffs: Vec<Q>,
}

impl QSeries {
    pub fn new(offset: Q, coeffs: Vec<Q>) -> Self {
        assert!(!coeffs.is_empty(), "a series carries at least one coefficient");
        QSeries { offset, coeffs }
    }

    pub fn from_ints(offset: Q, coeffs: &[i64]) -> Self {
        Self::new(offset, coeffs.iter().map(|&c| q(c)).collect())
    }

    pub fn constant(c: Q, precision: usize) -> Self {
        let mut coeffs = vec![Q::zero(); precision + 1];
        coeffs[0] = c;
        Self::new(Q::zero(), coeffs)
    }

    pub fn one(precision: usize) -> Self {
        Self::constant(Q::one(), precision)
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `q^{offset+n}`; zero beyond the stored range is not implied,
    /// so callers must stay within the precision.
    pub fn coeff(&self, n: usize) -> &Q {
        &self.coeffs[n]
    }

    /// Coefficient of `q^e` for an absolute exponent `e`.
    pub fn coeff_at(&self, e: &Q) -> Option<Q> {
        let d = e - &self.offset;
        if !d.is_integer() || d.is_negative() {
            return (d.is_negative() && d.is_integer()).then(Q::zero);
        }
        let n: usize = d.to_integer().try_into().ok()?;
        self.coeffs.get(n).cloned()
    }

    pub fn truncate(&self, precision: usize) -> Self {
        let n = precision.min(self.precision());
        Self::new(self.offset.clone(), self.coeffs[..=n].to_vec())
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::new(self.offset.clone(), self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Multiplies by `q^s`.
    pub fn shift(&self, s: &Q) -> Self {
        Self::new(&self.offset + s, self.coeffs.clone())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = QSeries::one(self.precision());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplicative inverse; the leading coefficient must be nonzero.
    pub fn inverse(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::InvalidArgument("series with zero leading coefficient is not invertible".into()));
        }
        let n = self.precision();
        let mut b = vec![Q::zero(); n + 1];
        b[0] = a0.recip();
        for k in 1..=n {
            let mut s = Q::zero();
            for j in 1..=k {
                s += &self.coeffs[j] * &b[k - j];
            }
            b[k] = -s / a0;
        }
        Ok(Self::new(-&self.offset, b))
    }

    pub fn div(&self, other: &QSeries) -> Result<Self> {
        Ok(self * &other.inverse()?)
    }

    /// Aligns two series with offsets differing by an integer.
    fn aligned(&self, other: &QSeries) -> (Q, Vec<Q>, Vec<Q>) {
        let d = &other.offset - &self.offset;
        assert!(d.is_integer(), "offsets must differ by an integer");
        let d: i64 = d.to_integer().try_into().expect("small offset difference");
        let (lo, hi, shift, swap) = if d >= 0 { (self, other, d as usize, false) } else { (other, self, (-d) as usize, true) };
        let top = lo.precision().min(shift + hi.precision());
        let mut a = lo.coeffs[..=top].to_vec();
        let mut b = vec![Q::zero(); top + 1];
        for (i, x) in hi.coeffs.iter().enumerate() {
            if i + shift <= top {
                b[i + shift] = x.clone();
            }
        }
        a.truncate(top + 1);
        if swap {
            (lo.offset.clone(), b, a)
        } else {
            (lo.offset.clone(), a, b)
        }
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        let (off, a, b) = self.aligned(rhs);
        QSeries::new(off, a.into_iter().zip(b).map(|(x, y)| x + y).collect())
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        let (off, a, b) = self.aligned(rhs);
        QSeries::new(off, a.into_iter().zip(b).map(|(x, y)| x - y).collect())
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries::new(self.offset.clone(), self.coeffs.iter().map(|x| -x).collect())
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        let n = self.precision().min(rhs.precision());
        let mut out = vec![Q::zero(); n + 1];
        for (i, x) in self.coeffs.iter().enumerate().take(n + 1) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] += x * y;
            }
        }
        QSeries::new(&self.offset + &rhs.offset, out)
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q^({}) * (", self.offset)?;
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}q")?,
                _ => write!(f, "{c}q^{n}")?,
            }
        }
        write!(f, " + O(q^{}))", self.precision() + 1)
    }
}

/// Bernoulli numbers `B_0..=B_n` with `B_1 = −1/2`.
pub fn bernoulli(n: usize) -> Vec<Q> {
    let mut b = vec![Q::zero(); n + 1];
    b[0] = Q::one();
    for m in 1..=n {
        let mut s = Q::zero();
        for k in 0..m {
            s += qbig(&binomial(m as u64 + 1, k as u64)) * &b[k];
        }
        b[m] = -s / q(m as i64 + 1);
    }
    b
}

fn sigma(k: u32, n: u64) -> BigInt {
    let mut s = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            s += BigInt::from(d).pow(k);
            let e = n / d;
            if e != d {
                s += BigInt::from(e).pow(k);
            }
        }
        d += 1;
    }
    s
}

/// `E_k = 1 − (2k/B_k) Σ σ_{k−1}(n) q^n` for even `k ≥ 2`.
pub fn eisenstein(k: u32, precision: usize) -> Result<QSeries> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::InvalidArgument(format!("Eisenstein series need even weight ≥ 2, got {k}")));
    }
    let bk = bernoulli(k as usize).pop().unwrap();
    let c = -q(2 * k as i64) / bk;
    let mut coeffs = vec![Q::one()];
    for n in 1..=precision as u64 {
        coeffs.push(&c * qbig(&sigma(k - 1, n)));
    }
    Ok(QSeries::new(Q::zero(), coeffs))
}

/// `Ê_k = −(B_k/k!) E_k`.
pub fn eisenstein_normalized(k: u32, precision: usize) -> Result<QSeries> {
    let e = eisenstein(k, precision)?;
    let bk = bernoulli(k as usize).pop().unwrap();
    Ok(e.scale(&(-bk / qbig(&factorial(k as u64)))))
}

/// `∏_{n≥1} (1 − q^n)^e` for any integer `e`.
pub fn euler_power(e: i64, precision: usize) -> QSeries {
    // n a_n = −e Σ_{k=1}^{n} σ(k) a_{n−k}
    let sig: Vec<BigInt> = (0..=precision as u64).map(|n| if n == 0 { BigInt::zero() } else { sigma(1, n) }).collect();
    let mut a = vec![BigInt::zero(); precision + 1];
    a[0] = BigInt::one();
    for n in 1..=precision {
        let mut s = BigInt::zero();
        for k in 1..=n {
            s += &sig[k] * &a[n - k];
        }
        let (quo, rem) = (s * (-e)).div_rem(&BigInt::from(n));
        debug_assert!(rem.is_zero());
        a[n] = quo;
    }
    QSeries::new(Q::zero(), a.iter().map(qbig).collect())
}

/// `η^e = q^{e/24} ∏ (1 − q^n)^e`.
pub fn eta_power(e: i64, precision: usize) -> QSeries {
    euler_power(e, precision).shift(&qf(e, 24))
}

/// `Δ = η^24 = q − 24q² + …`.
pub fn delta(precision: usize) -> QSeries {
    eta_power(24, precision)
}

/// `J = E_4³/Δ − 744 = q^{−1} + 196884q + …`, with `precision+1` coefficients from `q^{−1}`.
pub fn j_invariant(precision: usize) -> QSeries {
    let e4 = eisenstein(4, precision).unwrap();
    let e43 = e4.pow(3);
    let j = e43.div(&delta(precision)).unwrap();
    &j - &QSeries::constant(q(744), precision)
}

/// Character `q^{−c/24} Σ dim V_n q^n` of a holomorphic vertex algebra of
/// central charge 32 or 40 with `dim V_1 = d1`, coefficients for `n = 0..=precision`.
pub fn zv_character(c: u32, d1: u64, precision: usize) -> Result<QSeries> {
    let (e4_power, shift) = match c {
        32 => (1u32, 248i64),
        40 => (2, 496),
        _ => return Err(Error::UnsupportedCentralCharge(c.to_string())),
    };
    let p = precision + 1;
    let e4 = eisenstein(4, p).unwrap().pow(e4_power);
    let front = &e4 * &eta_power(-(8 * e4_power as i64), p);
    let j = j_invariant(p);
    let tail = &j + &QSeries::constant(q(d1 as i64 - shift), p);
    Ok((&front * &tail).truncate(precision))
}

/// Dimension of the space of level-one modular forms of even weight `k`.
pub fn modular_forms_dim(k: u32) -> usize {
    if k % 2 == 1 || k == 2 {
        0
    } else if k % 12 == 2 {
        (k / 12) as usize
    } else {
        (k / 12) as usize + 1
    }
}

/// Reduced echelon basis of weight-`k` modular forms built from monomials
/// `E_4^a E_6^b`; basis element `i` starts `q^i + O(q^{dim})`.
pub fn modular_form_basis(k: u32, precision: usize) -> Vec<QSeries> {
    if k % 2 == 1 {
        return Vec::new();
    }
    let e4 = eisenstein(4, precision).unwrap();
    let e6 = eisenstein(6, precision).unwrap();
    let mut rows: Vec<Vec<Q>> = Vec::new();
    let mut b = 0;
    while 6 * b <= k {
        let rest = k - 6 * b;
        if rest % 4 == 0 {
            let m = &e4.pow(rest / 4) * &e6.pow(b);
            rows.push(m.coeffs);
        }
        b += 1;
    }
    let mut pivot_row = 0;
    for col in 0..=precision {
        if pivot_row == rows.len() {
            break;
        }
        let Some(p) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(pivot_row, p);
        let inv = rows[pivot_row][col].recip();
        for x in rows[pivot_row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..rows.len() {
            if r != pivot_row && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                let pr = rows[pivot_row].clone();
                for (x, y) in rows[r].iter_mut().zip(pr) {
                    *x -= &f * y;
                }
            }
        }
        pivot_row += 1;
    }
    rows.truncate(pivot_row);
    rows.into_iter().map(|r| QSeries::new(Q::zero(), r)).collect()
}

/// A monomial `S_i^a · ⟨h,h⟩^b` where `S_i^a` is the `a`-th moment of the
/// weight-`i` space. `S_0^a` is 1 for `a = 0` and 0 otherwise, and `S_i^0 = d_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Atom {
    pub space: u32,
    pub moment: u32,
    pub norm_power: u32,
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match (self.space, self.moment) {
            (0, _) => String::new(),
            (i, 0) => format!("d{i}"),
            (i, a) => format!("S{i}^{a}"),
        };
        let h = match self.norm_power {
            0 => String::new(),
            1 => "<h,h>".to_string(),
            b => format!("<h,h>^{b}"),
        };
        match (base.is_empty(), h.is_empty()) {
            (true, true) => write!(f, "1"),
            (true, false) => write!(f, "{h}"),
            (false, true) => write!(f, "{base}"),
            (false, false) => write!(f, "{base}*{h}"),
        }
    }
}

type LinComb = BTreeMap<Atom, Q>;

fn add_term(acc: &mut LinComb, atom: Atom, c: Q) {
    if c.is_zero() {
        return;
    }
    let e = acc.entry(atom).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        acc.remove(&atom);
    }
}

/// A linear relation between moments: `Σ lhs = Σ rhs`, where the left side
/// holds the weight-2 moments and the right side the weight-1 moments and
/// constants. Coefficients are integers with no common factor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentIdentity {
    /// Taylor degree in the elliptic variable.
    pub degree: u32,
    /// Weight of the modular form the identity was read from.
    pub weight: u32,
    pub lhs: Vec<(Atom, BigInt)>,
    pub rhs: Vec<(Atom, BigInt)>,
}

impl MomentIdentity {
    /// Coefficient of an atom on either side.
    pub fn coefficient(&self, atom: Atom) -> BigInt {
        self.lhs
            .iter()
            .chain(&self.rhs)
            .find(|(a, _)| *a == atom)
            .map(|(_, c)| c.clone())
            .unwrap_or_default()
    }

    /// Right side evaluated at given weight-1 moments `s1[a]`, `d1 = s1[0]`, and `⟨h,h⟩`.
    pub fn eval_rhs(&self, s1: &[BigInt], norm: &BigInt) -> BigInt {
        self.rhs
            .iter()
            .map(|(a, c)| {
                let base = match a.space {
                    0 => BigInt::one(),
                    1 => s1[a.moment as usize].clone(),
                    _ => unreachable!("right sides only hold weight-0 and weight-1 atoms"),
                };
                c * base * norm.pow(a.norm_power)
            })
            .sum()
    }

    /// Left side evaluated at weight-2 moments `s2[a]`.
    pub fn eval_lhs(&self, s2: &[BigInt], norm: &BigInt) -> BigInt {
        self.lhs
            .iter()
            .map(|(a, c)| c * &s2[a.moment as usize] * norm.pow(a.norm_power))
            .sum()
    }

    /// Coefficient vector of the left side as a linear form in `S_2^a`, at fixed `⟨h,h⟩`.
    pub fn lhs_form(&self, norm: &BigInt) -> Vec<(u32, BigInt)> {
        self.lhs.iter().map(|(a, c)| (a.moment, c * norm.pow(a.norm_power))).collect()
    }
}

fn write_side(f: &mut fmt::Formatter<'_>, side: &[(Atom, BigInt)]) -> fmt::Result {
    if side.is_empty() {
        return write!(f, "0");
    }
    for (i, (a, c)) in side.iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if i == 0 {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        let plain = a.space == 0 && a.norm_power == 0;
        if plain {
            write!(f, "{mag}")?;
        } else if mag.is_one() {
            write!(f, "{a}")?;
        } else {
            write!(f, "{mag}*{a}")?;
        }
    }
    Ok(())
}

impl fmt::Display for MomentIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_side(f, &self.lhs)?;
        write!(f, " = ")?;
        write_side(f, &self.rhs)
    }
}

/// Identities derived for one central charge, plus the Taylor degrees whose
/// form spaces were too large to pin down.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentIdentitySet {
    pub central_charge: u32,
    pub identities: Vec<MomentIdentity>,
    /// `(degree, weight, dimension)` of each skipped Taylor coefficient.
    pub underdetermined: Vec<(u32, u32, usize)>,
}

impl MomentIdentitySet {
    /// The identity of a given Taylor degree.
    pub fn degree(&self, n: u32) -> Option<&MomentIdentity> {
        self.identities.iter().find(|i| i.degree == n)
    }
}

/// Largest Taylor degree used for each supported central charge.
pub fn max_identity_degree(c: u32) -> Result<u32> {
    match c {
        32 => Ok(10),
        40 => Ok(6),
        _ => Err(Error::UnsupportedCentralCharge(c.to_string())),
    }
}

/// Derives the weight-2 moment identities for a holomorphic vertex algebra of
/// central charge `c` from the `q^0` and `q^1` coefficients of the Taylor
/// coefficients of `exp(−X²⟨h,h⟩E_2/24) η^c Z_V(τ, z)` with `X = 2πiz`.
pub fn derive_moment_identities(c: u32) -> Result<MomentIdentitySet> {
    derive_moment_identities_to(c, max_identity_degree(c)?)
}

/// As [`derive_moment_identities`], for any positive `c ≡ 0 (mod 8)` up to Taylor degree `max_degree`.
pub fn derive_moment_identities_to(c: u32, max_degree: u32) -> Result<MomentIdentitySet> {
    if c == 0 || c % 8 != 0 {
        return Err(Error::UnsupportedCentralCharge(c.to_string()));
    }
    const PREC: usize = 2;
    let e2 = eisenstein(2, PREC)?;
    let euler = euler_power(c as i64, PREC);
    // F_b = E_2^b ∏(1−q^m)^c
    let mut f_b = vec![euler.clone()];
    for b in 1..=max_degree / 2 {
        let next = &f_b[b as usize - 1] * &e2;
        f_b.push(next);
    }
    let mut resolved: BTreeMap<u32, LinComb> = BTreeMap::new();
    let mut identities = Vec::new();
    let mut underdetermined = Vec::new();
    for n in (0..=max_degree).step_by(2) {
        let weight = c / 2 + n;
        let basis = modular_form_basis(weight, PREC);
        if basis.len() > 2 {
            underdetermined.push((n, weight, basis.len()));
            continue;
        }
        // coefficient of q^t in P_n as a combination of atoms
        let coef = |t: usize| -> LinComb {
            let mut acc = LinComb::new();
            for b in 0..=n / 2 {
                let a = n - 2 * b;
                let pref = Q::new((-BigInt::one()).pow(b), BigInt::from(24u32).pow(b) * factorial(b as u64) * factorial(a as u64));
                for i in 0..=t {
                    let s = t - i;
                    let fc = &f_b[b as usize].coeffs[s];
                    if fc.is_zero() {
                        continue;
                    }
                    let atom = if i == 0 {
                        if a > 0 {
                            continue;
                        }
                        Atom { space: 0, moment: 0, norm_power: b }
                    } else {
                        Atom { space: i as u32, moment: a, norm_power: b }
                    };
                    add_term(&mut acc, atom, &pref * fc);
                }
            }
            acc
        };
        // coef_2 − Σ_p coef_p B_p[2] = 0
        let mut rel = coef(2);
        for (p, bp) in basis.iter().enumerate() {
            for (atom, x) in coef(p) {
                add_term(&mut rel, atom, -(x * &bp.coeffs[2]));
            }
        }
        // substitute already resolved weight-2 moments
        let mut changed = true;
        while changed {
            changed = false;
            let keys: Vec<Atom> = rel.keys().copied().collect();
            for atom in keys {
                if atom.space == 2 && atom.moment < n {
                    if let Some(expr) = resolved.get(&atom.moment) {
                        let c0 = rel.remove(&atom).unwrap();
                        for (a, x) in expr {
                            let shifted = Atom { norm_power: a.norm_power + atom.norm_power, ..*a };
                            add_term(&mut rel, shifted, &c0 * x);
                        }
                        changed = true;
                    }
                }
            }
        }
        let top = Atom { space: 2, moment: n, norm_power: 0 };
        let Some(lead) = rel.get(&top).cloned() else {
            underdetermined.push((n, weight, basis.len()));
            continue;
        };
        let unresolved = rel.keys().any(|a| a.space == 2 && *a != top);
        if !unresolved {
            let mut expr = LinComb::new();
            for (a, x) in &rel {
                if *a != top {
                    add_term(&mut expr, *a, -(x / &lead));
                }
            }
            resolved.insert(n, expr);
        }
        identities.push(normalize(n, weight, &rel));
    }
    Ok(MomentIdentitySet { central_charge: c, identities, underdetermined })
}

type Side = &'static [((u32, u32, u32), i64)];

/// Published constants, `(degree, lhs, rhs)` with atoms `(space, moment, norm power)`.
const PUBLISHED_32: &[(u32, Side, Side)] = &[
    (0, &[((2, 0, 0), 1)], &[((1, 0, 0), 248), ((0, 0, 0), 139504)]),
    (2, &[((2, 2, 0), 1)], &[((1, 2, 0), -496), ((1, 0, 1), 60), ((0, 0, 1), 16440)]),
    (4, &[((2, 4, 0), 1)], &[((1, 4, 0), 488), ((1, 2, 1), -504), ((1, 0, 2), 36), ((0, 0, 2), 5328)]),
    (
        6,
        &[((2, 6, 0), 1)],
        &[((1, 6, 0), -256), ((1, 4, 1), 900), ((1, 2, 2), -540), ((1, 0, 3), 30), ((0, 0, 3), 2640)],
    ),
    (
        10,
        &[((2, 10, 0), 4), ((2, 8, 1), -15)],
        &[
            ((1, 10, 0), -64),
            ((1, 8, 1), -120),
            ((1, 6, 2), 5040),
            ((1, 4, 3), -12600),
            ((1, 2, 4), 6300),
            ((1, 0, 5), -315),
            ((0, 0, 5), -20160),
        ],
    ),
];

const PUBLISHED_40: &[(u32, Side, Side)] = &[
    (0, &[((2, 0, 0), 1)], &[((1, 0, 0), 496), ((0, 0, 0), 20620)]),
    (2, &[((2, 2, 0), 1)], &[((1, 2, 0), -248), ((1, 0, 1), 60), ((0, 0, 1), 1560)]),
    (
        6,
        &[((2, 6, 0), 4), ((2, 4, 1), -5)],
        &[((1, 6, 0), -32), ((1, 4, 1), -80), ((1, 2, 2), 360), ((1, 0, 3), -60), ((0, 0, 3), -1200)],
    ),
];

/// The published identities for `c = 32` and `c = 40`, as a reference for
/// [`derive_moment_identities`].
pub fn published_identities(c: u32) -> Result<Vec<MomentIdentity>> {
    let table = match c {
        32 => PUBLISHED_32,
        40 => PUBLISHED_40,
        _ => return Err(Error::UnsupportedCentralCharge(c.to_string())),
    };
    let side = |s: Side| -> Vec<(Atom, BigInt)> {
        s.iter()
            .map(|&((space, moment, norm_power), k)| (Atom { space, moment, norm_power }, BigInt::from(k)))
            .collect()
    };
    Ok(table
        .iter()
        .map(|&(degree, l, r)| MomentIdentity { degree, weight: c / 2 + degree, lhs: side(l), rhs: side(r) })
        .collect())
}

/// Compares a derived set with the published one, ignoring term order.
/// Returns a description of the first disagreement.
pub fn compare_with_published(set: &MomentIdentitySet) -> std::result::Result<(), String> {
    let published = published_identities(set.central_charge).map_err(|e| e.to_string())?;
    let as_map = |v: &[(Atom, BigInt)]| v.iter().cloned().collect::<BTreeMap<Atom, BigInt>>();
    if set.identities.len() != published.len() {
        return Err(format!("{} identities derived, {} published", set.identities.len(), published.len()));
    }
    for p in &published {
        let Some(d) = set.degree(p.degree) else {
            return Err(format!("no identity of degree {}", p.degree));
        };
        if as_map(&d.lhs) != as_map(&p.lhs) || as_map(&d.rhs) != as_map(&p.rhs) {
            return Err(format!("degree {}: derived {d}, published {p}", p.degree));
        }
    }
    Ok(())
}

fn normalize(degree: u32, weight: u32, rel: &LinComb) -> MomentIdentity {
    // left: weight-2 atoms by decreasing moment; right: the rest, negated
    let mut left: Vec<(Atom, Q)> = rel.iter().filter(|(a, _)| a.space == 2).map(|(a, x)| (*a, x.clone())).collect();
    left.sort_by(|x, y| y.0.moment.cmp(&x.0.moment));
    let mut right: Vec<(Atom, Q)> = rel.iter().filter(|(a, _)| a.space != 2).map(|(a, x)| (*a, -x.clone())).collect();
    // S1 atoms by decreasing moment, then d1 before constants
    right.sort_by(|x, y| {
        let key = |a: &Atom| (a.moment, a.space);
        key(&y.0).cmp(&key(&x.0)).then(x.0.norm_power.cmp(&y.0.norm_power))
    });
    let all: Vec<Q> = left.iter().map(|(_, x)| x.clone()).chain(right.iter().map(|(_, x)| -x.clone())).collect();
    let mut ints = primitive_integer_vector(&all, true);
    if left.first().is_some_and(|_| ints[0].is_negative()) {
        for x in ints.iter_mut() {
            *x = -&*x;
        }
    }
    let nl = left.len();
    MomentIdentity {
        degree,
        weight,
        lhs: left.iter().zip(&ints[..nl]).map(|((a, _), c)| (*a, c.clone())).collect(),
        rhs: right.iter().zip(&ints[nl..]).map(|((a, _), c)| (*a, -c.clone())).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &QSeries) -> Vec<i64> {
        s.coeffs.iter().map(|x| x.to_integer().try_into().unwrap()).collect()
    }

    fn is_zero(s: &QSeries) -> bool {
        s.coeffs.iter().all(Zero::is_zero)
    }

    /// σ_3 oracle by trial division.
    fn sigma3(n: i64) -> i64 {
        (1..=n).filter(|d| n % d == 0).map(|d| d * d * d).sum()
    }

    #[test]
    fn eisenstein_expansions() {
        let e4 = eisenstein(4, 8).unwrap();
        for n in 1..=8 {
            assert_eq!(e4.coeffs[n as usize], q(240 * sigma3(n)));
        }
        assert_eq!(ints(&eisenstein(6, 2).unwrap()), vec![1, -504, -16632]);
        assert_eq!(ints(&eisenstein(2, 3).unwrap()), vec![1, -24, -72, -96]);
        assert!(eisenstein(5, 3).is_err());
        assert_eq!(eisenstein_normalized(4, 1).unwrap().coeffs[0], qf(1, 720));
    }

    #[test]
    fn bernoulli_numbers() {
        let b = bernoulli(12);
        assert_eq!(b[1], qf(-1, 2));
        assert_eq!(b[4], qf(-1, 30));
        assert_eq!(b[12], qf(-691, 2730));
        assert!(b[7].is_zero());
    }

    #[test]
    fn eta_and_delta() {
        let eta = eta_power(1, 8);
        assert_eq!(eta.offset, qf(1, 24));
        assert_eq!(ints(&eta), vec![1, -1, -1, 0, 0, 1, 0, 1, 0]);
        assert_eq!(ints(&delta(3)), vec![1, -24, 252, -1472]);
        let e4 = eisenstein(4, 12).unwrap();
        let e6 = eisenstein(6, 12).unwrap();
        let diff = &(&e4.pow(3) - &e6.pow(2)) - &delta(12).scale(&q(1728));
        assert!(is_zero(&diff));
        let eta24 = eta_power(1, 12).pow(24);
        assert!(is_zero(&(&eta24 - &delta(12))));
    }

    #[test]
    fn modular_invariant() {
        let j = j_invariant(3);
        assert_eq!(j.offset, q(-1));
        assert_eq!(ints(&j), vec![1, 0, 196884, 21493760]);
    }

    #[test]
    fn inverse_round_trip() {
        let e4 = eisenstein(4, 6).unwrap();
        let prod = &e4 * &e4.inverse().unwrap();
        assert_eq!(prod, QSeries::one(6));
    }

    #[test]
    fn characters() {
        let z = zv_character(32, 992, 3).unwrap();
        assert_eq!(z.offset, qf(-4, 3));
        assert_eq!(z.coeffs[1], q(992));
        assert_eq!(z.coeffs[2], q(385520));
        let oracle = &eisenstein(4, 3).unwrap().pow(4) * &eta_power(-32, 3);
        assert_eq!(z, oracle);
        let z = zv_character(40, 0, 2).unwrap();
        assert_eq!(ints(&z), vec![1, 0, 20620]);
        assert!(zv_character(24, 0, 2).is_err());
    }

    #[test]
    fn form_spaces() {
        for (k, d) in [(0, 1), (2, 0), (4, 1), (12, 2), (14, 1), (16, 2), (24, 3), (26, 2)] {
            assert_eq!(modular_form_basis(k, 6).len(), d, "weight {k}");
            assert_eq!(modular_forms_dim(k), d);
        }
        let b = modular_form_basis(12, 2);
        assert_eq!(ints(&b[0]), vec![1, 0, 196560]);
        assert_eq!(ints(&b[1]), vec![0, 1, -24]);
    }

    fn atom(space: u32, moment: u32, norm_power: u32) -> Atom {
        Atom { space, moment, norm_power }
    }

    #[test]
    fn identities_c32() {
        let set = derive_moment_identities(32).unwrap();
        assert_eq!(set.identities.len(), 5);
        assert_eq!(set.underdetermined, vec![(8, 24, 3)]);
        let d2 = set.degree(0).unwrap();
        assert_eq!(d2.coefficient(atom(2, 0, 0)), BigInt::from(1));
        assert_eq!(d2.coefficient(atom(1, 0, 0)), BigInt::from(248));
        assert_eq!(d2.coefficient(atom(0, 0, 0)), BigInt::from(139504));
        let s2 = set.degree(2).unwrap();
        assert_eq!(s2.coefficient(atom(1, 2, 0)), BigInt::from(-496));
        assert_eq!(s2.coefficient(atom(1, 0, 1)), BigInt::from(60));
        assert_eq!(s2.coefficient(atom(0, 0, 1)), BigInt::from(16440));
        let s10 = set.degree(10).unwrap();
        assert_eq!(s10.coefficient(atom(2, 10, 0)), BigInt::from(4));
        assert_eq!(s10.coefficient(atom(2, 8, 1)), BigInt::from(-15));
        assert_eq!(s10.coefficient(atom(0, 0, 5)), BigInt::from(-20160));
    }

    #[test]
    fn identities_match_published() {
        for c in [32, 40] {
            let set = derive_moment_identities(c).unwrap();
            compare_with_published(&set).unwrap();
        }
        let mut set = derive_moment_identities(40).unwrap();
        set.identities[1].rhs[0].1 += 1;
        assert!(compare_with_published(&set).is_err());
    }
}
