//! Exact-arithmetic helpers shared across modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;
/// Small rationals used for conformal weights and Lie-theoretic pairings.
pub type Q128 = Ratio<i128>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qbig(n: &BigInt) -> Q {
    Q::from_integer(n.clone())
}

pub fn q128_to_q(x: &Q128) -> Q {
    Q::new(BigInt::from(*x.numer()), BigInt::from(*x.denom()))
}

/// Returns `Some(n)` when `x` is an integer.
pub fn as_integer(x: &Q) -> Option<BigInt> {
    x.is_integer().then(|| x.to_integer())
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Pascal rows `C(p, a)` for `p <= max`.
pub fn binomial_table(max: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(max + 1);
    for p in 0..=max {
        let mut row = vec![BigInt::one(); p + 1];
        for a in 1..p {
            row[a] = &rows[p - 1][a - 1] + &rows[p - 1][a];
        }
        rows.push(row);
    }
    rows
}

pub fn gcd_big(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

pub fn lcm_big(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        BigInt::zero()
    } else {
        (a / a.gcd(b) * b).abs()
    }
}

/// Floor of a rational as an `i64`, if it fits.
pub fn floor_i64(x: &Q) -> Option<i64> {
    x.floor().to_integer().to_i64()
}

/// Scales a rational vector to the primitive integer vector with the same direction,
/// keeping the sign of the first nonzero entry positive when `positive_lead` is set.
pub fn primitive_integer_vector(v: &[Q], positive_lead: bool) -> Vec<BigInt> {
    let den = v.iter().fold(BigInt::one(), |acc, x| lcm_big(&acc, x.denom()));
    let mut ints: Vec<BigInt> = v.iter().map(|x| (x * qbig(&den)).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() {
        for x in ints.iter_mut() {
            *x = &*x / &g;
        }
    }
    if positive_lead {
        if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
            if first.is_negative() {
                for x in ints.iter_mut() {
                    *x = -&*x;
                }
            }
        }
    }
    ints
}
