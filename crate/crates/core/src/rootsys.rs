//! Extended root systems `O^f Φ_{1,k_1} … Φ_{n,k_n}` and balanced enumeration.
//!
//! A [`RootSystem`] records an abelian rank `f` together with a multiset of
//! simple factors carrying a positive level. Factors are kept in canonical
//! order (family letter, rank, level) so that derived equality is multiset
//! equality.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{q, Q};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    pub fn from_letter(c: char) -> Option<Family> {
        Some(match c {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }
}

/// A simple Lie algebra type in canonical form (`A_ℓ, ℓ≥1`, `B_ℓ, ℓ≥2`,
/// `C_ℓ, ℓ≥3`, `D_ℓ, ℓ≥4`, `E_{6,7,8}`, `F_4`, `G_2`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SimpleType {
    pub family: Family,
    pub rank: u32,
}

impl SimpleType {
    /// Builds a canonical type, rejecting low-rank aliases.
    pub fn new(family: Family, rank: u32) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B => rank >= 2,
            Family::C => rank >= 3,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(SimpleType { family, rank })
        } else {
            Err(Error::InvalidRank { family: family.letter(), rank })
        }
    }

    /// Resolves the aliases `B₁=C₁=A₁`, `C₂=B₂`, `D₂=A₁A₁`, `D₃=A₃`.
    pub fn canonicalize(family: Family, rank: u32) -> Result<Vec<SimpleType>> {
        use Family::*;
        let t = |f, r| SimpleType { family: f, rank: r };
        Ok(match (family, rank) {
            (B, 1) | (C, 1) => vec![t(A, 1)],
            (C, 2) => vec![t(B, 2)],
            (D, 2) => vec![t(A, 1), t(A, 1)],
            (D, 3) => vec![t(A, 3)],
            _ => vec![SimpleType::new(family, rank)?],
        })
    }

    pub fn a(rank: u32) -> Self {
        SimpleType { family: Family::A, rank }
    }

    /// `dim g`.
    pub fn dim(&self) -> u64 {
        let l = self.rank as u64;
        match self.family {
            Family::A => l * l + 2 * l,
            Family::B | Family::C => 2 * l * l + l,
            Family::D => 2 * l * l - l,
            Family::E => match l {
                6 => 78,
                7 => 133,
                _ => 248,
            },
            Family::F => 52,
            Family::G => 14,
        }
    }

    /// Dual Coxeter number `h∨`.
    pub fn dual_coxeter(&self) -> u64 {
        let l = self.rank as u64;
        match self.family {
            Family::A => l + 1,
            Family::B => 2 * l - 1,
            Family::C => l + 1,
            Family::D => 2 * l - 2,
            Family::E => match l {
                6 => 12,
                7 => 18,
                _ => 30,
            },
            Family::F => 9,
            Family::G => 4,
        }
    }

    pub fn is_simply_laced(&self) -> bool {
        matches!(self.family, Family::A | Family::D | Family::E)
    }

    /// Every canonical type of rank at most `max_rank` (exceptional types included
    /// whenever their rank fits).
    pub fn all_up_to_rank(max_rank: u32) -> Vec<SimpleType> {
        let mut out = Vec::new();
        for r in 1..=max_rank {
            for fam in [Family::A, Family::B, Family::C, Family::D] {
                if let Ok(t) = SimpleType::new(fam, r) {
                    out.push(t);
                }
            }
        }
        for (fam, r) in [(Family::E, 6), (Family::E, 7), (Family::E, 8), (Family::F, 4), (Family::G, 2)] {
            if r <= max_rank {
                out.push(SimpleType { family: fam, rank: r });
            }
        }
        out.sort();
        out
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

/// A simple factor `Φ_k` at level `k ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Factor {
    pub ty: SimpleType,
    pub level: u64,
}

impl Factor {
    pub fn new(ty: SimpleType, level: u64) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidArgument("level must be positive".into()));
        }
        Ok(Factor { ty, level })
    }

    /// `c = d·k/(k+h∨)`.
    pub fn central_charge(&self) -> Q {
        let d = self.ty.dim() as i64;
        let k = self.level as i64;
        let h = self.ty.dual_coxeter() as i64;
        Q::new(BigInt::from(d * k), BigInt::from(k + h))
    }

    /// `h∨/k`, the quantity that must be constant across factors of a balanced system.
    pub fn ratio(&self) -> Q {
        Q::new(BigInt::from(self.ty.dual_coxeter()), BigInt::from(self.level))
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.ty, self.level)
    }
}

/// `c = d·k/(k+h∨)` for a single factor.
pub fn factor_central_charge(factor: &Factor) -> Q {
    factor.central_charge()
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RootSystem {
    pub abelian_rank: u32,
    factors: Vec<Factor>,
}

impl RootSystem {
    pub fn new(abelian_rank: u32, mut factors: Vec<Factor>) -> Self {
        factors.sort();
        RootSystem { abelian_rank, factors }
    }

    pub fn semisimple(factors: Vec<Factor>) -> Self {
        Self::new(0, factors)
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn is_empty(&self) -> bool {
        self.abelian_rank == 0 && self.factors.is_empty()
    }

    pub fn is_semisimple(&self) -> bool {
        self.abelian_rank == 0 && !self.factors.is_empty()
    }

    /// `d = f + Σ d_i`.
    pub fn dim(&self) -> u64 {
        self.abelian_rank as u64 + self.factors.iter().map(|f| f.ty.dim()).sum::<u64>()
    }

    /// Lie rank `f + Σ ℓ_i`.
    pub fn lie_rank(&self) -> u64 {
        self.abelian_rank as u64 + self.factors.iter().map(|f| f.ty.rank as u64).sum::<u64>()
    }

    /// `c = f + Σ c_i`.
    pub fn central_charge(&self) -> Q {
        self.factors
            .iter()
            .fold(q(self.abelian_rank as i64), |acc, f| acc + f.central_charge())
    }

    /// Groups identical factors: `(factor, multiplicity)` in canonical order.
    pub fn grouped(&self) -> Vec<(Factor, usize)> {
        let mut out: Vec<(Factor, usize)> = Vec::new();
        for f in &self.factors {
            match out.last_mut() {
                Some((g, n)) if g == f => *n += 1,
                _ => out.push((*f, 1)),
            }
        }
        out
    }

    /// Balance in the sense of `(c−f)·h_i∨/k_i = d−c` for every factor, with `c`
    /// the system's own central charge.
    pub fn is_balanced(&self) -> Result<bool> {
        if self.is_empty() {
            return Err(Error::InvalidArgument("the empty root system has no balance".into()));
        }
        if self.factors.is_empty() {
            return Ok(true);
        }
        let c = self.central_charge();
        let f = q(self.abelian_rank as i64);
        let rhs = q(self.dim() as i64) - &c;
        let cs = &c - &f;
        Ok(self.factors.iter().all(|fac| &cs * fac.ratio() == rhs))
    }

    /// Balanced with the prescribed central charge `c`.
    pub fn is_balanced_at(&self, c: &Q) -> Result<bool> {
        Ok(self.is_balanced()? && &self.central_charge() == c)
    }

    /// All factors share one `(type, level)` (no factors counts as well).
    pub fn is_pure_power(&self) -> bool {
        self.factors.windows(2).all(|w| w[0] == w[1])
    }

    /// Appends `n` abelian dimensions (the `BRS(c,f) → BRS(c+n,f+n)` bijection).
    pub fn with_abelian_rank(&self, f: u32) -> RootSystem {
        RootSystem { abelian_rank: f, factors: self.factors.clone() }
    }

    pub fn symbol(&self) -> String {
        format_symbol(self)
    }
}

pub fn is_balanced(rs: &RootSystem) -> Result<bool> {
    rs.is_balanced()
}

pub fn is_pure_power(rs: &RootSystem) -> bool {
    rs.is_pure_power()
}

impl fmt::Display for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_symbol(self))
    }
}

impl FromStr for RootSystem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_symbol(s)
    }
}

/// Canonical symbol, e.g. `O^4 A5,1^4 D4,1^2`.
pub fn format_symbol(rs: &RootSystem) -> String {
    let mut parts = Vec::new();
    if rs.abelian_rank > 0 || rs.factors.is_empty() {
        parts.push(format!("O^{}", rs.abelian_rank));
    }
    for (fac, n) in rs.grouped() {
        if n == 1 {
            parts.push(fac.to_string());
        } else {
            parts.push(format!("{fac}^{n}"));
        }
    }
    parts.join(" ")
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn number(&mut self) -> Result<u64> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        self.src[start..self.pos]
            .parse::<u64>()
            .map_err(|_| Error::Syntax { pos: start, msg: "number out of range".into() })
    }

    fn skip_ws(&mut self) -> bool {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += self.peek().map(char::len_utf8).unwrap_or(1);
        }
        self.pos > start
    }
}

/// Parses `[O^f] F<rank>,<level>[^<mult>] …`. Aliases are normalised.
pub fn parse_symbol(text: &str) -> Result<RootSystem> {
    let mut cur = Cursor { src: text, pos: 0 };
    cur.skip_ws();
    let mut abelian = 0u32;
    let mut factors = Vec::new();
    let mut first = true;
    while cur.peek().is_some() {
        if !first && !cur.skip_ws() {
            return cur.err("expected whitespace between factors");
        }
        if cur.peek().is_none() {
            break;
        }
        let token_start = cur.pos;
        let letter = cur.peek().unwrap();
        if letter == 'O' {
            if !first {
                return cur.err("abelian part must come first");
            }
            cur.pos += 1;
            cur.expect('^')?;
            let f = cur.number()?;
            abelian = u32::try_from(f)
                .map_err(|_| Error::Syntax { pos: token_start, msg: "abelian rank too large".into() })?;
        } else {
            let Some(family) = Family::from_letter(letter) else {
                return cur.err(format!("unknown family '{letter}'"));
            };
            cur.pos += 1;
            let rank_pos = cur.pos;
            let rank = cur.number()?;
            let rank = u32::try_from(rank)
                .map_err(|_| Error::Syntax { pos: rank_pos, msg: "rank too large".into() })?;
            cur.expect(',')?;
            let level_pos = cur.pos;
            let level = cur.number()?;
            if level == 0 {
                return Err(Error::Syntax { pos: level_pos, msg: "level must be positive".into() });
            }
            let mut mult = 1u64;
            if cur.peek() == Some('^') {
                cur.pos += 1;
                let mult_pos = cur.pos;
                mult = cur.number()?;
                if mult == 0 {
                    return Err(Error::Syntax { pos: mult_pos, msg: "multiplicity must be positive".into() });
                }
            }
            for ty in SimpleType::canonicalize(family, rank)? {
                for _ in 0..mult {
                    factors.push(Factor { ty, level });
                }
            }
        }
        first = false;
    }
    if first {
        return cur.err("empty symbol");
    }
    Ok(RootSystem::new(abelian, factors))
}

/// Enumerates `BRS(c, f)`: all balanced root systems with central charge `c`
/// and abelian rank `f`, in canonical order.
pub fn enumerate_brs(c: &Q, f: u32) -> Result<Vec<RootSystem>> {
    if !c.is_positive() {
        return Err(Error::InvalidArgument("central charge must be positive".into()));
    }
    let fq = q(f as i64);
    if c < &fq {
        return Err(Error::InvalidArgument("central charge below abelian rank".into()));
    }
    let cs = c - &fq;
    let mut out = Vec::new();
    if cs.is_zero() {
        out.push(RootSystem::new(f, Vec::new()));
        return Ok(out);
    }
    for rs in enumerate_semisimple(&cs) {
        out.push(rs.with_abelian_rank(f));
    }
    out.sort();
    Ok(out)
}

/// The `f = 0` case. Every balanced semisimple system has a common ratio
/// `r = h∨_i/k_i = (d−c)/c`, hence `k_i = h∨_i·c/(d−c)` and `c_i = d_i·c/d`.
/// We scan the admissible integral `d`, collect the factors with integral level,
/// and solve `Σ d_i = d` over multisets.
fn enumerate_semisimple(c: &Q) -> Vec<RootSystem> {
    // Classical factors satisfy c_i ≥ ℓ_i − 1.
    let max_rank = c.floor().to_integer().to_u32().unwrap_or(u32::MAX - 1) + 1;
    let types = SimpleType::all_up_to_rank(max_rank.max(8));
    let types: Vec<SimpleType> = types
        .into_iter()
        .filter(|t| t.rank <= max_rank || matches!(t.family, Family::E | Family::F | Family::G))
        .collect();
    let h_max = types.iter().map(|t| t.dual_coxeter()).max().unwrap_or(1);
    // k ≥ 1 gives d ≤ c(1 + h∨).
    let d_hi = (c * q(1 + h_max as i64)).floor().to_integer();
    let d_lo = c.floor().to_integer() + BigInt::one();
    let mut out = Vec::new();
    let mut d = d_lo;
    while d <= d_hi {
        let dq = Q::from_integer(d.clone());
        let gap = &dq - c;
        let d_u = d.to_u64().expect("dimension fits u64");
        let mut candidates: Vec<(u64, Factor)> = Vec::new();
        for t in &types {
            if t.dim() > d_u {
                continue;
            }
            let k = q(t.dual_coxeter() as i64) * c / &gap;
            if k.is_integer() && k.is_positive() {
                let level = k.to_integer().to_u64().expect("level fits u64");
                candidates.push((t.dim(), Factor { ty: *t, level }));
            }
        }
        if !candidates.is_empty() {
            for combo in multisets_with_sum(&candidates, d_u) {
                out.push(RootSystem::semisimple(combo));
            }
        }
        d += 1;
    }
    out
}

/// All multisets over `items` whose weights sum to `target`.
fn multisets_with_sum(items: &[(u64, Factor)], target: u64) -> Vec<Vec<Factor>> {
    let n = items.len();
    let t = target as usize;
    // reach[i][s]: sum s attainable from items[i..].
    let mut reach = vec![vec![false; t + 1]; n + 1];
    reach[n][0] = true;
    for i in (0..n).rev() {
        let w = items[i].0 as usize;
        for s in 0..=t {
            reach[i][s] = reach[i + 1][s] || (s >= w && reach[i][s - w]);
        }
    }
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fn rec(
        items: &[(u64, Factor)],
        reach: &[Vec<bool>],
        i: usize,
        rem: usize,
        stack: &mut Vec<Factor>,
        out: &mut Vec<Vec<Factor>>,
    ) {
        if rem == 0 {
            out.push(stack.clone());
            return;
        }
        if i == items.len() || !reach[i][rem] {
            return;
        }
        let w = items[i].0 as usize;
        // take items[i] j times, then move on
        let mut taken = 0;
        let mut r = rem;
        loop {
            if reach[i + 1][r] {
                rec(items, reach, i + 1, r, stack, out);
            }
            if r < w {
                break;
            }
            r -= w;
            stack.push(items[i].1);
            taken += 1;
        }
        for _ in 0..taken {
            stack.pop();
        }
    }
    rec(items, &reach, 0, t, &mut stack, &mut out);
    out
}

/// Counts multiplicities of each factor, useful for reports.
pub fn factor_counts(rs: &RootSystem) -> BTreeMap<Factor, usize> {
    let mut m = BTreeMap::new();
    for f in rs.factors() {
        *m.entry(*f).or_insert(0) += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::qf;

    fn rs(s: &str) -> RootSystem {
        parse_symbol(s).unwrap()
    }

    #[test]
    fn table_data() {
        let e8 = SimpleType::new(Family::E, 8).unwrap();
        assert_eq!((e8.dim(), e8.dual_coxeter()), (248, 30));
        let b5 = SimpleType::new(Family::B, 5).unwrap();
        assert_eq!((b5.dim(), b5.dual_coxeter()), (55, 9));
        let c5 = SimpleType::new(Family::C, 5).unwrap();
        assert_eq!((c5.dim(), c5.dual_coxeter()), (55, 6));
        let d5 = SimpleType::new(Family::D, 5).unwrap();
        assert_eq!((d5.dim(), d5.dual_coxeter()), (45, 8));
        assert!(SimpleType::new(Family::D, 3).is_err());
        assert!(SimpleType::new(Family::F, 5).is_err());
    }

    #[test]
    fn factor_central_charges() {
        let a1 = SimpleType::a(1);
        assert_eq!(Factor::new(a1, 1).unwrap().central_charge(), q(1));
        let e8 = SimpleType::new(Family::E, 8).unwrap();
        assert_eq!(Factor::new(e8, 1).unwrap().central_charge(), q(8));
        assert_eq!(Factor::new(a1, 64).unwrap().central_charge(), qf(3 * 64, 66));
        assert_eq!(Factor::new(a1, 64).unwrap().central_charge(), qf(32, 11));
        assert!(Factor::new(a1, 0).is_err());
    }

    #[test]
    fn balance_examples() {
        assert!(rs("A1,1^32").is_balanced().unwrap());
        assert!(rs("A1,1^32").is_balanced_at(&q(32)).unwrap());
        assert!(rs("O^32").is_balanced().unwrap());
        // A_{1,1}^{31} is balanced at its own central charge 31, but not at 32.
        assert!(rs("A1,1^31").is_balanced().unwrap());
        assert!(!rs("A1,1^31").is_balanced_at(&q(32)).unwrap());
        assert!(!rs("A1,1 A2,1").is_balanced().unwrap());
        assert!(RootSystem::new(0, vec![]).is_balanced().is_err());
    }

    #[test]
    fn parse_examples() {
        let r = rs("A1,2^12 A3,2^4");
        assert_eq!(r.abelian_rank, 0);
        assert_eq!(r.factors().len(), 16);
        assert_eq!(r.grouped(), vec![
            (Factor { ty: SimpleType::a(1), level: 2 }, 12),
            (Factor { ty: SimpleType::a(3), level: 2 }, 4)
        ]);
        let r = rs("O^4 A5,1^4 D4,1^2");
        assert_eq!(r.abelian_rank, 4);
        assert_eq!(r.symbol(), "O^4 A5,1^4 D4,1^2");
        assert_eq!(rs("B1,3").symbol(), "A1,3");
        assert_eq!(rs("D2,1").symbol(), "A1,1^2");
        assert_eq!(rs("D3,2 C2,1").symbol(), "A3,2 B2,1");
        // canonical order is independent of input order
        assert_eq!(rs("D4,1 A5,1"), rs("A5,1 D4,1"));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_symbol("A1,0"), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(parse_symbol("A1,1^0"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_symbol("H1,1"), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse_symbol("A1"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_symbol("E9,1"), Err(Error::InvalidRank { .. })));
        assert!(matches!(parse_symbol("A1,1 O^3"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_symbol(""), Err(Error::Syntax { .. })));
        assert!(matches!(parse_symbol("A1,1A2,1"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn pure_power() {
        assert!(rs("A1,4^16").is_pure_power());
        assert!(!rs("D16,1 E8,1^2").is_pure_power());
        assert!(rs("O^5").is_pure_power());
    }

    #[test]
    fn small_enumerations() {
        let one = enumerate_brs(&q(1), 0).unwrap();
        assert_eq!(one, vec![rs("A1,1")]);
        assert_eq!(enumerate_brs(&q(8), 0).unwrap().len(), 16);
        assert_eq!(enumerate_brs(&q(9), 1).unwrap().len(), 16);
        assert_eq!(enumerate_brs(&q(3), 3).unwrap(), vec![rs("O^3")]);
        assert!(enumerate_brs(&q(2), 3).is_err());
        assert!(enumerate_brs(&q(0), 0).is_err());
    }

    #[test]
    fn rational_central_charge() {
        // A_{1,2}: c = 3/2, balanced on its own.
        let got = enumerate_brs(&qf(3, 2), 0).unwrap();
        assert!(got.contains(&rs("A1,2")));
        for r in &got {
            assert!(r.is_balanced_at(&qf(3, 2)).unwrap());
        }
    }
}
