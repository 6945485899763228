//! Root systems of DGM orbifolds `V_L^+ ⊕ (V_L^T)^+` and realization lookup.
//!
//! The lift of `-1` on an even lattice `L` fixes a subalgebra of each simple
//! component of the root system of `L`; [`orbifold_image`] applies that map
//! factor by factor and [`orbifold_preimages`] inverts it.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::q;
use crate::error::{Error, Result};
use crate::rootsys::{parse_symbol, Factor, Family, RootSystem, SimpleType};

/// The root system of the orbifold, split into an abelian rank and simple
/// factors (with their levels).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbifoldImage {
    pub abelian_rank_contribution: u32,
    pub factors: Vec<Factor>,
}

impl OrbifoldImage {
    pub fn root_system(&self) -> RootSystem {
        RootSystem::new(self.abelian_rank_contribution, self.factors.clone())
    }
}

fn ade(ty: SimpleType) -> Result<()> {
    match ty.family {
        Family::A | Family::D | Family::E => Ok(()),
        _ => Err(Error::InvalidArgument(format!("{ty} is not simply laced"))),
    }
}

fn factors_of(family: Family, rank: u32, level: u64, copies: usize) -> Result<Vec<Factor>> {
    let mut out = Vec::new();
    for _ in 0..copies {
        for ty in SimpleType::canonicalize(family, rank)? {
            out.push(Factor::new(ty, level)?);
        }
    }
    Ok(out)
}

/// Image of one simple component: abelian rank and fixed-point factors.
pub fn type_image(ty: SimpleType) -> Result<(u32, Vec<Factor>)> {
    ade(ty)?;
    use Family::*;
    let n = ty.rank;
    Ok(match (ty.family, n) {
        (A, 1) => (1, Vec::new()),
        (A, 2) => (0, factors_of(A, 1, 4, 1)?),
        (A, _) if n % 2 == 0 => (0, factors_of(B, n / 2, 2, 1)?),
        (A, _) => (0, factors_of(D, n.div_ceil(2), 2, 1)?),
        (D, _) if n % 2 == 0 => (0, factors_of(D, n / 2, 1, 2)?),
        (D, _) => (0, factors_of(B, n / 2, 1, 2)?),
        (E, 6) => (0, factors_of(C, 4, 1, 1)?),
        (E, 7) => (0, factors_of(A, 7, 1, 1)?),
        (E, _) => (0, factors_of(D, 8, 1, 1)?),
        _ => unreachable!(),
    })
}

/// Root system of the orbifold of a lattice theory with root system `lattice_rs`.
/// The abelian part of the lattice is negated and does not survive.
pub fn orbifold_image(lattice_rs: &RootSystem) -> Result<OrbifoldImage> {
    let mut image = OrbifoldImage { abelian_rank_contribution: 0, factors: Vec::new() };
    for f in lattice_rs.factors() {
        if f.level != 1 {
            return Err(Error::InvalidArgument(format!("{f} is not of level 1")));
        }
        let (a, fs) = type_image(f.ty)?;
        image.abelian_rank_contribution += a;
        image.factors.extend(fs);
    }
    image.factors.sort();
    Ok(image)
}

/// Rank of the fixed-point subalgebra of a simply laced simple Lie algebra.
pub fn fixed_rank(ty: SimpleType) -> Result<u32> {
    ade(ty)?;
    Ok(match ty.family {
        Family::A => ty.rank.div_ceil(2),
        Family::D => 2 * (ty.rank / 2),
        _ => match ty.rank {
            6 => 4,
            7 => 7,
            _ => 8,
        },
    })
}

/// A source type and the factors it produces.
struct Rule {
    source: SimpleType,
    produces: Vec<Factor>,
}

fn rules_for(target: &Factor) -> Vec<Rule> {
    use Family::*;
    let mut sources: Vec<SimpleType> = Vec::new();
    let r = target.ty.rank;
    let push = |v: &mut Vec<SimpleType>, f, n| {
        if let Ok(t) = SimpleType::new(f, n) {
            v.push(t);
        }
    };
    match (target.ty.family, target.level) {
        (A, 4) if r == 1 => push(&mut sources, A, 2),
        (A, 2) if r == 1 => push(&mut sources, A, 3),
        (A, 2) if r == 3 => push(&mut sources, A, 5),
        (A, 1) if r == 1 => push(&mut sources, D, 4),
        (A, 1) if r == 3 => push(&mut sources, D, 6),
        (A, 1) if r == 7 => push(&mut sources, E, 7),
        (B, 2) => push(&mut sources, A, 2 * r),
        (B, 1) => push(&mut sources, D, 2 * r + 1),
        (C, 1) if r == 4 => push(&mut sources, E, 6),
        (D, 2) => push(&mut sources, A, 2 * r - 1),
        (D, 1) => {
            push(&mut sources, D, 2 * r);
            if r == 8 {
                push(&mut sources, E, 8);
            }
        }
        _ => {}
    }
    sources
        .into_iter()
        .filter_map(|s| type_image(s).ok().map(|(_, produces)| Rule { source: s, produces }))
        .collect()
}

/// Removes `part` from the sorted multiset `pool`, or returns `None` if it is
/// not contained.
fn remove_multiset(pool: &[Factor], part: &[Factor]) -> Option<Vec<Factor>> {
    let mut rest = pool.to_vec();
    for f in part {
        let i = rest.iter().position(|g| g == f)?;
        rest.remove(i);
    }
    Some(rest)
}

/// All level-1 simply laced root systems whose orbifold image is `voa_rs`.
pub fn orbifold_preimages(voa_rs: &RootSystem) -> BTreeSet<RootSystem> {
    fn go(pool: &[Factor], acc: &mut Vec<Factor>, out: &mut BTreeSet<RootSystem>, a1: u32) {
        let Some(first) = pool.first() else {
            let mut fs = acc.clone();
            fs.extend((0..a1).map(|_| Factor { ty: SimpleType::a(1), level: 1 }));
            out.insert(RootSystem::semisimple(fs));
            return;
        };
        for rule in rules_for(first) {
            if let Some(rest) = remove_multiset(pool, &rule.produces) {
                acc.push(Factor { ty: rule.source, level: 1 });
                go(&rest, acc, out, a1);
                acc.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    go(voa_rs.factors(), &mut Vec::new(), &mut out, voa_rs.abelian_rank);
    out
}

/// Root systems of even lattices of one rank, read from a catalog file.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LatticeCatalog {
    pub rank: u32,
    pub entries: BTreeSet<RootSystem>,
}

impl LatticeCatalog {
    /// The shipped rank-32 catalog. It lists the lattices needed for the
    /// realizations at `c = 32` and is not a full classification.
    pub fn rank32() -> Self {
        include_str!("../data/lattices_rank32.txt").parse().expect("shipped catalog parses")
    }

    pub fn contains(&self, rs: &RootSystem) -> bool {
        self.entries.contains(rs)
    }

    /// Entries whose root system has full rank.
    pub fn complete(&self) -> impl Iterator<Item = &RootSystem> {
        self.entries.iter().filter(|rs| rs.lie_rank() == self.rank as u64)
    }
}

impl FromStr for LatticeCatalog {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut rank = None;
        let mut entries = BTreeSet::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: String| Error::Malformed(format!("line {}: {msg}", no + 1));
            if let Some(r) = line.strip_prefix("rank=") {
                rank = Some(r.trim().parse::<u32>().map_err(|e| bad(e.to_string()))?);
                continue;
            }
            let Some(rank) = rank else {
                return Err(bad("entry before the rank header".into()));
            };
            let rs = parse_symbol(line).map_err(|e| bad(e.to_string()))?;
            if rs.abelian_rank != 0 {
                return Err(bad(format!("{rs} has an abelian part")));
            }
            for f in rs.factors() {
                if f.level != 1 || ade(f.ty).is_err() {
                    return Err(bad(format!("{f} is not a simply laced level-1 factor")));
                }
            }
            if rs.lie_rank() > rank as u64 {
                return Err(bad(format!("{rs} exceeds rank {rank}")));
            }
            entries.insert(rs);
        }
        let rank = rank.ok_or_else(|| Error::Malformed("missing rank header".into()))?;
        Ok(LatticeCatalog { rank, entries })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Realization {
    Lattice,
    Dgm,
    Open,
    NotApplicable,
}

impl Realization {
    pub fn name(self) -> &'static str {
        match self {
            Realization::Lattice => "lat",
            Realization::Dgm => "dgm",
            Realization::Open => "open",
            Realization::NotApplicable => "none",
        }
    }
}

impl fmt::Display for Realization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Whether a balanced root system is known to occur for a lattice theory or
/// a DGM orbifold. `Open` without a catalog of matching rank.
pub fn classify_realization(rs: &RootSystem, catalog: Option<&LatticeCatalog>) -> Realization {
    let c = rs.central_charge();
    if rs.is_empty() || !matches!(rs.is_balanced(), Ok(true)) || (c != q(32) && c != q(40)) {
        return Realization::NotApplicable;
    }
    if rs.factors().is_empty() {
        return Realization::Lattice;
    }
    let Some(cat) = catalog.filter(|cat| q(cat.rank as i64) == c) else {
        return Realization::Open;
    };
    let level_one_ade = rs.factors().iter().all(|f| f.level == 1 && ade(f.ty).is_ok());
    if level_one_ade && rs.lie_rank() == cat.rank as u64 && cat.contains(rs) {
        return Realization::Lattice;
    }
    if rs.abelian_rank == 0
        && orbifold_preimages(rs).iter().any(|p| p.lie_rank() == cat.rank as u64 && cat.contains(p))
    {
        return Realization::Dgm;
    }
    Realization::Open
}
