//! The reference table of the 449 balanced semisimple root systems at `c = 32`
//! with the published test outcomes and realizations.

use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::arith::q;
use crate::dgm::Realization;
use crate::elimination::Stage;
use crate::error::{Error, Result};
use crate::rootsys::{parse_symbol, RootSystem};

/// Published outcome of a row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Listed {
    #[serde(rename = "X_dim")]
    RuledOutDim,
    #[serde(rename = "X_jac")]
    RuledOutJac,
    #[serde(rename = "X_char")]
    RuledOutChar,
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "unknown")]
    Unknown,
}

impl Listed {
    pub fn ruled_out_by(self) -> Option<Stage> {
        match self {
            Listed::RuledOutDim => Some(Stage::Dim),
            Listed::RuledOutJac => Some(Stage::Jac),
            Listed::RuledOutChar => Some(Stage::Char),
            Listed::Pass | Listed::Unknown => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Listed::RuledOutDim => "X_dim",
            Listed::RuledOutJac => "X_jac",
            Listed::RuledOutChar => "X_char",
            Listed::Pass => "pass",
            Listed::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppendixRow {
    pub index: u32,
    pub dim_v1: u64,
    pub symbol: String,
    pub verdict: Listed,
    #[serde(with = "realization_column")]
    pub realization: Realization,
}

mod realization_column {
    use super::Realization;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Realization, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(r.name())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Realization, D::Error> {
        let s = String::deserialize(d)?;
        Ok(match s.as_str() {
            "lat" => Realization::Lattice,
            "dgm" => Realization::Dgm,
            "open" => Realization::Open,
            "none" => Realization::NotApplicable,
            other => return Err(serde::de::Error::custom(format!("unknown realization {other:?}"))),
        })
    }
}

impl AppendixRow {
    pub fn root_system(&self) -> Result<RootSystem> {
        parse_symbol(&self.symbol)
    }
}

/// Reads rows from CSV with header `index,dim_v1,symbol,verdict,realization`.
pub fn read_rows<R: Read>(reader: R) -> Result<Vec<AppendixRow>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let header = rdr.headers().map_err(|e| Error::Malformed(e.to_string()))?.clone();
    let want = ["index", "dim_v1", "symbol", "verdict", "realization"];
    if header.iter().ne(want) {
        return Err(Error::Malformed(format!("unexpected header {:?}", header.iter().collect::<Vec<_>>())));
    }
    rdr.deserialize().map(|r| r.map_err(|e| Error::Malformed(e.to_string()))).collect()
}

/// The shipped table for `c = 32`.
pub fn c32_rows() -> Vec<AppendixRow> {
    read_rows(include_str!("../data/appendix_c32.csv").as_bytes()).expect("shipped fixture parses")
}

/// Consistency of a full `c = 32` table: 449 consecutive rows, every symbol
/// balanced with the stated `dim V_1`, realizations only on passing rows and
/// 19 passing rows.
pub fn check_c32(rows: &[AppendixRow]) -> Result<()> {
    let bad = |i: u32, msg: String| Err(Error::Malformed(format!("row {i}: {msg}")));
    if rows.len() != 449 {
        return Err(Error::Malformed(format!("{} rows instead of 449", rows.len())));
    }
    for (k, row) in rows.iter().enumerate() {
        if row.index as usize != k + 1 {
            return bad(row.index, format!("expected index {}", k + 1));
        }
        let rs = row.root_system()?;
        if rs.dim() != row.dim_v1 {
            return bad(row.index, format!("dim {} but the symbol gives {}", row.dim_v1, rs.dim()));
        }
        if !rs.is_semisimple() || !rs.is_balanced_at(&q(32))? {
            return bad(row.index, format!("{} is not balanced at c = 32", row.symbol));
        }
        if row.realization != Realization::NotApplicable && row.verdict != Listed::Pass {
            return bad(row.index, "realization on a row that did not pass".into());
        }
    }
    let pass = rows.iter().filter(|r| r.verdict == Listed::Pass).count();
    if pass != 19 {
        return Err(Error::Malformed(format!("{pass} passing rows instead of 19")));
    }
    Ok(())
}

/// Rows from a table by index.
pub fn row(rows: &[AppendixRow], index: u32) -> Option<&AppendixRow> {
    rows.iter().find(|r| r.index == index)
}
