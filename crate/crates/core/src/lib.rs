//! Balanced root systems for holomorphic vertex operator algebras.
//!
//! The crate is organised bottom-up:
//!
//! * [`rootsys`]: extended root systems `O^f Φ_{1,k_1} … Φ_{n,k_n}`, the balance
//!   predicate and exhaustive enumeration of `BRS(c, f)`.
//! * [`liealg`]: finite-dimensional simple Lie algebra combinatorics (roots,
//!   Weyl dimensions, Freudenthal multiplicities, weight moments).
//! * [`affine`]: integrable highest-weight modules of affine algebras, their
//!   conformal weights and graded dimensions.
//! * [`qseries`]: exact q-series, modular forms and the moment identities
//!   satisfied by `V_2` of a holomorphic VOA.
//! * [`feasibility`]: partition existence, integral solvability, exact simplex
//!   and branch-and-bound over the non-negative integers.
//! * [`elimination`]: the dimension, Jacobi-form and character tests.
//! * [`dgm`]: the orbifold root-system map and realization classification.
//! * [`appendix`]: the reference table of all 449 systems at `c = 32`.

pub mod affine;
pub mod appendix;
pub mod arith;
pub mod dgm;
pub mod elimination;
pub mod error;
pub mod feasibility;
pub mod liealg;
pub mod qseries;
pub mod rootsys;

pub use error::{Error, Result};
pub use rootsys::{Factor, Family, RootSystem, SimpleType};
