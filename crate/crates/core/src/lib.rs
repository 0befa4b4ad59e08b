//! Interval linear programming in exact rational arithmetic.
//!
//! An interval program is a family of point LPs, one per choice of
//! coefficients inside their intervals. This crate computes the range of
//! optimal values over that family, applies the standard LP rewrites while
//! tracking which coefficients they duplicate, and decides weak feasibility,
//! weak optimality and strong feasibility.
//!
//! `no_std` with `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analysis;
pub mod error;
pub mod interval;
pub mod lp;
pub mod model;
pub mod rational;
pub mod transforms;

pub use error::{Error, Result};
pub use interval::{interval_dot_range, Interval, IntervalMatrix, IntervalVector};
pub use lp::{certify, dual_of, solve, LpOutcome, PointLp, Relation, Sense, Sign};
pub use model::{Assignment, CoefId, Entry, FormClass, FormKind, IlpProgram, Row, RowSpec, Scenario, Var};
pub use rational::{ExtRational, Rational};
