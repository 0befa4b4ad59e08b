//! Questions about the whole scenario family: weak feasibility and
//! optimality, strong feasibility, the dual program and the optimal value
//! range.

mod dual;
mod feasibility;
mod optimality;
mod range;

pub use dual::dualize;
pub use feasibility::{is_weakly_feasible, strong_feasibility, StrongFeasibility};
pub use optimality::{
    finite_value_backmap, is_weakly_optimal_fixed, weak_optimality_search, OptimalityCertificate,
    SearchResult,
};
pub use range::{optimal_value_range, Method, ValueRange, Witness};

use alloc::borrow::Cow;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::interval::{endpoint_point, Interval};
use crate::lp::{LpOutcome, PointLp, Relation, Sense, Sign};
use crate::model::{Assignment, CoefId, Entry, IlpProgram};
use crate::rational::{ExtRational, Rational};
use crate::transforms::flip_objective;

/// Default bound on enumerated scenarios.
pub const DEFAULT_CAP: u64 = 1 << 12;

pub(crate) fn min_form(p: &IlpProgram) -> Cow<'_, IlpProgram> {
    match p.sense() {
        Sense::Min => Cow::Borrowed(p),
        Sense::Max => Cow::Owned(flip_objective(p).0),
    }
}

/// Optimal value of a minimization outcome, with infeasible as `+inf` and
/// unbounded as `-inf`.
pub(crate) fn min_value(outcome: &LpOutcome) -> ExtRational {
    match outcome {
        LpOutcome::Optimal { value, .. } => ExtRational::Finite(value.clone()),
        LpOutcome::Infeasible { .. } => ExtRational::PosInf,
        LpOutcome::Unbounded { .. } => ExtRational::NegInf,
    }
}

/// Stores `v` as the effective value of `e`.
pub(crate) fn set_effective(a: &mut Assignment, e: &Entry, v: Rational) {
    a.insert(e.id, if e.negated { -v } else { v });
}

pub(crate) fn without_objective(lp: &PointLp) -> PointLp {
    PointLp {
        objective: vec![Rational::zero(); lp.num_vars()],
        ..lp.clone()
    }
}

/// All endpoint assignments of the given coefficients (deduplicated, in
/// order), each as a list of `(id, value)` pairs.
pub(crate) fn endpoint_choices(
    p: &IlpProgram,
    ids: &[CoefId],
    cap: u64,
) -> Result<Vec<Vec<(CoefId, Rational)>>> {
    let mut ids: Vec<CoefId> = ids.to_vec();
    ids.sort();
    ids.dedup();
    let intervals: Vec<Interval> = ids.iter().map(|id| p.table()[id].clone()).collect();
    let k = intervals.iter().filter(|iv| !iv.is_degenerate()).count();
    if k >= 64 || (1u64 << k) > cap {
        return Err(Error::CapExceeded { nondegenerate: k, cap });
    }
    Ok((0..1u64 << k)
        .map(|code| ids.iter().copied().zip(endpoint_point(&intervals, code)).collect())
        .collect())
}

/// Sign forced on variable `j` by a crisp row `a x_j <= 0`:
/// `Some(true)` for `x_j <= 0`, `Some(false)` for `x_j >= 0`.
fn forced_sign(p: &IlpProgram, j: usize) -> Option<bool> {
    for (i, row) in p.rows().iter().enumerate() {
        if row.rel != Relation::Le {
            continue;
        }
        let rhs = p.interval(&row.rhs);
        if !rhs.is_degenerate() || !rhs.lo().is_zero() {
            continue;
        }
        let coeffs = p.row_coeffs(i);
        if coeffs.iter().any(|iv| !iv.is_degenerate()) {
            continue;
        }
        let mut nonzero = coeffs.iter().enumerate().filter(|(_, iv)| !iv.lo().is_zero());
        if let (Some((k, iv)), None) = (nonzero.next(), nonzero.next()) {
            if k == j {
                return Some(iv.lo().is_positive());
            }
        }
    }
    None
}

/// Sign patterns for the variables, `true` meaning `x_j <= 0`. Only free
/// variables vary, in lexicographic order with `x_j >= 0` first. A free
/// variable pinned to one side by a crisp sign row keeps only that side.
pub(crate) fn orthants(p: &IlpProgram) -> Vec<Vec<bool>> {
    let mut out = vec![vec![false; p.num_vars()]];
    for j in 0..p.num_vars() {
        if p.vars()[j].sign != Sign::Free {
            continue;
        }
        let sides: &[bool] = match forced_sign(p, j) {
            Some(true) => &[true],
            Some(false) => &[false],
            None => &[false, true],
        };
        out = out
            .into_iter()
            .flat_map(|s| {
                sides.iter().map(move |&neg| {
                    let mut t = s.clone();
                    t[j] = neg;
                    t
                })
            })
            .collect();
    }
    out
}

/// `x = D_s z` for an orthant `s`.
pub(crate) fn orthant_point(neg: &[bool], z: &[Rational]) -> Vec<Rational> {
    neg.iter().zip(z).map(|(&n, v)| if n { -v } else { v.clone() }).collect()
}

/// Dimension and sign checks shared by the point queries.
pub(crate) fn check_point(p: &IlpProgram, x: &[Rational]) -> Result<bool> {
    if x.len() != p.num_vars() {
        return Err(Error::DimensionMismatch {
            what: "point",
            expected: p.num_vars(),
            found: x.len(),
        });
    }
    Ok(p
        .vars()
        .iter()
        .zip(x)
        .all(|(v, xj)| v.sign == Sign::Free || !xj.is_negative()))
}
