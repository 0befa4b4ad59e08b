use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::{check_point, is_weakly_feasible, set_effective};
use crate::error::{Error, Result};
use crate::lp::{certify, solve, LpOutcome, PointLp, Relation, Sense, Sign};
use crate::model::{IlpProgram, Scenario};
use crate::rational::Rational;
use crate::transforms::{TransformKind, TransformRecord};

/// A scenario of a fixed-matrix program in which a given point is optimal,
/// with the dual vector proving it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptimalityCertificate {
    pub scenario: Scenario,
    /// Dual vector in the sign convention of the program's own sense.
    pub dual: Vec<Rational>,
    /// `<=` rows allowed a nonzero dual because `x` makes them tight.
    pub tight_rows: Vec<usize>,
}

impl OptimalityCertificate {
    /// Re-checks feasibility, dual feasibility, equal objective values and
    /// complementary slackness in exact arithmetic.
    pub fn verify(&self, x: &[Rational]) -> bool {
        let lp = &self.scenario.lp;
        let outcome = LpOutcome::Optimal {
            value: lp.objective_value(x),
            primal: x.to_vec(),
            dual: self.dual.clone(),
        };
        certify(lp, &outcome).is_ok()
    }
}

/// Decides whether `x` is optimal in some scenario of a fixed-matrix program.
///
/// With `A` fixed, `x` pins down the activity `A x`. The right-hand side is
/// chosen row by row: an `=` row or a `<=` row whose activity lies in its
/// interval takes `b_i = (A x)_i`, any other `<=` row takes its upper end and
/// a zero dual. What remains is one feasibility LP in `(c, y)`: dual
/// feasibility with `c` in its box, equality on columns where `x_j > 0` or
/// `x_j` is free.
pub fn is_weakly_optimal_fixed(p: &IlpProgram, x: &[Rational]) -> Result<Option<OptimalityCertificate>> {
    if !p.is_fixed_matrix() {
        return Err(Error::NotFixedMatrix);
    }
    check_point(p, x)?;
    if !is_weakly_feasible(p, x)? {
        return Ok(None);
    }
    let n = p.num_vars();
    let m = p.num_rows();
    let a: Vec<Vec<Rational>> = (0..m)
        .map(|i| p.row_coeffs(i).iter().map(|iv| iv.lo().clone()).collect())
        .collect();
    let activity: Vec<Rational> = a.iter().map(|row| crate::lp::dot(row, x)).collect();

    let mut b = Vec::with_capacity(m);
    let mut tight_rows = Vec::new();
    // Dual variables that may be nonzero, as row indices.
    let mut active = Vec::new();
    for (i, row) in p.rows().iter().enumerate() {
        let rhs = p.interval(&row.rhs);
        if row.rel == Relation::Eq || rhs.contains(&activity[i]) {
            b.push(activity[i].clone());
            active.push(i);
            if row.rel == Relation::Le {
                tight_rows.push(i);
            }
        } else {
            b.push(rhs.hi().clone());
        }
    }

    // Work with the minimization form: c ranges over the box of +-c.
    let flip = p.sense() == Sense::Max;
    let c_box: Vec<_> = p
        .objective()
        .iter()
        .map(|iv| if flip { -iv } else { iv.clone() })
        .collect();

    // Variables: c_0..c_{n-1}, then one y per active row.
    let width = n + active.len();
    let mut matrix = Vec::new();
    let mut relations = Vec::new();
    let mut rhs = Vec::new();
    let unit = |k: usize, rel: Relation, v: Rational| {
        let mut row = vec![Rational::zero(); width];
        row[k] = Rational::from_integer(1.into());
        (row, rel, v)
    };
    let mut bounds = Vec::new();
    for (j, iv) in c_box.iter().enumerate() {
        bounds.push(unit(j, Relation::Ge, iv.lo().clone()));
        bounds.push(unit(j, Relation::Le, iv.hi().clone()));
    }
    for (k, &i) in active.iter().enumerate() {
        if p.rows()[i].rel == Relation::Le {
            bounds.push(unit(n + k, Relation::Le, Rational::zero()));
        }
    }
    for (row, rel, v) in bounds {
        matrix.push(row);
        relations.push(rel);
        rhs.push(v);
    }
    for j in 0..n {
        let mut row = vec![Rational::zero(); width];
        row[j] = Rational::from_integer((-1).into());
        for (k, &i) in active.iter().enumerate() {
            row[n + k] = a[i][j].clone();
        }
        let tight = p.vars()[j].sign == Sign::Free || !x[j].is_zero();
        matrix.push(row);
        relations.push(if tight { Relation::Eq } else { Relation::Le });
        rhs.push(Rational::zero());
    }
    let lp = PointLp {
        sense: Sense::Min,
        objective: vec![Rational::zero(); width],
        matrix,
        relations,
        rhs,
        signs: vec![Sign::Free; width],
    };
    let LpOutcome::Optimal { primal, .. } = solve(&lp) else {
        return Ok(None);
    };

    let mut c: Vec<Rational> = primal[..n].to_vec();
    let mut y = vec![Rational::zero(); m];
    for (k, &i) in active.iter().enumerate() {
        y[i] = primal[n + k].clone();
    }
    if flip {
        c.iter_mut().for_each(|v| *v = -&*v);
        y.iter_mut().for_each(|v| *v = -&*v);
    }
    let mut assignment = p.assignment_with(|iv| iv.lo().clone());
    for (e, v) in p.objective_entries().iter().zip(c) {
        set_effective(&mut assignment, e, v);
    }
    for (row, v) in p.rows().iter().zip(b) {
        set_effective(&mut assignment, &row.rhs, v);
    }
    let scenario = p.scenario(&assignment)?;
    let cert = OptimalityCertificate {
        scenario,
        dual: y,
        tight_rows,
    };
    if !cert.verify(x) {
        return Err(Error::Precondition(
            "objective and right-hand side share coefficients".into(),
        ));
    }
    Ok(Some(cert))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchResult {
    /// `x` is feasible and optimal in this scenario.
    Found(Scenario),
    /// No endpoint scenario among the first `searched` certifies `x`. This
    /// does not mean `x` is not weakly optimal.
    Unknown { searched: u64 },
}

/// Looks for an endpoint scenario in which `x` is optimal, visiting at most
/// `budget` scenarios in enumeration order.
pub fn weak_optimality_search(p: &IlpProgram, x: &[Rational], budget: u64) -> SearchResult {
    if x.len() != p.num_vars() {
        return SearchResult::Unknown { searched: 0 };
    }
    let total = p.endpoint_count().unwrap_or(u64::MAX).min(budget);
    for code in 0..total {
        let s = p.endpoint_scenario(code);
        if !s.lp.is_feasible(x) {
            continue;
        }
        if let LpOutcome::Optimal { value, .. } = solve(&s.lp) {
            if value == s.lp.objective_value(x) {
                return SearchResult::Found(s);
            }
        }
    }
    SearchResult::Unknown { searched: total }
}

/// Finds a scenario of `original` with the same finite optimal value as
/// `scenario` of `transformed`, in which `x` is optimal.
///
/// For a split, the original right-hand side becomes `A x`. For a
/// nonnegative substitution the duplicated objective coefficients are
/// replaced by `A^T y` for an optimal dual `y`. Other transformations do not
/// duplicate coefficients and map scenarios one to one.
pub fn finite_value_backmap(
    original: &IlpProgram,
    transformed: &IlpProgram,
    record: &TransformRecord,
    scenario: &Scenario,
    x: &[Rational],
) -> Result<Scenario> {
    if !original.is_fixed_matrix() {
        return Err(Error::NotFixedMatrix);
    }
    let scenario = transformed.scenario(&scenario.assignment)?;
    let outcome = solve(&scenario.lp);
    let (value, dual) = match &outcome {
        LpOutcome::Optimal { value, dual, .. } => (value, dual),
        _ => {
            return Err(Error::Precondition(
                "transformed scenario has no finite optimal value".into(),
            ))
        }
    };
    if !scenario.lp.is_feasible(x) || &scenario.lp.objective_value(x) != value {
        return Err(Error::Precondition("point is not optimal in the transformed scenario".into()));
    }

    let mut assignment = original.assignment_with(|iv| iv.lo().clone());
    let duplicated: Vec<_> = record.links.iter().map(|l| l.source).collect();
    for id in original.table().keys() {
        if let Some(v) = scenario.assignment.get(id) {
            if !duplicated.contains(id) {
                assignment.insert(*id, v.clone());
            }
        }
    }
    let x_orig = record.backward(x);
    match record.kind {
        TransformKind::SplitEq => {
            for &i in &record.rows {
                let row = &original.rows()[i];
                let activity: Rational = original
                    .row_coeffs(i)
                    .iter()
                    .zip(&x_orig)
                    .map(|(iv, xj)| iv.lo() * xj)
                    .sum();
                set_effective(&mut assignment, &row.rhs, activity);
            }
        }
        TransformKind::NonnegSub => {
            let aty = scenario.lp.transpose_times(dual);
            for &j in &record.columns {
                set_effective(&mut assignment, &original.objective_entries()[j], aty[j].clone());
            }
        }
        TransformKind::Flip | TransformKind::Slack => {}
    }
    let back = original.scenario(&assignment)?;
    match solve(&back.lp) {
        LpOutcome::Optimal { value: v, .. } if &v == value && back.lp.is_feasible(&x_orig) => Ok(back),
        other => Err(Error::Precondition(format!(
            "back-mapped scenario does not reproduce value {value}: {other:?}"
        ))),
    }
}
