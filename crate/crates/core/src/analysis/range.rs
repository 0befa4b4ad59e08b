//! The range `[f_lo, f_hi]` of optimal values over all scenarios.
//!
//! Two routes compute it.
//!
//! `Enumerate` solves every endpoint scenario and then refines the result.
//! Endpoints alone are not enough once an `=` row has interval data:
//! `min x1 + x2, x1 - x2 = [-1, 1], x >= 0` has optimal values in `[0, 1]`,
//! yet both endpoint scenarios give `1`. The refinement minimizes over the
//! weakly feasible set for every endpoint objective and sign orthant, turns
//! each minimizer back into a concrete scenario and solves that scenario. The
//! upper bound is refined the same way on the dual program. Every reported
//! finite bound therefore comes with a scenario that attains it, and every
//! infinite bound with an infeasible scenario, an unbounded scenario or a
//! ray in a weakly feasible set.
//!
//! `Formula` evaluates the closed forms
//! `f_lo = inf { c_c^T x - c_d^T |x| : x weakly feasible }` and
//! `f_hi = sup { b_c^T y + b_d^T |y| : y weakly feasible for the dual }`
//! with one LP per sign orthant, the latter only once every scenario is known
//! to be feasible.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use super::{
    dualize, endpoint_choices, min_form, min_value, orthant_point, orthants, set_effective,
    strong_feasibility, StrongFeasibility,
};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::lp::{solve, LpOutcome, PointLp, Relation, Sense, Sign};
use crate::model::{Assignment, IlpProgram, Row, Scenario};
use crate::rational::{ExtRational, Rational};
use crate::transforms::flip_objective;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Enumerate,
    Formula,
    /// Both routes; their bounds must agree exactly.
    Both,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A scenario whose outcome attains the bound: optimal with that value,
    /// infeasible for `+inf` or unbounded for `-inf`.
    Scenario { scenario: Scenario, outcome: LpOutcome },
    /// An infinite bound with no single scenario attaining it. Every point
    /// `point + t * direction`, `t >= 0`, is weakly feasible (for the program
    /// itself on the lower bound, for its dual on the upper bound) and the
    /// objective runs off to infinity along it.
    Ray {
        point: Vec<Rational>,
        direction: Vec<Rational>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueRange {
    pub lower: ExtRational,
    pub upper: ExtRational,
    pub lower_witness: Option<Witness>,
    pub upper_witness: Option<Witness>,
}

/// Running minimum or maximum; on ties the first witness stays.
struct Bound {
    value: ExtRational,
    witness: Option<Witness>,
    maximize: bool,
}

impl Bound {
    fn new(maximize: bool) -> Self {
        Bound {
            value: if maximize {
                ExtRational::NegInf
            } else {
                ExtRational::PosInf
            },
            witness: None,
            maximize,
        }
    }

    fn offer(&mut self, v: ExtRational, witness: impl FnOnce() -> Witness) {
        let better = if self.maximize {
            v > self.value
        } else {
            v < self.value
        };
        if better || self.witness.is_none() && v == self.value {
            self.value = v;
            self.witness = Some(witness());
        }
    }

    fn offer_scenario(&mut self, scenario: Scenario) {
        let outcome = solve(&scenario.lp);
        self.offer(min_value(&outcome), || Witness::Scenario { scenario, outcome });
    }
}

/// Optimal value range of `p` by the chosen method. `cap` bounds every
/// enumeration of endpoint combinations.
///
/// Shared coefficients are accepted only as mirrored `<=` pairs
/// `a x <= b`, `-a x <= -b` over the same ids, which read as `a x = b`.
pub fn optimal_value_range(p: &IlpProgram, method: Method, cap: u64) -> Result<ValueRange> {
    let merged;
    let base = if p.shares_coefficients() {
        merged = merge_mirrored_rows(p)?;
        &merged
    } else {
        p
    };
    let q = min_form(base);
    let range = match method {
        Method::Enumerate => enumerate(&q, cap)?,
        Method::Formula => formula(&q, cap)?,
        Method::Both => {
            let e = enumerate(&q, cap)?;
            let f = formula(&q, cap)?;
            if (&e.lower, &e.upper) != (&f.lower, &f.upper) {
                let swap = |r: &ValueRange| match p.sense() {
                    Sense::Min => (r.lower.clone(), r.upper.clone()),
                    Sense::Max => (-r.upper.clone(), -r.lower.clone()),
                };
                return Err(Error::RangeDiscrepancy {
                    enumerated: swap(&e),
                    formula: swap(&f),
                });
            }
            e
        }
    };
    if p.sense() == Sense::Min && !p.shares_coefficients() {
        return Ok(range);
    }
    // `q` uses the same coefficient ids as `p`, so its witnesses carry over
    // through their assignments.
    let back = |w: Option<Witness>| -> Result<Option<Witness>> {
        Ok(match w {
            Some(Witness::Scenario { scenario, .. }) => {
                let scenario = p.scenario(&scenario.assignment)?;
                let outcome = solve(&scenario.lp);
                Some(Witness::Scenario { scenario, outcome })
            }
            other => other,
        })
    };
    Ok(match p.sense() {
        Sense::Min => ValueRange {
            lower: range.lower,
            upper: range.upper,
            lower_witness: back(range.lower_witness)?,
            upper_witness: back(range.upper_witness)?,
        },
        Sense::Max => ValueRange {
            lower: -range.upper,
            upper: -range.lower,
            lower_witness: back(range.upper_witness)?,
            upper_witness: back(range.lower_witness)?,
        },
    })
}

/// Rewrites each mirrored pair of `<=` rows as one equation. Any other
/// sharing is refused.
fn merge_mirrored_rows(p: &IlpProgram) -> Result<IlpProgram> {
    let mirror = |r: &Row, s: &Row| {
        r.rel == Relation::Le
            && s.rel == Relation::Le
            && r.rhs.negate() == s.rhs
            && r.coeffs.iter().zip(&s.coeffs).all(|(a, b)| a.negate() == *b)
    };
    let mut rows: Vec<Row> = Vec::new();
    let mut used = vec![false; p.num_rows()];
    for (i, r) in p.rows().iter().enumerate() {
        if used[i] {
            continue;
        }
        let pair = (i + 1..p.num_rows()).find(|&k| !used[k] && mirror(r, &p.rows()[k]));
        match pair {
            Some(k) => {
                used[k] = true;
                rows.push(Row {
                    rel: Relation::Eq,
                    from_ge: false,
                    ..r.clone()
                });
            }
            None => rows.push(r.clone()),
        }
    }
    let q = IlpProgram::from_parts_aliased(
        p.name.clone(),
        p.sense(),
        p.table().clone(),
        p.objective_entries().to_vec(),
        rows,
        p.vars().to_vec(),
        Vec::new(),
    )?;
    if q.shares_coefficients() {
        return Err(Error::Precondition(
            "coefficients shared other than by mirrored `<=` rows".into(),
        ));
    }
    Ok(q)
}

fn has_interval_equation(q: &IlpProgram) -> bool {
    q.rows().iter().any(|r| {
        r.rel == Relation::Eq
            && r.coeffs
                .iter()
                .chain(core::iter::once(&r.rhs))
                .any(|e| !q.table()[&e.id].is_degenerate())
    })
}

/// Whether the dual has an `=` row with interval data, or the primal mixes
/// free variables with interval matrix entries in `=` rows.
fn needs_dual_refinement(q: &IlpProgram) -> bool {
    let free: Vec<usize> = (0..q.num_vars())
        .filter(|&j| q.vars()[j].sign == Sign::Free)
        .collect();
    let free_column_interval = free.iter().any(|&j| {
        core::iter::once(&q.objective_entries()[j])
            .chain(q.rows().iter().map(|r| &r.coeffs[j]))
            .any(|e| !q.table()[&e.id].is_degenerate())
    });
    let eq_matrix_interval = q.rows().iter().any(|r| {
        r.rel == Relation::Eq && r.coeffs.iter().any(|e| !q.table()[&e.id].is_degenerate())
    });
    free_column_interval || (!free.is_empty() && eq_matrix_interval)
}

fn enumerate(q: &IlpProgram, cap: u64) -> Result<ValueRange> {
    let mut lower = Bound::new(false);
    let mut upper = Bound::new(true);
    for s in q.endpoint_scenarios(cap)? {
        let outcome = solve(&s.lp);
        let v = min_value(&outcome);
        let (s2, o2) = (s.clone(), outcome.clone());
        lower.offer(v.clone(), || Witness::Scenario {
            scenario: s2,
            outcome: o2,
        });
        upper.offer(v, || Witness::Scenario { scenario: s, outcome });
    }

    if has_interval_equation(q) {
        refine_lower(q, cap, &mut |cand| {
            match cand {
                Candidate::Point(a) => lower.offer_scenario(q.scenario(&a)?),
                Candidate::Ray { point, direction } => {
                    lower.offer(ExtRational::NegInf, || Witness::Ray { point, direction })
                }
            }
            Ok(())
        })?;
    }

    let all_le = q.rows().iter().all(|r| r.rel == Relation::Le);
    if upper.value != ExtRational::PosInf && all_le && !q.is_fixed_matrix() {
        if let StrongFeasibility::No(s) = strong_feasibility(q, cap) {
            upper.offer_scenario(s);
        }
    }
    if upper.value != ExtRational::PosInf && needs_dual_refinement(q) {
        let d = flip_objective(&dualize(q)).0;
        refine_lower(&d, cap, &mut |cand| {
            match cand {
                Candidate::Point(a) => {
                    let mine: Assignment = a
                        .into_iter()
                        .filter(|(id, _)| q.table().contains_key(id))
                        .collect();
                    upper.offer_scenario(q.scenario(&mine)?);
                }
                Candidate::Ray { point, direction } => {
                    upper.offer(ExtRational::PosInf, || Witness::Ray { point, direction })
                }
            }
            Ok(())
        })?;
    }

    Ok(ValueRange {
        lower: lower.value,
        upper: upper.value,
        lower_witness: lower.witness,
        upper_witness: upper.witness,
    })
}

enum Candidate {
    /// A scenario to solve.
    Point(Assignment),
    /// Weakly feasible ray along which some fixed objective decreases.
    Ray {
        point: Vec<Rational>,
        direction: Vec<Rational>,
    },
}

/// For every sign orthant, minimizes over the weakly feasible set. Each
/// minimizer `x` becomes the scenario that keeps the objective used and
/// makes `x` feasible; each unbounded direction is passed on as a ray.
///
/// Within one orthant the smallest objective is `c_lo` on nonnegative and
/// `c_hi` on nonpositive coordinates, so one objective per orthant suffices
/// when objective coefficients are distinct. Shared objective ids fall back
/// to every endpoint objective.
fn refine_lower(
    r: &IlpProgram,
    cap: u64,
    visit: &mut dyn FnMut(Candidate) -> Result<()>,
) -> Result<()> {
    let entries = r.objective_entries();
    let ids: Vec<_> = entries.iter().map(|e| e.id).collect();
    let mut distinct = ids.clone();
    distinct.sort();
    distinct.dedup();
    let base = r.assignment_with(|iv| iv.lo().clone());
    for neg in orthants(r) {
        let choices = if distinct.len() == ids.len() {
            let mut a = Assignment::new();
            for (e, &n) in entries.iter().zip(&neg) {
                let iv = r.interval(e);
                set_effective(&mut a, e, if n { iv.hi() } else { iv.lo() }.clone());
            }
            vec![a.into_iter().collect()]
        } else {
            endpoint_choices(r, &ids, cap)?
        };
        for choice in choices {
            let mut a = base.clone();
            a.extend(choice);
            let cost = entries
                .iter()
                .zip(&neg)
                .map(|(e, &n)| {
                    let cj = if e.negated { -&a[&e.id] } else { a[&e.id].clone() };
                    if n {
                        -cj
                    } else {
                        cj
                    }
                })
                .collect();
            match solve(&endpoint_orthant_lp(r, &neg, cost)) {
                LpOutcome::Optimal { primal, .. } => {
                    let x = orthant_point(&neg, &primal);
                    visit(Candidate::Point(scenario_through(r, a, &x)))?;
                }
                LpOutcome::Unbounded { point, ray } => visit(Candidate::Ray {
                    point: orthant_point(&neg, &point),
                    direction: orthant_point(&neg, &ray),
                })?,
                LpOutcome::Infeasible { .. } => {}
            }
        }
    }
    Ok(())
}

/// Weakly feasible set of `r` in one orthant, in `z = |x| >= 0`: the smallest
/// reachable activity stays below `b_hi`, and for `=` rows the largest stays
/// above `b_lo`.
fn endpoint_orthant_lp(r: &IlpProgram, neg: &[bool], cost: Vec<Rational>) -> PointLp {
    let n = r.num_vars();
    let mut matrix = Vec::new();
    let mut relations = Vec::new();
    let mut rhs = Vec::new();
    for (i, row) in r.rows().iter().enumerate() {
        let coeffs = r.row_coeffs(i);
        let b = r.interval(&row.rhs);
        let (least, most): (Vec<_>, Vec<_>) = coeffs
            .iter()
            .zip(neg)
            .map(|(iv, &n)| {
                if n {
                    (-iv.hi(), -iv.lo())
                } else {
                    (iv.lo().clone(), iv.hi().clone())
                }
            })
            .unzip();
        matrix.push(least);
        relations.push(Relation::Le);
        rhs.push(b.hi().clone());
        if row.rel == Relation::Eq {
            matrix.push(most);
            relations.push(Relation::Ge);
            rhs.push(b.lo().clone());
        }
    }
    PointLp {
        sense: Sense::Min,
        objective: cost,
        matrix,
        relations,
        rhs,
        signs: vec![Sign::NonNeg; n],
    }
}

/// Completes `a` (objective already set) with constraint data making the
/// weakly feasible point `x` feasible. `<=` rows take the coefficients that
/// minimize the activity and the largest right-hand side. `=` rows move
/// along the segment from the least to the largest activity until they hit
/// `max(least, b_lo)`, which also becomes the right-hand side.
fn scenario_through(r: &IlpProgram, mut a: Assignment, x: &[Rational]) -> Assignment {
    for (i, row) in r.rows().iter().enumerate() {
        let coeffs = r.row_coeffs(i);
        let b = r.interval(&row.rhs);
        let (least, most): (Vec<Rational>, Vec<Rational>) = coeffs
            .iter()
            .zip(x)
            .map(|(iv, xj)| {
                if xj.is_negative() {
                    (iv.hi().clone(), iv.lo().clone())
                } else {
                    (iv.lo().clone(), iv.hi().clone())
                }
            })
            .unzip();
        if row.rel == Relation::Le {
            for (e, v) in row.coeffs.iter().zip(least) {
                set_effective(&mut a, e, v);
            }
            set_effective(&mut a, &row.rhs, b.hi().clone());
            continue;
        }
        let lo: Rational = least.iter().zip(x).map(|(v, xj)| v * xj).sum();
        let hi: Rational = most.iter().zip(x).map(|(v, xj)| v * xj).sum();
        let target = if &lo < b.lo() { b.lo().clone() } else { lo.clone() };
        let t = if hi > lo {
            (&target - &lo) / (&hi - &lo)
        } else {
            Rational::zero()
        };
        for ((e, l), h) in row.coeffs.iter().zip(least).zip(most) {
            let v = &l + &t * (&h - &l);
            set_effective(&mut a, e, v);
        }
        set_effective(&mut a, &row.rhs, target);
    }
    a
}

fn formula(q: &IlpProgram, cap: u64) -> Result<ValueRange> {
    let (lower, lower_witness) = formula_lower(q);
    let (upper, upper_witness) = match strong_feasibility(q, cap) {
        StrongFeasibility::Yes => {
            let d = flip_objective(&dualize(q)).0;
            let (v, w) = formula_lower(&d);
            (-v, w)
        }
        StrongFeasibility::No(scenario) => {
            let outcome = solve(&scenario.lp);
            (
                ExtRational::PosInf,
                Some(Witness::Scenario { scenario, outcome }),
            )
        }
        StrongFeasibility::Undecided => return Err(Error::UnguardedUpperBound),
    };
    Ok(ValueRange {
        lower,
        upper,
        lower_witness,
        upper_witness,
    })
}

/// `inf c_c^T x - c_d^T |x|` over the weakly feasible set, one LP per orthant
/// written with centers and radii: `|A_c x - b_c| <= A_d |x| + b_d` for `=`
/// rows and `A_c x - A_d |x| <= b_c + b_d` for `<=` rows.
fn formula_lower(q: &IlpProgram) -> (ExtRational, Option<Witness>) {
    let n = q.num_vars();
    let c = q.objective();
    let (c_c, c_d) = (c.center(), c.radius());
    let mut best = ExtRational::PosInf;
    for neg in orthants(q) {
        let s = |j: usize, v: &Rational| if neg[j] { -v } else { v.clone() };
        let objective = (0..n).map(|j| s(j, &c_c[j]) - &c_d[j]).collect();
        let mut matrix = Vec::new();
        let mut relations = Vec::new();
        let mut rhs = Vec::new();
        for (i, row) in q.rows().iter().enumerate() {
            let coeffs: Vec<Interval> = q.row_coeffs(i);
            let b = q.interval(&row.rhs);
            let (b_c, b_d) = (b.center(), b.radius());
            matrix.push(
                (0..n)
                    .map(|j| s(j, &coeffs[j].center()) - coeffs[j].radius())
                    .collect(),
            );
            relations.push(Relation::Le);
            rhs.push(&b_c + &b_d);
            if row.rel == Relation::Eq {
                matrix.push(
                    (0..n)
                        .map(|j| s(j, &coeffs[j].center()) + coeffs[j].radius())
                        .collect(),
                );
                relations.push(Relation::Ge);
                rhs.push(&b_c - &b_d);
            }
        }
        let lp = PointLp {
            sense: Sense::Min,
            objective,
            matrix,
            relations,
            rhs,
            signs: vec![Sign::NonNeg; n],
        };
        match solve(&lp) {
            LpOutcome::Optimal { value, .. } => {
                let v = ExtRational::Finite(value);
                if v < best {
                    best = v;
                }
            }
            LpOutcome::Unbounded { point, ray } => {
                return (
                    ExtRational::NegInf,
                    Some(Witness::Ray {
                        point: orthant_point(&neg, &point),
                        direction: orthant_point(&neg, &ray),
                    }),
                );
            }
            LpOutcome::Infeasible { .. } => {}
        }
    }
    (best, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{RowSpec, Var};
    use crate::rational::int;
    use crate::transforms::{split_equations, substitute_nonneg};

    fn iv(lo: i64, hi: i64) -> Interval {
        Interval::new(int(lo), int(hi)).unwrap()
    }

    fn pt(v: i64) -> Interval {
        Interval::point(int(v))
    }

    fn fin(v: i64) -> ExtRational {
        ExtRational::Finite(int(v))
    }

    fn range(p: &IlpProgram, m: Method) -> (ExtRational, ExtRational) {
        let r = optimal_value_range(p, m, 1 << 10).unwrap();
        (r.lower, r.upper)
    }

    fn example_one() -> IlpProgram {
        IlpProgram::new(
            Sense::Min,
            vec![pt(-1), pt(0)],
            vec![
                RowSpec::new(vec![iv(0, 1), pt(-1)], Relation::Eq, pt(0)),
                RowSpec::new(vec![pt(0), pt(1)], Relation::Le, pt(1)),
            ],
            vec![Var::new("x1", Sign::NonNeg), Var::new("x2", Sign::NonNeg)],
        )
        .unwrap()
    }

    fn dual_example() -> IlpProgram {
        IlpProgram::new(
            Sense::Min,
            vec![pt(0), pt(-1)],
            vec![
                RowSpec::new(vec![iv(0, 1), pt(0)], Relation::Le, pt(-1)),
                RowSpec::new(vec![pt(-1), pt(1)], Relation::Le, pt(0)),
                RowSpec::new(vec![pt(0), pt(1)], Relation::Le, pt(0)),
            ],
            vec![Var::new("y1", Sign::Free), Var::new("y2", Sign::Free)],
        )
        .unwrap()
    }

    fn interval_cost() -> IlpProgram {
        IlpProgram::new(
            Sense::Min,
            vec![iv(0, 1)],
            vec![RowSpec::new(vec![pt(1)], Relation::Ge, pt(1))],
            vec![Var::new("x", Sign::Free)],
        )
        .unwrap()
    }

    fn interval_rhs() -> IlpProgram {
        IlpProgram::new(
            Sense::Min,
            vec![pt(-1)],
            vec![RowSpec::new(vec![pt(1)], Relation::Eq, iv(0, 1))],
            vec![Var::new("y", Sign::Free)],
        )
        .unwrap()
    }

    #[test]
    fn example_one_range() {
        let p = example_one();
        assert_eq!(range(&p, Method::Enumerate), (ExtRational::NegInf, fin(-1)));
        // The formula needs strong feasibility, which an interval matrix in
        // an equation row with nonnegative variables still allows deciding.
        assert_eq!(range(&p, Method::Both), (ExtRational::NegInf, fin(-1)));
    }

    #[test]
    fn program_nine_range() {
        assert_eq!(range(&dual_example(), Method::Enumerate), (fin(1), ExtRational::PosInf));
        assert_eq!(range(&dual_example(), Method::Formula), (fin(1), ExtRational::PosInf));
        let (q, _) = substitute_nonneg(&dual_example(), &[0]).unwrap();
        assert_eq!(range(&q, Method::Enumerate).0, fin(0));
    }

    #[test]
    fn example_three_ranges() {
        assert_eq!(range(&interval_cost(), Method::Both), (fin(0), fin(1)));
        assert_eq!(range(&interval_rhs(), Method::Both), (fin(-1), fin(0)));

        let (q, _) = substitute_nonneg(&interval_cost(), &[0]).unwrap();
        let r = optimal_value_range(&q, Method::Enumerate, 64).unwrap();
        assert_eq!(r.lower, ExtRational::NegInf);
        assert!(matches!(
            r.lower_witness,
            Some(Witness::Scenario {
                outcome: LpOutcome::Unbounded { .. },
                ..
            })
        ));

        let (q, _) = split_equations(&interval_rhs());
        let r = optimal_value_range(&q, Method::Both, 64).unwrap();
        assert_eq!(r.upper, ExtRational::PosInf);
        assert!(matches!(
            r.upper_witness,
            Some(Witness::Scenario {
                outcome: LpOutcome::Infeasible { .. },
                ..
            })
        ));
    }

    #[test]
    fn interior_right_hand_side_attains_the_minimum() {
        // min x1 + x2, x1 - x2 = [-1, 1], x >= 0: the value |b| is 0 at b = 0.
        let p = IlpProgram::new(
            Sense::Min,
            vec![pt(1), pt(1)],
            vec![RowSpec::new(vec![pt(1), pt(-1)], Relation::Eq, iv(-1, 1))],
            vec![Var::new("a", Sign::NonNeg), Var::new("b", Sign::NonNeg)],
        )
        .unwrap();
        let endpoint_min = p
            .endpoint_scenarios(4)
            .unwrap()
            .map(|s| min_value(&solve(&s.lp)))
            .min()
            .unwrap();
        assert_eq!(endpoint_min, fin(1));
        let r = optimal_value_range(&p, Method::Both, 64).unwrap();
        assert_eq!((r.lower.clone(), r.upper), (fin(0), fin(1)));
        let Some(Witness::Scenario { scenario, outcome }) = r.lower_witness else {
            panic!("expected a scenario");
        };
        assert_eq!(scenario.lp.rhs, vec![int(0)]);
        assert_eq!(outcome.value(), Some(&int(0)));
    }

    #[test]
    fn interior_objective_attains_the_maximum() {
        // min c x, -1 <= x <= 1: the value -|c| peaks at c = 0.
        let p = IlpProgram::new(
            Sense::Min,
            vec![iv(-1, 1)],
            vec![
                RowSpec::new(vec![pt(1)], Relation::Le, pt(1)),
                RowSpec::new(vec![pt(-1)], Relation::Le, pt(1)),
            ],
            vec![Var::new("x", Sign::Free)],
        )
        .unwrap();
        let endpoint_max = p
            .endpoint_scenarios(4)
            .unwrap()
            .map(|s| min_value(&solve(&s.lp)))
            .max()
            .unwrap();
        assert_eq!(endpoint_max, fin(-1));
        let r = optimal_value_range(&p, Method::Both, 64).unwrap();
        assert_eq!((r.lower, r.upper), (fin(-1), fin(0)));
        let Some(Witness::Scenario { scenario, outcome }) = r.upper_witness else {
            panic!("expected a scenario");
        };
        assert_eq!(scenario.lp.objective, vec![int(0)]);
        assert_eq!(outcome.value(), Some(&int(0)));
    }

    #[test]
    fn maximization_swaps_bounds() {
        let (p, _) = flip_objective(&interval_cost());
        assert_eq!(range(&p, Method::Both), (fin(-1), fin(0)));
        let r = optimal_value_range(&p, Method::Enumerate, 64).unwrap();
        let Some(Witness::Scenario { scenario, outcome }) = r.upper_witness else {
            panic!("expected a scenario");
        };
        assert_eq!(scenario.lp.sense, Sense::Max);
        assert_eq!(outcome.value(), Some(&int(0)));
    }

    #[test]
    fn crisp_and_empty_programs() {
        let p = IlpProgram::new(
            Sense::Min,
            vec![pt(2)],
            vec![RowSpec::new(vec![pt(1)], Relation::Ge, pt(3))],
            vec![Var::new("x", Sign::NonNeg)],
        )
        .unwrap();
        assert_eq!(range(&p, Method::Both), (fin(6), fin(6)));

        let zero = IlpProgram::new(Sense::Min, vec![pt(0)], vec![], vec![Var::new("x", Sign::Free)]).unwrap();
        assert_eq!(range(&zero, Method::Both), (fin(0), fin(0)));
        let slope = IlpProgram::new(Sense::Min, vec![pt(1)], vec![], vec![Var::new("x", Sign::NonNeg)]).unwrap();
        assert_eq!(range(&slope, Method::Both), (fin(0), fin(0)));
        let free = IlpProgram::new(Sense::Min, vec![pt(1)], vec![], vec![Var::new("x", Sign::Free)]).unwrap();
        assert_eq!(range(&free, Method::Both), (ExtRational::NegInf, ExtRational::NegInf));
        let none = IlpProgram::new(Sense::Min, vec![], vec![], vec![]).unwrap();
        assert_eq!(range(&none, Method::Both), (fin(0), fin(0)));
    }

    #[test]
    fn formula_refuses_undecided_upper_bound() {
        let p = IlpProgram::new(
            Sense::Min,
            vec![pt(1), pt(1)],
            vec![
                RowSpec::new(vec![iv(1, 2), pt(1)], Relation::Eq, pt(1)),
                RowSpec::new(vec![pt(1), pt(1)], Relation::Eq, pt(1)),
            ],
            vec![Var::new("a", Sign::Free), Var::new("b", Sign::Free)],
        )
        .unwrap();
        assert_eq!(
            optimal_value_range(&p, Method::Formula, 64),
            Err(Error::UnguardedUpperBound)
        );
        assert_eq!(range(&p, Method::Enumerate), (fin(1), fin(1)));
    }

    #[test]
    fn sharing_beyond_mirrored_rows_is_refused() {
        let p = example_one();
        let obj = p.objective_entries()[0];
        let mut rows = p.rows().to_vec();
        rows[1].coeffs[0] = obj;
        let q = IlpProgram::from_parts_aliased(
            String::new(),
            Sense::Min,
            p.table()
                .iter()
                .filter(|(id, _)| **id != p.rows()[1].coeffs[0].id)
                .map(|(id, iv)| (*id, iv.clone()))
                .collect(),
            p.objective_entries().to_vec(),
            rows,
            p.vars().to_vec(),
            Vec::new(),
        )
        .unwrap();
        assert!(q.shares_coefficients());
        assert!(matches!(
            optimal_value_range(&q, Method::Enumerate, 64),
            Err(Error::Precondition(_))
        ));
    }
}
