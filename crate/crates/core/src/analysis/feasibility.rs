use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use super::{check_point, endpoint_choices, set_effective, without_objective};
use crate::error::Result;
use crate::interval::interval_dot_range;
use crate::lp::{solve, LpOutcome, PointLp, Relation, Sense, Sign};
use crate::model::{Assignment, CoefId, Entry, IlpProgram, Scenario};
use crate::rational::Rational;

/// Whether some scenario admits `x`. A point that breaks a sign restriction
/// is never feasible.
///
/// Coefficients of one row vary independently, so row `i` admits `x` iff
/// the exact range of `a_i^T x` meets the right-hand side interval
/// (for `<=` rows: reaches below its upper end). With shared coefficients
/// the rows are coupled; for fixed `x` they are linear in the coefficient
/// values, which makes the question one LP over the coefficient box.
pub fn is_weakly_feasible(p: &IlpProgram, x: &[Rational]) -> Result<bool> {
    if !check_point(p, x)? {
        return Ok(false);
    }
    if p.shares_coefficients() {
        return Ok(!is_infeasible(&coefficient_lp(p, x)));
    }
    for (i, row) in p.rows().iter().enumerate() {
        let range = interval_dot_range(&p.row_coeffs(i), x)?;
        let rhs = p.interval(&row.rhs);
        let ok = match row.rel {
            Relation::Eq => range.intersects(&rhs),
            _ => range.lo() <= rhs.hi(),
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrongFeasibility {
    /// Every scenario is feasible.
    Yes,
    /// This scenario is infeasible.
    No(Scenario),
    Undecided,
}

/// Whether every scenario of `p` is feasible.
///
/// Decided exactly for fixed matrices, for systems of `<=` rows, and when all
/// variables are nonnegative. Elsewhere, and whenever coefficients are
/// shared, only an infeasible endpoint scenario can settle it; finding none
/// gives `Undecided`, as does running into `cap`.
pub fn strong_feasibility(p: &IlpProgram, cap: u64) -> StrongFeasibility {
    if p.shares_coefficients() {
        return match constraint_endpoints(p, cap) {
            Some(Some(s)) => StrongFeasibility::No(s),
            _ => StrongFeasibility::Undecided,
        };
    }
    let all_le = p.rows().iter().all(|r| r.rel == Relation::Le);
    let all_nonneg = p.vars().iter().all(|v| v.sign == Sign::NonNeg);
    if p.is_fixed_matrix() {
        fixed_matrix(p, cap)
    } else if all_le {
        inequalities(p)
    } else {
        match constraint_endpoints(p, cap) {
            Some(Some(s)) => StrongFeasibility::No(s),
            Some(None) if all_nonneg => StrongFeasibility::Yes,
            _ => StrongFeasibility::Undecided,
        }
    }
}

/// Feasibility of `x` as a system in `w = v - v_lo`, `0 <= w <= v_hi - v_lo`,
/// one column per table coefficient.
fn coefficient_lp(p: &IlpProgram, x: &[Rational]) -> PointLp {
    let ids: Vec<CoefId> = p.table().keys().copied().collect();
    let col = |id: CoefId| ids.binary_search(&id).expect("entries reference the table");
    let width = ids.len();
    let mut matrix = Vec::new();
    let mut relations = Vec::new();
    let mut rhs = Vec::new();
    for row in p.rows() {
        let mut coeffs = alloc::vec![Rational::zero(); width];
        let mut add = |e: &Entry, weight: &Rational| {
            let w = if e.negated { -weight } else { weight.clone() };
            coeffs[col(e.id)] += w;
        };
        for (e, xj) in row.coeffs.iter().zip(x) {
            add(e, xj);
        }
        add(&row.rhs, &-Rational::one());
        let offset: Rational = ids
            .iter()
            .zip(&coeffs)
            .map(|(id, a)| a * p.table()[id].lo())
            .sum();
        matrix.push(coeffs);
        relations.push(row.rel);
        rhs.push(-offset);
    }
    for (k, id) in ids.iter().enumerate() {
        let iv = &p.table()[id];
        let mut unit = alloc::vec![Rational::zero(); width];
        unit[k] = Rational::one();
        matrix.push(unit);
        relations.push(Relation::Le);
        rhs.push(iv.hi() - iv.lo());
    }
    PointLp {
        sense: Sense::Min,
        objective: alloc::vec![Rational::zero(); width],
        matrix,
        relations,
        rhs,
        signs: alloc::vec![Sign::NonNeg; width],
    }
}

fn is_infeasible(lp: &PointLp) -> bool {
    matches!(solve(&without_objective(lp)), LpOutcome::Infeasible { .. })
}

/// Objective and matrix at their lower ends, right-hand sides to be filled.
fn base_assignment(p: &IlpProgram) -> Assignment {
    p.assignment_with(|iv| iv.lo().clone())
}

/// `<=` rows get their smallest right-hand side. For `=` rows the reachable
/// right-hand sides form a convex set, so only the corners of the `b` box
/// need checking.
fn fixed_matrix(p: &IlpProgram, cap: u64) -> StrongFeasibility {
    let mut base = base_assignment(p);
    let mut eq_ids: Vec<CoefId> = Vec::new();
    for row in p.rows() {
        match row.rel {
            Relation::Eq => eq_ids.push(row.rhs.id),
            _ => {
                let b = p.interval(&row.rhs);
                set_effective(&mut base, &row.rhs, b.lo().clone());
            }
        }
    }
    let Ok(choices) = endpoint_choices(p, &eq_ids, cap) else {
        return StrongFeasibility::Undecided;
    };
    for choice in choices {
        let mut a = base.clone();
        a.extend(choice);
        let s = p.scenario(&a).expect("endpoint values lie in their intervals");
        if is_infeasible(&s.lp) {
            return StrongFeasibility::No(s);
        }
    }
    StrongFeasibility::Yes
}

/// Every scenario of `A x <= b` is feasible iff
/// `A_hi x1 - A_lo x2 <= b_lo` is solvable with `x1, x2 >= 0` (`x2` only for
/// free variables). Otherwise a Farkas vector `p >= 0` of that system picks,
/// column by column, a matrix scenario with `A^T p >= 0` and zero on free
/// columns, which together with `b_lo` is infeasible.
fn inequalities(p: &IlpProgram) -> StrongFeasibility {
    let m = p.num_rows();
    let coeffs: Vec<_> = (0..m).map(|i| p.row_coeffs(i)).collect();
    let b_lo: Vec<Rational> = (0..m).map(|i| p.interval(&p.rows()[i].rhs).lo().clone()).collect();
    let mut columns: Vec<Vec<Rational>> = Vec::new();
    for j in 0..p.num_vars() {
        columns.push(coeffs.iter().map(|r| r[j].hi().clone()).collect());
        if p.vars()[j].sign == Sign::Free {
            columns.push(coeffs.iter().map(|r| -r[j].lo()).collect());
        }
    }
    let width = columns.len();
    let lp = PointLp {
        sense: Sense::Min,
        objective: alloc::vec![Rational::zero(); width],
        matrix: (0..m).map(|i| columns.iter().map(|c| c[i].clone()).collect()).collect(),
        relations: alloc::vec![Relation::Le; m],
        rhs: b_lo.clone(),
        signs: alloc::vec![Sign::NonNeg; width],
    };
    let LpOutcome::Infeasible { farkas } = solve(&lp) else {
        return StrongFeasibility::Yes;
    };
    let weights: Vec<Rational> = farkas.iter().map(|y| -y).collect();
    let mut a = base_assignment(p);
    for (i, row) in p.rows().iter().enumerate() {
        set_effective(&mut a, &row.rhs, b_lo[i].clone());
    }
    for j in 0..p.num_vars() {
        let lo: Rational = (0..m).map(|i| coeffs[i][j].lo() * &weights[i]).sum();
        let hi: Rational = (0..m).map(|i| coeffs[i][j].hi() * &weights[i]).sum();
        // Nonnegative columns take `A_hi`, free ones the point where the
        // weighted column sum crosses zero.
        let t = match p.vars()[j].sign {
            Sign::NonNeg => Rational::one(),
            Sign::Free if lo.is_negative() => -&lo / (&hi - &lo),
            Sign::Free => Rational::zero(),
        };
        for (i, row) in p.rows().iter().enumerate() {
            set_effective(&mut a, &row.coeffs[j], coeffs[i][j].lerp(&t));
        }
    }
    let s = p.scenario(&a).expect("interpolated values lie in their intervals");
    debug_assert!(is_infeasible(&s.lp));
    StrongFeasibility::No(s)
}

/// Scans the endpoints of the constraint coefficients: `Some(Some(s))` for
/// the first infeasible one, `Some(None)` if there is none, `None` over `cap`.
fn constraint_endpoints(p: &IlpProgram, cap: u64) -> Option<Option<Scenario>> {
    let ids: Vec<CoefId> = p
        .rows()
        .iter()
        .flat_map(|r| r.coeffs.iter().chain(core::iter::once(&r.rhs)))
        .map(|e| e.id)
        .collect();
    let choices = endpoint_choices(p, &ids, cap).ok()?;
    let base = base_assignment(p);
    for choice in choices {
        let mut a = base.clone();
        a.extend(choice);
        let s = p.scenario(&a).expect("endpoint values lie in their intervals");
        if is_infeasible(&s.lp) {
            return Some(Some(s));
        }
    }
    Some(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Interval;
    use crate::model::{RowSpec, Var};
    use crate::rational::{int, ratio};
    use crate::transforms::split_equations;
    use alloc::vec;

    fn iv(lo: i64, hi: i64) -> Interval {
        Interval::new(int(lo), int(hi)).unwrap()
    }

    fn pt(v: i64) -> Interval {
        Interval::point(int(v))
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
    fn example_one_points() {
        let p = example_one();
        assert!(is_weakly_feasible(&p, &[int(1), int(1)]).unwrap());
        assert!(is_weakly_feasible(&p, &[int(0), int(0)]).unwrap());
        assert!(!is_weakly_feasible(&p, &[int(1), int(2)]).unwrap());
        assert!(!is_weakly_feasible(&p, &[int(-1), int(0)]).unwrap());
        assert!(is_weakly_feasible(&p, &[int(2), int(1)]).unwrap());
        assert!(!is_weakly_feasible(&p, &[ratio(1, 2), int(1)]).unwrap());
        assert!(is_weakly_feasible(&p, &[int(1)]).is_err());
    }

    #[test]
    fn split_ten_b_is_not_strongly_feasible() {
        let (q, _) = split_equations(&interval_rhs());
        let StrongFeasibility::No(s) = strong_feasibility(&q, 64) else {
            panic!("expected an infeasible scenario");
        };
        // y <= b1, -y <= -b2 with b1 = 0, b2 = 1
        assert_eq!(s.lp.rhs, vec![int(0), int(-1)]);
        assert_eq!(strong_feasibility(&interval_rhs(), 64), StrongFeasibility::Yes);
    }

    #[test]
    fn crisp_feasible_program() {
        let p = IlpProgram::new(
            Sense::Min,
            vec![pt(1)],
            vec![RowSpec::new(vec![pt(1)], Relation::Ge, pt(1))],
            vec![Var::new("x", Sign::NonNeg)],
        )
        .unwrap();
        assert_eq!(strong_feasibility(&p, 1), StrongFeasibility::Yes);
    }

    #[test]
    fn inequality_witness_can_be_interior() {
        // [-1,1] x <= -1 with x free: the scenario a = 0 is infeasible, while
        // both endpoint scenarios are feasible.
        let p = IlpProgram::new(
            Sense::Min,
            vec![pt(0)],
            vec![RowSpec::new(vec![iv(-1, 1)], Relation::Le, pt(-1))],
            vec![Var::new("x", Sign::Free)],
        )
        .unwrap();
        let StrongFeasibility::No(s) = strong_feasibility(&p, 64) else {
            panic!("expected an infeasible scenario");
        };
        assert_eq!(s.lp.matrix, vec![vec![int(0)]]);
        for e in p.endpoint_scenarios(4).unwrap() {
            assert!(!is_infeasible(&e.lp));
        }
    }

    #[test]
    fn nonnegative_inequalities() {
        // [1,2] x <= [3,4], x >= 0 is feasible in every scenario (x = 0).
        let p = IlpProgram::new(
            Sense::Min,
            vec![pt(1)],
            vec![RowSpec::new(vec![iv(1, 2)], Relation::Ge, iv(1, 2))],
            vec![Var::new("x", Sign::NonNeg)],
        )
        .unwrap();
        assert_eq!(strong_feasibility(&p, 64), StrongFeasibility::Yes);
        let q = IlpProgram::new(
            Sense::Min,
            vec![pt(1)],
            vec![RowSpec::new(vec![iv(-1, 1)], Relation::Ge, iv(1, 2))],
            vec![Var::new("x", Sign::NonNeg)],
        )
        .unwrap();
        assert!(matches!(strong_feasibility(&q, 64), StrongFeasibility::No(_)));
    }

    #[test]
    fn interval_equation_system() {
        // [1,2] x = 1, x >= 0: every scenario solvable.
        let p = IlpProgram::new(
            Sense::Min,
            vec![pt(1)],
            vec![RowSpec::new(vec![iv(1, 2)], Relation::Eq, pt(1))],
            vec![Var::new("x", Sign::NonNeg)],
        )
        .unwrap();
        assert_eq!(strong_feasibility(&p, 64), StrongFeasibility::Yes);
        let free = IlpProgram::new(
            Sense::Min,
            vec![pt(1), pt(1)],
            vec![
                RowSpec::new(vec![iv(1, 2), pt(1)], Relation::Eq, pt(1)),
                RowSpec::new(vec![pt(1), pt(1)], Relation::Eq, pt(1)),
            ],
            vec![Var::new("a", Sign::Free), Var::new("b", Sign::Free)],
        )
        .unwrap();
        // (0, 1) solves every scenario, but with an interval matrix in `=`
        // rows and free variables only endpoints are scanned.
        assert_eq!(strong_feasibility(&free, 64), StrongFeasibility::Undecided);
    }
}
