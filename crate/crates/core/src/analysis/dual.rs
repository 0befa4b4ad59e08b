use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::interval::Interval;
use crate::lp::{Relation, Sense, Sign};
use crate::model::{CoefId, Entry, IlpProgram, Row, Var};
use crate::rational::Rational;

/// The dual interval program: the family of duals of all scenarios.
///
/// Follows [`crate::lp::dual_of`] row for row. Each interval coefficient of
/// `p` appears exactly once in the dual under its original id; only the
/// crisp `0`/`1` entries of the sign rows are new.
pub fn dualize(p: &IlpProgram) -> IlpProgram {
    let n = p.num_vars();
    let m = p.num_rows();
    let sense = p.sense();
    let mut table = p.table().clone();
    let mut next = p.fresh_id();
    let mut crisp = |v: Rational, table: &mut alloc::collections::BTreeMap<CoefId, Interval>| {
        let id = CoefId(next);
        next += 1;
        table.insert(id, Interval::point(v));
        Entry::new(id)
    };

    let mut vars = Vec::with_capacity(m);
    let mut sign_rows = Vec::new();
    for (i, row) in p.rows().iter().enumerate() {
        // Stored rows are `=` or `<=`.
        let nonpositive = row.rel == Relation::Le && sense == Sense::Min;
        let nonnegative = row.rel == Relation::Le && sense == Sense::Max;
        vars.push(Var::new(
            format!("y{}", i + 1),
            if nonnegative { Sign::NonNeg } else { Sign::Free },
        ));
        if nonpositive {
            sign_rows.push(i);
        }
    }

    let mut rows = Vec::with_capacity(n + sign_rows.len());
    for j in 0..n {
        let coeffs: Vec<Entry> = p.rows().iter().map(|r| r.coeffs[j]).collect();
        let rhs = p.objective_entries()[j];
        let row = match (p.vars()[j].sign, sense) {
            (Sign::Free, _) => Row {
                coeffs,
                rel: Relation::Eq,
                rhs,
                from_ge: false,
            },
            (Sign::NonNeg, Sense::Min) => Row {
                coeffs,
                rel: Relation::Le,
                rhs,
                from_ge: false,
            },
            (Sign::NonNeg, Sense::Max) => Row {
                coeffs: coeffs.iter().map(|e| e.negate()).collect(),
                rel: Relation::Le,
                rhs: rhs.negate(),
                from_ge: true,
            },
        };
        rows.push(row);
    }
    for &i in &sign_rows {
        let coeffs = (0..m)
            .map(|k| {
                let v = if k == i { Rational::one() } else { Rational::zero() };
                crisp(v, &mut table)
            })
            .collect();
        let rhs = crisp(Rational::zero(), &mut table);
        rows.push(Row {
            coeffs,
            rel: Relation::Le,
            rhs,
            from_ge: false,
        });
    }
    let objective = p.rows().iter().map(|r| r.rhs).collect();
    let build = if p.shares_coefficients() {
        IlpProgram::from_parts_aliased
    } else {
        IlpProgram::from_parts
    };
    build(
        format!("dual({})", p.name),
        sense.flipped(),
        table,
        objective,
        rows,
        vars,
        Vec::new(),
    )
    .expect("dual of a well-formed program is well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::min_value;
    use crate::lp::{dual_of, solve, LpOutcome};
    use crate::model::RowSpec;
    use crate::rational::int;
    use crate::transforms::flip_objective;
    use alloc::vec;

    fn iv(lo: i64, hi: i64) -> Interval {
        Interval::new(int(lo), int(hi)).unwrap()
    }

    fn pt(v: i64) -> Interval {
        Interval::point(int(v))
    }

    #[test]
    fn example_one_dual_is_program_nine() {
        let p = IlpProgram::new(
            Sense::Min,
            vec![pt(-1), pt(0)],
            vec![
                RowSpec::new(vec![iv(0, 1), pt(-1)], Relation::Eq, pt(0)),
                RowSpec::new(vec![pt(0), pt(1)], Relation::Le, pt(1)),
            ],
            vec![Var::new("x1", Sign::NonNeg), Var::new("x2", Sign::NonNeg)],
        )
        .unwrap();
        let (d, _) = flip_objective(&dualize(&p));
        assert_eq!(d.sense(), Sense::Min);
        assert!(d.vars().iter().all(|v| v.sign == Sign::Free));
        assert_eq!(d.objective().as_slice(), &[pt(0), pt(-1)]);
        assert_eq!(d.row_coeffs(0), vec![iv(0, 1), pt(0)]);
        assert_eq!(d.rhs()[0], pt(-1));
        assert_eq!(d.row_coeffs(1), vec![pt(-1), pt(1)]);
        assert_eq!(d.rhs()[1], pt(0));
        assert_eq!(d.row_coeffs(2), vec![pt(0), pt(1)]);
        assert_eq!(d.rhs()[2], pt(0));
        assert!(d.rows().iter().all(|r| r.rel == Relation::Le));
        // The interval coefficient is shared, not copied.
        assert_eq!(d.rows()[0].coeffs[0].id, p.rows()[0].coeffs[0].id);
        assert_eq!(d.nondegenerate_count(), 1);
    }

    #[test]
    fn crisp_dual_matches_point_dual() {
        for sense in [Sense::Min, Sense::Max] {
            let p = IlpProgram::new(
                sense,
                vec![pt(2), pt(-3), pt(1)],
                vec![
                    RowSpec::new(vec![pt(1), pt(1), pt(0)], Relation::Le, pt(4)),
                    RowSpec::new(vec![pt(1), pt(-1), pt(2)], Relation::Eq, pt(1)),
                    RowSpec::new(vec![pt(0), pt(1), pt(1)], Relation::Ge, pt(-2)),
                ],
                vec![
                    Var::new("a", Sign::NonNeg),
                    Var::new("b", Sign::Free),
                    Var::new("c", Sign::NonNeg),
                ],
            )
            .unwrap();
            let s = p.center_scenario();
            let d = dualize(&p).center_scenario();
            let expected = dual_of(&s.lp);
            if sense == Sense::Min {
                assert_eq!(d.lp, expected);
            }
            // Max programs store `>=` column rows negated.
            assert_eq!(solve(&d.lp).value(), solve(&expected).value());
            assert!(solve(&d.lp).is_optimal());
        }
    }

    #[test]
    fn double_dual_keeps_values() {
        let p = IlpProgram::new(
            Sense::Min,
            vec![pt(1), pt(1)],
            vec![
                RowSpec::new(vec![pt(1), pt(2)], Relation::Ge, pt(2)),
                RowSpec::new(vec![pt(3), pt(-1)], Relation::Le, pt(5)),
            ],
            vec![Var::new("a", Sign::NonNeg), Var::new("b", Sign::Free)],
        )
        .unwrap();
        let v = |q: &IlpProgram| {
            let out = solve(&q.center_scenario().lp);
            assert!(matches!(out, LpOutcome::Optimal { .. }));
            min_value(&out)
        };
        let dd = dualize(&dualize(&p));
        assert_eq!(dd.sense(), Sense::Min);
        assert_eq!(v(&p), v(&dd));
    }
}
