//! The classical LP rewrites applied to interval programs.
//!
//! `flip_objective` and `add_slack` never duplicate a coefficient. The other
//! two do: `split_equations` copies every coefficient of an equation row and
//! `substitute_nonneg` copies every coefficient in a free variable's column.
//! Each copy gets a fresh [`CoefId`], so in the transformed program the copies
//! vary independently.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::lp::{PointLp, Relation, Sign};
use crate::model::{Assignment, CoefId, Entry, IlpProgram, Row, Var};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TransformKind {
    Flip,
    Slack,
    SplitEq,
    NonnegSub,
}

impl TransformKind {
    pub fn name(self) -> &'static str {
        match self {
            TransformKind::Flip => "flip",
            TransformKind::Slack => "slack",
            TransformKind::SplitEq => "split",
            TransformKind::NonnegSub => "nonneg",
        }
    }
}

/// Where one source coefficient ended up. In the embedded scenario every
/// target carries the source's table value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IdLink {
    pub source: CoefId,
    pub targets: Vec<CoefId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ColumnMap {
    Keep(usize),
    /// `x = x[pos] - x[neg]`.
    Split { pos: usize, neg: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SolutionMap {
    Identity,
    /// The slack of source row `rows[k]` is variable `n + k`.
    Slack { n: usize, rows: Vec<usize> },
    Substitute { columns: Vec<ColumnMap>, width: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TransformRecord {
    pub kind: TransformKind,
    /// Source rows touched.
    pub rows: Vec<usize>,
    /// Source columns touched.
    pub columns: Vec<usize>,
    /// Coefficients not listed here keep their id.
    pub links: Vec<IdLink>,
    /// Brand-new crisp coefficients with their values.
    pub minted: Vec<(CoefId, Rational)>,
    pub map: SolutionMap,
}

impl TransformRecord {
    fn empty(kind: TransformKind) -> Self {
        TransformRecord {
            kind,
            rows: Vec::new(),
            columns: Vec::new(),
            links: Vec::new(),
            minted: Vec::new(),
            map: SolutionMap::Identity,
        }
    }

    /// Maps a point of the source program to the transformed one. Only the
    /// slack map depends on the scenario (slack = `b - A x`).
    pub fn forward(&self, x: &[Rational], source: &PointLp) -> Vec<Rational> {
        match &self.map {
            SolutionMap::Identity => x.to_vec(),
            SolutionMap::Slack { rows, .. } => {
                let activity = source.row_activity(x);
                let mut out = x.to_vec();
                out.extend(rows.iter().map(|&i| &source.rhs[i] - &activity[i]));
                out
            }
            SolutionMap::Substitute { columns, width } => {
                let mut out = vec![Rational::zero(); *width];
                for (j, col) in columns.iter().enumerate() {
                    match *col {
                        ColumnMap::Keep(k) => out[k] = x[j].clone(),
                        ColumnMap::Split { pos, neg } => {
                            if x[j].is_negative() {
                                out[neg] = -&x[j];
                            } else {
                                out[pos] = x[j].clone();
                            }
                        }
                    }
                }
                out
            }
        }
    }

    /// Maps a point of the transformed program back to the source.
    pub fn backward(&self, x: &[Rational]) -> Vec<Rational> {
        match &self.map {
            SolutionMap::Identity => x.to_vec(),
            SolutionMap::Slack { n, .. } => x[..*n].to_vec(),
            SolutionMap::Substitute { columns, .. } => columns
                .iter()
                .map(|col| match *col {
                    ColumnMap::Keep(k) => x[k].clone(),
                    ColumnMap::Split { pos, neg } => &x[pos] - &x[neg],
                })
                .collect(),
        }
    }

    /// The scenario of the transformed program that mirrors a source
    /// scenario: duplicated coefficients take equal values.
    pub fn embed(&self, source: &Assignment) -> Assignment {
        let mut out = source.clone();
        for link in &self.links {
            let v = out.remove(&link.source).expect("link source in assignment");
            for t in &link.targets {
                out.insert(*t, v.clone());
            }
        }
        for (id, v) in &self.minted {
            out.insert(*id, v.clone());
        }
        out
    }

    /// Ids that exist in the target but not in the source.
    pub fn new_ids(&self) -> Vec<CoefId> {
        let mut ids: Vec<CoefId> = self
            .links
            .iter()
            .flat_map(|l| l.targets.iter().copied().filter(move |t| *t != l.source))
            .chain(self.minted.iter().map(|(id, _)| *id))
            .collect();
        ids.sort();
        ids
    }

    /// Number of source coefficients split into two copies.
    pub fn duplicated(&self) -> usize {
        self.links.iter().filter(|l| l.targets.len() > 1).count()
    }
}

struct Minter {
    next: u32,
}

impl Minter {
    fn for_program(p: &IlpProgram) -> Self {
        Minter { next: p.fresh_id() }
    }

    fn mint(&mut self) -> CoefId {
        let id = CoefId(self.next);
        self.next += 1;
        id
    }
}

/// `max c^T x` becomes `min (-c)^T x` and vice versa. Objective entries keep
/// their ids and only flip their sign, so every scenario maps to itself.
pub fn flip_objective(p: &IlpProgram) -> (IlpProgram, TransformRecord) {
    let mut q = p.clone();
    let mut rec = TransformRecord::empty(TransformKind::Flip);
    let (sense, _, objective, _, _, provenance) = q.parts_mut();
    *sense = sense.flipped();
    for e in objective.iter_mut() {
        *e = e.negate();
        rec.links.push(IdLink {
            source: e.id,
            targets: vec![e.id],
        });
    }
    rec.columns = (0..p.num_vars()).collect();
    provenance.push(rec.clone());
    (q, rec)
}

/// Turns every `<=` row into an equation with its own nonnegative slack
/// variable (crisp coefficient `1`). Programs without `<=` rows come back
/// unchanged with an empty record.
pub fn add_slack(p: &IlpProgram) -> (IlpProgram, TransformRecord) {
    let le_rows: Vec<usize> = (0..p.num_rows())
        .filter(|&i| p.rows()[i].rel == Relation::Le)
        .collect();
    if le_rows.is_empty() {
        return (p.clone(), TransformRecord::empty(TransformKind::Slack));
    }
    let n = p.num_vars();
    let mut minter = Minter::for_program(p);
    let mut q = p.clone();
    let mut rec = TransformRecord::empty(TransformKind::Slack);
    {
        let (_, table, objective, rows, vars, _) = q.parts_mut();
        let mut crisp = |v: Rational, table: &mut BTreeMap<CoefId, Interval>| {
            let id = minter.mint();
            table.insert(id, Interval::point(v.clone()));
            rec.minted.push((id, v));
            Entry::new(id)
        };
        for (k, &i) in le_rows.iter().enumerate() {
            objective.push(crisp(Rational::zero(), table));
            for (r, row) in rows.iter_mut().enumerate() {
                let v = if r == i { Rational::one() } else { Rational::zero() };
                row.coeffs.push(crisp(v, table));
            }
            vars.push(Var::new(format!("s{}", k + 1), Sign::NonNeg));
        }
        for &i in &le_rows {
            rows[i].rel = Relation::Eq;
        }
    }
    rec.rows = le_rows.clone();
    rec.columns = (n..n + le_rows.len()).collect();
    rec.map = SolutionMap::Slack { n, rows: le_rows };
    q.parts_mut().5.push(rec.clone());
    (q, rec)
}

/// Replaces each equation `a x = b` by `a1 x <= b1` and `-a2 x <= -b2`,
/// where `(a1, b1)` and `(a2, b2)` are independent copies of `(a, b)`.
/// The two rows take the place of the equation, `<=` copy first.
pub fn split_equations(p: &IlpProgram) -> (IlpProgram, TransformRecord) {
    let mut minter = Minter::for_program(p);
    let mut rec = TransformRecord::empty(TransformKind::SplitEq);
    let mut q = p.clone();
    {
        let (_, table, _, rows, _, _) = q.parts_mut();
        let mut out = Vec::with_capacity(rows.len());
        for (i, row) in rows.drain(..).enumerate() {
            if row.rel != Relation::Eq {
                out.push(row);
                continue;
            }
            rec.rows.push(i);
            let mut dup = |e: Entry| {
                let iv = table.remove(&e.id).expect("entry in table");
                let (a, b) = (minter.mint(), minter.mint());
                table.insert(a, iv.clone());
                table.insert(b, iv);
                rec.links.push(IdLink {
                    source: e.id,
                    targets: vec![a, b],
                });
                (
                    Entry {
                        id: a,
                        negated: e.negated,
                    },
                    Entry {
                        id: b,
                        negated: !e.negated,
                    },
                )
            };
            let (mut up, mut down) = (Vec::new(), Vec::new());
            for e in row.coeffs {
                let (a, b) = dup(e);
                up.push(a);
                down.push(b);
            }
            let (rhs_up, rhs_down) = dup(row.rhs);
            out.push(Row {
                coeffs: up,
                rel: Relation::Le,
                rhs: rhs_up,
                from_ge: false,
            });
            out.push(Row {
                coeffs: down,
                rel: Relation::Le,
                rhs: rhs_down,
                from_ge: false,
            });
        }
        *rows = out;
    }
    if !rec.rows.is_empty() {
        q.parts_mut().5.push(rec.clone());
    }
    (q, rec)
}

/// Writes each selected free variable `x` as `x+ - x-` with `x+, x- >= 0`.
/// `x+` keeps the column position, `x-` columns are appended in selection
/// order. Every coefficient in the column, objective included, is duplicated;
/// the `x-` copy is read negated.
pub fn substitute_nonneg(p: &IlpProgram, vars: &[usize]) -> Result<(IlpProgram, TransformRecord)> {
    let n = p.num_vars();
    let mut selected: Vec<usize> = vars.to_vec();
    selected.sort_unstable();
    selected.dedup();
    for &j in &selected {
        if j >= n {
            return Err(Error::DimensionMismatch {
                what: "variable index",
                expected: n,
                found: j,
            });
        }
        if p.vars()[j].sign != Sign::Free {
            return Err(Error::NotFree(j));
        }
    }
    let mut minter = Minter::for_program(p);
    let mut rec = TransformRecord::empty(TransformKind::NonnegSub);
    let mut q = p.clone();
    let mut columns: Vec<ColumnMap> = (0..n).map(ColumnMap::Keep).collect();
    {
        let (_, table, objective, rows, vars_out, _) = q.parts_mut();
        let mut dup = |e: Entry| {
            let iv = table.remove(&e.id).expect("entry in table");
            let (a, b) = (minter.mint(), minter.mint());
            table.insert(a, iv.clone());
            table.insert(b, iv);
            rec.links.push(IdLink {
                source: e.id,
                targets: vec![a, b],
            });
            (
                Entry {
                    id: a,
                    negated: e.negated,
                },
                Entry {
                    id: b,
                    negated: !e.negated,
                },
            )
        };
        for (k, &j) in selected.iter().enumerate() {
            let (pos, neg) = dup(objective[j]);
            objective[j] = pos;
            objective.push(neg);
            for row in rows.iter_mut() {
                let (pos, neg) = dup(row.coeffs[j]);
                row.coeffs[j] = pos;
                row.coeffs.push(neg);
            }
            let name = vars_out[j].name.clone();
            vars_out[j] = Var::new(format!("{name}+"), Sign::NonNeg);
            vars_out.push(Var::new(format!("{name}-"), Sign::NonNeg));
            columns[j] = ColumnMap::Split { pos: j, neg: n + k };
        }
    }
    rec.columns = selected.clone();
    rec.map = SolutionMap::Substitute {
        columns,
        width: n + selected.len(),
    };
    if !selected.is_empty() {
        q.parts_mut().5.push(rec.clone());
    }
    Ok((q, rec))
}

/// Indices of all free variables.
pub fn free_vars(p: &IlpProgram) -> Vec<usize> {
    (0..p.num_vars())
        .filter(|&j| p.vars()[j].sign == Sign::Free)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{solve, LpOutcome, Sense};
    use crate::model::RowSpec;
    use crate::rational::int;

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

    #[test]
    fn flip_negates_objective_intervals() {
        let p = IlpProgram::new(
            Sense::Max,
            vec![iv(0, 1)],
            vec![],
            vec![Var::new("x", Sign::NonNeg)],
        )
        .unwrap();
        let (q, rec) = flip_objective(&p);
        assert_eq!(q.sense(), Sense::Min);
        assert_eq!(q.objective()[0], iv(-1, 0));
        assert_eq!(rec.duplicated(), 0);
        assert!(rec.new_ids().is_empty());
        let (back, _) = flip_objective(&q);
        assert!(back.same_program(&p));
        assert_eq!(back.provenance().len(), 2);
    }

    #[test]
    fn flip_negates_values() {
        let p = IlpProgram::new(
            Sense::Max,
            vec![pt(3)],
            vec![RowSpec::new(vec![pt(1)], Relation::Le, pt(2))],
            vec![Var::new("x", Sign::Free)],
        )
        .unwrap();
        let (q, _) = flip_objective(&p);
        assert_eq!(solve(&p.center_scenario().lp).value(), Some(&int(6)));
        assert_eq!(solve(&q.center_scenario().lp).value(), Some(&int(-6)));
    }

    #[test]
    fn slack_rows_become_equations() {
        let p = example_one();
        let (q, rec) = add_slack(&p);
        assert_eq!(q.num_vars(), 3);
        assert_eq!(q.rows()[1].rel, Relation::Eq);
        assert_eq!(q.row_coeffs(1)[2], pt(1));
        assert_eq!(q.row_coeffs(0)[2], pt(0));
        assert_eq!(q.vars()[2].sign, Sign::NonNeg);
        assert_eq!(rec.duplicated(), 0);
        // x = (1, 1) has zero slack on x2 <= 1 in every scenario.
        for s in p.endpoint_scenarios(4).unwrap() {
            let y = rec.forward(&[int(1), int(1)], &s.lp);
            assert_eq!(y[2], int(0));
        }
        let (same, rec) = add_slack(&q);
        assert!(same.same_program(&q));
        assert!(rec.rows.is_empty());
    }

    #[test]
    fn split_duplicates_every_equation_coefficient() {
        let p = example_one();
        let (q, rec) = split_equations(&p);
        assert_eq!(q.num_rows(), 3);
        assert_eq!(q.row_coeffs(0), vec![iv(0, 1), pt(-1)]);
        assert_eq!(q.row_coeffs(1), vec![iv(-1, 0), pt(1)]);
        assert_eq!(q.rhs()[1], pt(0));
        assert_eq!(rec.duplicated(), 3);
        assert_eq!(rec.new_ids().len(), 6);
        let a1 = q.rows()[0].coeffs[0].id;
        let a2 = q.rows()[1].coeffs[0].id;
        assert_ne!(a1, a2);
        assert!(!p.table().contains_key(&a1) && !p.table().contains_key(&a2));

        // The scenario "1 x1 - x2 <= 0, 0 x1 - x2 >= 0" exists only after splitting.
        let mut a = q.assignment_with(|iv| iv.lo().clone());
        a.insert(a1, int(1));
        a.insert(a2, int(0));
        let s = q.scenario(&a).unwrap();
        match solve(&s.lp) {
            LpOutcome::Optimal { value, primal, .. } => {
                assert_eq!(value, int(0));
                assert_eq!(primal, vec![int(0), int(0)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn split_crisp_equation() {
        let p = IlpProgram::new(
            Sense::Min,
            vec![pt(0)],
            vec![RowSpec::new(vec![pt(1)], Relation::Eq, pt(1))],
            vec![Var::new("x", Sign::Free)],
        )
        .unwrap();
        let (q, _) = split_equations(&p);
        assert_eq!(q.endpoint_scenarios(1).unwrap().count(), 1);
        let s = q.center_scenario();
        assert!(s.lp.is_feasible(&[int(1)]));
        assert!(!s.lp.is_feasible(&[int(2)]));
    }

    #[test]
    fn substitution_example_three() {
        // min [0,1] x  s.t. x >= 1, x free
        let p = IlpProgram::new(
            Sense::Min,
            vec![iv(0, 1)],
            vec![RowSpec::new(vec![pt(1)], Relation::Ge, pt(1))],
            vec![Var::new("x", Sign::Free)],
        )
        .unwrap();
        let (q, rec) = substitute_nonneg(&p, &[0]).unwrap();
        assert_eq!(q.num_vars(), 2);
        assert_eq!(q.objective().as_slice(), &[iv(0, 1), iv(-1, 0)]);
        assert_eq!(q.row_coeffs(0), vec![pt(-1), pt(1)]);
        assert_eq!(rec.duplicated(), 2);
        assert_eq!(q.vars()[0].name, "x+");
        assert_eq!(q.vars()[1].name, "x-");

        // objective 0 x+ - 1 x- is unbounded
        let mut a = q.assignment_with(|iv| iv.lo().clone());
        a.insert(q.objective_entries()[1].id, int(1));
        let s = q.scenario(&a).unwrap();
        assert!(matches!(solve(&s.lp), LpOutcome::Unbounded { .. }));

        assert_eq!(rec.forward(&[int(-3)], &s.lp), vec![int(0), int(3)]);
        assert_eq!(rec.forward(&[int(2)], &s.lp), vec![int(2), int(0)]);
        assert_eq!(rec.backward(&[int(5), int(2)]), vec![int(3)]);
    }

    #[test]
    fn substitution_rejects_sign_restricted() {
        assert!(matches!(substitute_nonneg(&example_one(), &[1]), Err(Error::NotFree(1))));
    }

    #[test]
    fn embedding_keeps_optimal_value() {
        let p = example_one();
        let (q, rec) = split_equations(&p);
        for s in p.endpoint_scenarios(4).unwrap() {
            let t = q.scenario(&rec.embed(&s.assignment)).unwrap();
            let (a, b) = (solve(&s.lp), solve(&t.lp));
            assert_eq!(a.value(), b.value());
            assert_eq!(
                matches!(a, LpOutcome::Unbounded { .. }),
                matches!(b, LpOutcome::Unbounded { .. })
            );
        }
    }
}
