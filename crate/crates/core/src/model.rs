//! Interval linear programs as families of point LPs.
//!
//! Every interval coefficient lives once in a coefficient table under a
//! [`CoefId`]. The objective, constraint rows and right-hand sides hold
//! [`Entry`] references into that table; an entry may read its coefficient
//! negated. A scenario assigns one rational per table id, so two entries
//! that share an id always move together, and entries with distinct ids
//! move independently. Transformations that duplicate a coefficient mint new
//! ids, which is exactly where the dependency problem shows up.

use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::interval::{endpoint_point, endpoint_scenarios, Interval, IntervalMatrix, IntervalVector};
use crate::lp::{PointLp, Relation, Sense, Sign};
use crate::rational::Rational;
use crate::transforms::TransformRecord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoefId(pub u32);

impl fmt::Display for CoefId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A reference to a table coefficient, possibly read with flipped sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Entry {
    pub id: CoefId,
    pub negated: bool,
}

impl Entry {
    pub fn new(id: CoefId) -> Self {
        Entry { id, negated: false }
    }

    pub fn negate(self) -> Self {
        Entry {
            id: self.id,
            negated: !self.negated,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Row {
    pub coeffs: Vec<Entry>,
    /// Only `Eq` or `Le`; `>=` rows are negated into `<=` at construction.
    pub rel: Relation,
    pub rhs: Entry,
    /// Set when the row was written as `>=` and negated on the way in.
    pub from_ge: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Var {
    pub name: String,
    pub sign: Sign,
}

impl Var {
    pub fn new(name: impl Into<String>, sign: Sign) -> Self {
        Var {
            name: name.into(),
            sign,
        }
    }
}

/// Constraint row as written by the user, before normalization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowSpec {
    pub coeffs: Vec<Interval>,
    pub rel: Relation,
    pub rhs: Interval,
}

impl RowSpec {
    pub fn new(coeffs: Vec<Interval>, rel: Relation, rhs: Interval) -> Self {
        RowSpec { coeffs, rel, rhs }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormKind {
    /// All rows `=`, all variables `>= 0`.
    TypeI,
    /// All rows `<=`, all variables free.
    TypeII,
    /// All rows `<=`, all variables `>= 0`.
    TypeIII,
    General,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FormClass {
    pub kind: FormKind,
    /// No interval entry in the constraint matrix.
    pub fixed_matrix: bool,
}

pub type Assignment = BTreeMap<CoefId, Rational>;

/// One member of the family: a value for every coefficient and the
/// resulting point LP.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    pub assignment: Assignment,
    pub lp: PointLp,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IlpProgram {
    pub name: String,
    sense: Sense,
    table: BTreeMap<CoefId, Interval>,
    objective: Vec<Entry>,
    rows: Vec<Row>,
    vars: Vec<Var>,
    provenance: Vec<TransformRecord>,
}

impl IlpProgram {
    /// Builds a program with fresh sequential ids: objective first, then each
    /// row's coefficients followed by its right-hand side.
    pub fn new(
        sense: Sense,
        objective: Vec<Interval>,
        rows: Vec<RowSpec>,
        vars: Vec<Var>,
    ) -> Result<Self> {
        let n = vars.len();
        if objective.len() != n {
            return Err(Error::DimensionMismatch {
                what: "objective",
                expected: n,
                found: objective.len(),
            });
        }
        let mut table = BTreeMap::new();
        let mut next = 0u32;
        let mut mint = |iv: Interval, table: &mut BTreeMap<CoefId, Interval>| {
            let id = CoefId(next);
            next += 1;
            table.insert(id, iv);
            Entry::new(id)
        };
        let objective: Vec<Entry> = objective.into_iter().map(|iv| mint(iv, &mut table)).collect();
        let mut out_rows = Vec::with_capacity(rows.len());
        for spec in rows {
            if spec.coeffs.len() != n {
                return Err(Error::DimensionMismatch {
                    what: "constraint row",
                    expected: n,
                    found: spec.coeffs.len(),
                });
            }
            let ge = spec.rel == Relation::Ge;
            let mut coeffs: Vec<Entry> = spec.coeffs.into_iter().map(|iv| mint(iv, &mut table)).collect();
            let mut rhs = mint(spec.rhs, &mut table);
            if ge {
                coeffs.iter_mut().for_each(|e| *e = e.negate());
                rhs = rhs.negate();
            }
            out_rows.push(Row {
                coeffs,
                rel: if ge { Relation::Le } else { spec.rel },
                rhs,
                from_ge: ge,
            });
        }
        Ok(IlpProgram {
            name: String::new(),
            sense,
            table,
            objective,
            rows: out_rows,
            vars,
            provenance: Vec::new(),
        })
    }

    /// Assembles a program from an explicit coefficient table. Every table
    /// id must be referenced exactly once.
    pub fn from_parts(
        name: String,
        sense: Sense,
        table: BTreeMap<CoefId, Interval>,
        objective: Vec<Entry>,
        rows: Vec<Row>,
        vars: Vec<Var>,
        provenance: Vec<TransformRecord>,
    ) -> Result<Self> {
        let p = Self::from_parts_aliased(name, sense, table, objective, rows, vars, provenance)?;
        let mut seen = BTreeSet::new();
        for e in p.entries() {
            if !seen.insert(e.id) {
                return Err(Error::Malformed(alloc::format!(
                    "coefficient {} is referenced more than once",
                    e.id
                )));
            }
        }
        Ok(p)
    }

    /// Like [`IlpProgram::from_parts`] but lets several entries share one
    /// coefficient, coupling them in every scenario.
    pub fn from_parts_aliased(
        name: String,
        sense: Sense,
        table: BTreeMap<CoefId, Interval>,
        objective: Vec<Entry>,
        rows: Vec<Row>,
        vars: Vec<Var>,
        provenance: Vec<TransformRecord>,
    ) -> Result<Self> {
        let n = vars.len();
        if objective.len() != n {
            return Err(Error::DimensionMismatch {
                what: "objective",
                expected: n,
                found: objective.len(),
            });
        }
        for row in &rows {
            if row.coeffs.len() != n {
                return Err(Error::DimensionMismatch {
                    what: "constraint row",
                    expected: n,
                    found: row.coeffs.len(),
                });
            }
            if row.rel == Relation::Ge {
                return Err(Error::Malformed("stored rows must be `=` or `<=`".into()));
            }
        }
        let p = IlpProgram {
            name,
            sense,
            table,
            objective,
            rows,
            vars,
            provenance,
        };
        let mut used = BTreeSet::new();
        for e in p.entries() {
            if !p.table.contains_key(&e.id) {
                return Err(Error::UnknownCoefficient(e.id));
            }
            used.insert(e.id);
        }
        if let Some(id) = p.table.keys().find(|id| !used.contains(*id)) {
            return Err(Error::Malformed(alloc::format!(
                "coefficient {id} is never referenced"
            )));
        }
        Ok(p)
    }

    /// Whether some coefficient is referenced by more than one entry.
    pub fn shares_coefficients(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.entries().any(|e| !seen.insert(e.id))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn objective_entries(&self) -> &[Entry] {
        &self.objective
    }

    pub fn table(&self) -> &BTreeMap<CoefId, Interval> {
        &self.table
    }

    pub fn provenance(&self) -> &[TransformRecord] {
        &self.provenance
    }

    /// All entries in layout order: objective, then rows (coefficients, rhs).
    pub fn entries(&self) -> impl Iterator<Item = &Entry> {
        self.objective.iter().chain(
            self.rows
                .iter()
                .flat_map(|r| r.coeffs.iter().chain(core::iter::once(&r.rhs))),
        )
    }

    /// Effective interval of an entry (negated when the entry says so).
    pub fn interval(&self, e: &Entry) -> Interval {
        let iv = &self.table[&e.id];
        if e.negated {
            -iv
        } else {
            iv.clone()
        }
    }

    pub fn objective(&self) -> IntervalVector {
        IntervalVector::new(self.objective.iter().map(|e| self.interval(e)).collect())
    }

    pub fn row_coeffs(&self, i: usize) -> Vec<Interval> {
        self.rows[i].coeffs.iter().map(|e| self.interval(e)).collect()
    }

    pub fn matrix(&self) -> IntervalMatrix {
        let rows = (0..self.num_rows()).map(|i| self.row_coeffs(i)).collect();
        IntervalMatrix::from_rows(rows, self.num_vars()).expect("rows have program width")
    }

    pub fn rhs(&self) -> IntervalVector {
        IntervalVector::new(self.rows.iter().map(|r| self.interval(&r.rhs)).collect())
    }

    pub fn is_fixed_matrix(&self) -> bool {
        self.rows
            .iter()
            .flat_map(|r| &r.coeffs)
            .all(|e| self.table[&e.id].is_degenerate())
    }

    /// Number of non-degenerate table coefficients, the `K` in `2^K` endpoint scenarios.
    pub fn nondegenerate_count(&self) -> usize {
        self.table.values().filter(|iv| !iv.is_degenerate()).count()
    }

    pub fn classify(&self) -> FormClass {
        let all_eq = self.rows.iter().all(|r| r.rel == Relation::Eq);
        let all_le = self.rows.iter().all(|r| r.rel == Relation::Le);
        let all_nonneg = self.vars.iter().all(|v| v.sign == Sign::NonNeg);
        let all_free = self.vars.iter().all(|v| v.sign == Sign::Free);
        // With no rows, `<=` forms take precedence over type I.
        let kind = if all_le && all_free {
            FormKind::TypeII
        } else if all_le && all_nonneg {
            FormKind::TypeIII
        } else if all_eq && all_nonneg {
            FormKind::TypeI
        } else {
            FormKind::General
        };
        FormClass {
            kind,
            fixed_matrix: self.is_fixed_matrix(),
        }
    }

    /// Checks an assignment against the table and builds the scenario LP.
    pub fn scenario(&self, assignment: &Assignment) -> Result<Scenario> {
        if let Some(id) = assignment.keys().find(|id| !self.table.contains_key(*id)) {
            return Err(Error::UnknownCoefficient(*id));
        }
        for (id, iv) in &self.table {
            match assignment.get(id) {
                None => return Err(Error::MissingCoefficient(*id)),
                Some(v) if !iv.contains(v) => {
                    return Err(Error::OutOfInterval {
                        id: *id,
                        value: v.clone(),
                    })
                }
                Some(_) => {}
            }
        }
        Ok(Scenario {
            assignment: assignment.clone(),
            lp: self.point_lp(assignment),
        })
    }

    fn point_lp(&self, assignment: &Assignment) -> PointLp {
        let value = |e: &Entry| {
            let v = assignment[&e.id].clone();
            if e.negated {
                -v
            } else {
                v
            }
        };
        PointLp {
            sense: self.sense,
            objective: self.objective.iter().map(value).collect(),
            matrix: self.rows.iter().map(|r| r.coeffs.iter().map(value).collect()).collect(),
            relations: self.rows.iter().map(|r| r.rel).collect(),
            rhs: self.rows.iter().map(|r| value(&r.rhs)).collect(),
            signs: self.vars.iter().map(|v| v.sign).collect(),
        }
    }

    /// Assignment picking, for every coefficient, `pick(interval)`.
    pub fn assignment_with(&self, mut pick: impl FnMut(&Interval) -> Rational) -> Assignment {
        self.table.iter().map(|(id, iv)| (*id, pick(iv))).collect()
    }

    pub fn center_scenario(&self) -> Scenario {
        let a = self.assignment_with(Interval::center);
        Scenario {
            lp: self.point_lp(&a),
            assignment: a,
        }
    }

    /// `2^K`, or `None` when it does not fit in a `u64`.
    pub fn endpoint_count(&self) -> Option<u64> {
        let k = self.nondegenerate_count();
        (k < 64).then(|| 1u64 << k)
    }

    /// The `code`-th endpoint scenario in table-id order (highest id varies
    /// fastest). `code` must be below [`IlpProgram::endpoint_count`].
    pub fn endpoint_scenario(&self, code: u64) -> Scenario {
        let intervals: Vec<Interval> = self.table.values().cloned().collect();
        let point = endpoint_point(&intervals, code);
        let assignment: Assignment = self.table.keys().copied().zip(point).collect();
        Scenario {
            lp: self.point_lp(&assignment),
            assignment,
        }
    }

    /// All endpoint scenarios in [`IlpProgram::endpoint_scenario`] order.
    pub fn endpoint_scenarios(&self, cap: u64) -> Result<impl Iterator<Item = Scenario> + '_> {
        let intervals: Vec<Interval> = self.table.values().cloned().collect();
        let total = endpoint_scenarios(&intervals, cap)?.total();
        Ok((0..total).map(move |code| self.endpoint_scenario(code)))
    }

    pub(crate) fn parts_mut(
        &mut self,
    ) -> (
        &mut Sense,
        &mut BTreeMap<CoefId, Interval>,
        &mut Vec<Entry>,
        &mut Vec<Row>,
        &mut Vec<Var>,
        &mut Vec<TransformRecord>,
    ) {
        (
            &mut self.sense,
            &mut self.table,
            &mut self.objective,
            &mut self.rows,
            &mut self.vars,
            &mut self.provenance,
        )
    }

    /// Smallest id not yet used by the table.
    pub(crate) fn fresh_id(&self) -> u32 {
        self.table.keys().next_back().map_or(0, |id| id.0 + 1)
    }

    /// Same family of scenarios and layout, ignoring name and provenance.
    pub fn same_program(&self, other: &IlpProgram) -> bool {
        self.sense == other.sense
            && self.table == other.table
            && self.objective == other.objective
            && self.rows == other.rows
            && self.vars == other.vars
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{solve, LpOutcome};
    use crate::rational::int;
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

    #[test]
    fn classification() {
        let c = example_one().classify();
        assert_eq!(c.kind, FormKind::General);
        assert!(!c.fixed_matrix);

        let p10b = IlpProgram::new(
            Sense::Min,
            vec![pt(-1)],
            vec![RowSpec::new(vec![pt(1)], Relation::Eq, iv(0, 1))],
            vec![Var::new("y", Sign::Free)],
        )
        .unwrap();
        assert_eq!(
            p10b.classify(),
            FormClass {
                kind: FormKind::General,
                fixed_matrix: true
            }
        );

        let t2 = IlpProgram::new(
            Sense::Min,
            vec![pt(1), pt(1)],
            vec![RowSpec::new(vec![iv(1, 2), pt(1)], Relation::Le, pt(3))],
            vec![Var::new("a", Sign::Free), Var::new("b", Sign::Free)],
        )
        .unwrap();
        assert_eq!(t2.classify().kind, FormKind::TypeII);
    }

    #[test]
    fn scenario_from_assignment() {
        let p = example_one();
        let a = p.assignment_with(|iv| iv.hi().clone());
        let s = p.scenario(&a).unwrap();
        match solve(&s.lp) {
            LpOutcome::Optimal { value, primal, .. } => {
                assert_eq!(value, int(-1));
                assert_eq!(primal, vec![int(1), int(1)]);
            }
            other => panic!("{other:?}"),
        }

        let mut bad = a.clone();
        bad.insert(CoefId(2), int(2));
        assert!(matches!(p.scenario(&bad), Err(Error::OutOfInterval { .. })));
        let mut missing = a;
        missing.remove(&CoefId(0));
        assert!(matches!(p.scenario(&missing), Err(Error::MissingCoefficient(CoefId(0)))));
    }

    #[test]
    fn crisp_program_has_one_scenario() {
        let p = IlpProgram::new(
            Sense::Max,
            vec![pt(3)],
            vec![RowSpec::new(vec![pt(1)], Relation::Le, pt(2))],
            vec![Var::new("x", Sign::Free)],
        )
        .unwrap();
        let all: Vec<_> = p.endpoint_scenarios(1).unwrap().collect();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0], p.center_scenario());
    }

    #[test]
    fn ge_rows_are_negated() {
        let p = IlpProgram::new(
            Sense::Min,
            vec![iv(0, 1)],
            vec![RowSpec::new(vec![pt(1)], Relation::Ge, pt(1))],
            vec![Var::new("x", Sign::Free)],
        )
        .unwrap();
        assert_eq!(p.rows()[0].rel, Relation::Le);
        assert!(p.rows()[0].from_ge);
        assert_eq!(p.row_coeffs(0), vec![pt(-1)]);
        assert_eq!(p.rhs()[0], pt(-1));
    }

    #[test]
    fn aliasing_is_opt_in() {
        let p = example_one();
        let mut rows = p.rows().to_vec();
        rows[1].coeffs[0] = rows[0].coeffs[0];
        let mut table = p.table().clone();
        table.remove(&rows[0].coeffs[0].id.clone());
        table.insert(rows[0].coeffs[0].id, iv(0, 1));
        let unused = p.rows()[1].coeffs[0].id;
        table.remove(&unused);
        let args = (
            String::new(),
            Sense::Min,
            table,
            p.objective_entries().to_vec(),
            rows,
            p.vars().to_vec(),
        );
        assert!(IlpProgram::from_parts(
            args.0.clone(),
            args.1,
            args.2.clone(),
            args.3.clone(),
            args.4.clone(),
            args.5.clone(),
            Vec::new()
        )
        .is_err());
        assert!(IlpProgram::from_parts_aliased(args.0, args.1, args.2, args.3, args.4, args.5, Vec::new()).is_ok());
    }
}
