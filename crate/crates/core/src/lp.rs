//! Exact two-phase simplex for point linear programs.
//!
//! Every outcome carries a certificate that can be checked independently
//! with [`certify`]:
//!
//! * `Optimal` holds a primal point and a dual vector with equal objective
//!   values.
//! * `Infeasible` holds a Farkas vector.
//! * `Unbounded` holds a feasible point together with an improving ray.
//!
//! Dual sign conventions (textbook, per objective sense):
//!
//! | primal (min)        | dual (max `b^T y`)     |
//! |---------------------|------------------------|
//! | row `a x <= b`      | `y <= 0`               |
//! | row `a x >= b`      | `y >= 0`               |
//! | row `a x = b`       | `y` free               |
//! | `x_j >= 0`          | `(A^T y)_j <= c_j`     |
//! | `x_j` free          | `(A^T y)_j = c_j`      |
//!
//! For a maximization primal all dual inequalities flip and the dual
//! minimizes `b^T y`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::sync::atomic::{AtomicUsize, Ordering};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sense {
    Min,
    Max,
}

impl Sense {
    pub fn flipped(self) -> Sense {
        match self {
            Sense::Min => Sense::Max,
            Sense::Max => Sense::Min,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

impl Relation {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Eq => lhs == rhs,
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Free,
    NonNeg,
}

/// A linear program with crisp rational data:
/// optimize `c^T x` subject to `A_i x (rel_i) b_i` and per-variable sign restrictions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointLp {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub matrix: Vec<Vec<Rational>>,
    pub relations: Vec<Relation>,
    pub rhs: Vec<Rational>,
    pub signs: Vec<Sign>,
}

impl PointLp {
    pub fn new(
        sense: Sense,
        objective: Vec<Rational>,
        matrix: Vec<Vec<Rational>>,
        relations: Vec<Relation>,
        rhs: Vec<Rational>,
        signs: Vec<Sign>,
    ) -> Result<Self> {
        let n = objective.len();
        let m = matrix.len();
        let dims = [
            ("sign restrictions", n, signs.len()),
            ("relations", m, relations.len()),
            ("right-hand side", m, rhs.len()),
        ];
        for (what, expected, found) in dims {
            if expected != found {
                return Err(Error::DimensionMismatch {
                    what,
                    expected,
                    found,
                });
            }
        }
        if let Some(row) = matrix.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                what: "constraint row",
                expected: n,
                found: row.len(),
            });
        }
        Ok(PointLp {
            sense,
            objective,
            matrix,
            relations,
            rhs,
            signs,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        dot(&self.objective, x)
    }

    pub fn row_activity(&self, x: &[Rational]) -> Vec<Rational> {
        self.matrix.iter().map(|row| dot(row, x)).collect()
    }

    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        if x.len() != self.num_vars() {
            return false;
        }
        let signs_ok = self
            .signs
            .iter()
            .zip(x)
            .all(|(s, v)| *s == Sign::Free || !v.is_negative());
        signs_ok
            && self
                .matrix
                .iter()
                .zip(&self.relations)
                .zip(&self.rhs)
                .all(|((row, rel), b)| rel.holds(&dot(row, x), b))
    }

    /// `A^T y`.
    pub fn transpose_times(&self, y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.num_vars()];
        for (row, yi) in self.matrix.iter().zip(y) {
            if yi.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(row) {
                *o += a * yi;
            }
        }
        out
    }
}

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        primal: Vec<Rational>,
        dual: Vec<Rational>,
    },
    /// `farkas` satisfies the dual sign conventions with `c = 0` and `b^T y > 0`.
    Infeasible { farkas: Vec<Rational> },
    /// `point` is feasible and `point + t * ray` stays feasible for all `t >= 0`
    /// while the objective improves without bound.
    Unbounded {
        point: Vec<Rational>,
        ray: Vec<Rational>,
    },
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn is_optimal(&self) -> bool {
        matches!(self, LpOutcome::Optimal { .. })
    }
}

/// Which certificate condition failed in [`certify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateError {
    Dimension,
    PrimalInfeasible,
    DualInfeasible,
    DualityGap,
    ComplementarySlackness,
    FarkasInvalid,
    RayInvalid,
}

impl fmt::Display for CertificateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            CertificateError::Dimension => "certificate has wrong dimension",
            CertificateError::PrimalInfeasible => "primal point violates a constraint",
            CertificateError::DualInfeasible => "dual vector violates a dual constraint",
            CertificateError::DualityGap => "primal and dual objective values differ",
            CertificateError::ComplementarySlackness => "complementary slackness fails",
            CertificateError::FarkasInvalid => "Farkas vector does not prove infeasibility",
            CertificateError::RayInvalid => "ray is not a feasible improving direction",
        };
        f.write_str(msg)
    }
}

impl core::error::Error for CertificateError {}

/// Checks an outcome's certificate against `lp` in exact arithmetic.
pub fn certify(lp: &PointLp, outcome: &LpOutcome) -> core::result::Result<(), CertificateError> {
    let n = lp.num_vars();
    let m = lp.num_rows();
    match outcome {
        LpOutcome::Optimal {
            value,
            primal,
            dual,
        } => {
            if primal.len() != n || dual.len() != m {
                return Err(CertificateError::Dimension);
            }
            if !lp.is_feasible(primal) {
                return Err(CertificateError::PrimalInfeasible);
            }
            if !dual_signs_ok(lp, dual, lp.sense) {
                return Err(CertificateError::DualInfeasible);
            }
            let aty = lp.transpose_times(dual);
            for j in 0..n {
                let ok = match (lp.signs[j], lp.sense) {
                    (Sign::Free, _) => aty[j] == lp.objective[j],
                    (Sign::NonNeg, Sense::Min) => aty[j] <= lp.objective[j],
                    (Sign::NonNeg, Sense::Max) => aty[j] >= lp.objective[j],
                };
                if !ok {
                    return Err(CertificateError::DualInfeasible);
                }
            }
            let primal_value = lp.objective_value(primal);
            if &primal_value != value || dot(&lp.rhs, dual) != primal_value {
                return Err(CertificateError::DualityGap);
            }
            let activity = lp.row_activity(primal);
            for i in 0..m {
                if !(&dual[i] * (&lp.rhs[i] - &activity[i])).is_zero() {
                    return Err(CertificateError::ComplementarySlackness);
                }
            }
            for j in 0..n {
                if !(&primal[j] * (&lp.objective[j] - &aty[j])).is_zero() {
                    return Err(CertificateError::ComplementarySlackness);
                }
            }
            Ok(())
        }
        LpOutcome::Infeasible { farkas } => {
            if farkas.len() != m {
                return Err(CertificateError::Dimension);
            }
            if !dual_signs_ok(lp, farkas, Sense::Min) {
                return Err(CertificateError::FarkasInvalid);
            }
            let aty = lp.transpose_times(farkas);
            let cols_ok = lp.signs.iter().zip(&aty).all(|(s, v)| match s {
                Sign::Free => v.is_zero(),
                Sign::NonNeg => !v.is_positive(),
            });
            if !cols_ok || !dot(&lp.rhs, farkas).is_positive() {
                return Err(CertificateError::FarkasInvalid);
            }
            Ok(())
        }
        LpOutcome::Unbounded { point, ray } => {
            if point.len() != n || ray.len() != n {
                return Err(CertificateError::Dimension);
            }
            if !lp.is_feasible(point) {
                return Err(CertificateError::PrimalInfeasible);
            }
            let zero = Rational::zero();
            let rows_ok = lp
                .matrix
                .iter()
                .zip(&lp.relations)
                .all(|(row, rel)| rel.holds(&dot(row, ray), &zero));
            let signs_ok = lp
                .signs
                .iter()
                .zip(ray)
                .all(|(s, r)| *s == Sign::Free || !r.is_negative());
            let slope = lp.objective_value(ray);
            let improving = match lp.sense {
                Sense::Min => slope.is_negative(),
                Sense::Max => slope.is_positive(),
            };
            if rows_ok && signs_ok && improving {
                Ok(())
            } else {
                Err(CertificateError::RayInvalid)
            }
        }
    }
}

fn dual_signs_ok(lp: &PointLp, y: &[Rational], sense: Sense) -> bool {
    lp.relations.iter().zip(y).all(|(rel, yi)| match (rel, sense) {
        (Relation::Eq, _) => true,
        (Relation::Le, Sense::Min) | (Relation::Ge, Sense::Max) => !yi.is_positive(),
        (Relation::Ge, Sense::Min) | (Relation::Le, Sense::Max) => !yi.is_negative(),
    })
}

/// The textbook dual of `lp` as another point LP.
///
/// Dual variables are one per primal row, in row order. A dual variable that
/// must be nonnegative gets a `NonNeg` sign; one that must be nonpositive is
/// left free and constrained by an explicit row `y_i <= 0`. The first
/// `num_vars` rows of the dual are the column constraints of the primal, the
/// sign rows follow in primal row order.
pub fn dual_of(lp: &PointLp) -> PointLp {
    let n = lp.num_vars();
    let m = lp.num_rows();
    let mut signs = Vec::with_capacity(m);
    let mut sign_rows = Vec::new();
    for (i, rel) in lp.relations.iter().enumerate() {
        let nonpositive = matches!(
            (rel, lp.sense),
            (Relation::Le, Sense::Min) | (Relation::Ge, Sense::Max)
        );
        let nonnegative = matches!(
            (rel, lp.sense),
            (Relation::Ge, Sense::Min) | (Relation::Le, Sense::Max)
        );
        signs.push(if nonnegative { Sign::NonNeg } else { Sign::Free });
        if nonpositive {
            sign_rows.push(i);
        }
    }
    let mut matrix = Vec::with_capacity(n + sign_rows.len());
    let mut relations = Vec::with_capacity(n + sign_rows.len());
    let mut rhs = Vec::with_capacity(n + sign_rows.len());
    for j in 0..n {
        matrix.push(lp.matrix.iter().map(|row| row[j].clone()).collect());
        relations.push(match (lp.signs[j], lp.sense) {
            (Sign::Free, _) => Relation::Eq,
            (Sign::NonNeg, Sense::Min) => Relation::Le,
            (Sign::NonNeg, Sense::Max) => Relation::Ge,
        });
        rhs.push(lp.objective[j].clone());
    }
    for &i in &sign_rows {
        let mut row = vec![Rational::zero(); m];
        row[i] = Rational::one();
        matrix.push(row);
        relations.push(Relation::Le);
        rhs.push(Rational::zero());
    }
    PointLp {
        sense: lp.sense.flipped(),
        objective: lp.rhs.clone(),
        matrix,
        relations,
        rhs,
        signs,
    }
}

static SOLVES: AtomicUsize = AtomicUsize::new(0);
static OPTIMAL: AtomicUsize = AtomicUsize::new(0);
static REJECTED: AtomicUsize = AtomicUsize::new(0);

/// Process-wide counters over every call to [`solve`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub solves: usize,
    /// Optimal outcomes, each of which passed [`certify`].
    pub optimal: usize,
    /// Outcomes whose certificate [`certify`] rejected.
    pub rejected: usize,
}

pub fn solve_stats() -> SolveStats {
    SolveStats {
        solves: SOLVES.load(Ordering::Relaxed),
        optimal: OPTIMAL.load(Ordering::Relaxed),
        rejected: REJECTED.load(Ordering::Relaxed),
    }
}

/// Solves `lp` exactly. Deterministic: identical input gives an identical
/// outcome. Every outcome is checked with [`certify`] before it is returned.
pub fn solve(lp: &PointLp) -> LpOutcome {
    let outcome = Tableau::build(lp).run(lp);
    SOLVES.fetch_add(1, Ordering::Relaxed);
    let verdict = certify(lp, &outcome);
    debug_assert_eq!(verdict, Ok(()));
    match verdict {
        Ok(()) if outcome.is_optimal() => {
            OPTIMAL.fetch_add(1, Ordering::Relaxed);
        }
        Ok(()) => {}
        Err(_) => {
            REJECTED.fetch_add(1, Ordering::Relaxed);
        }
    }
    outcome
}

/// Column of the standard-form program `min c'^T z, A' z = b', z >= 0, b' >= 0`.
#[derive(Clone, Copy, Debug)]
enum Column {
    /// Coefficient `+1` or `-1` times original variable `j`.
    Var { j: usize, negated: bool },
    Slack,
    Artificial,
}

struct Tableau {
    /// `m` rows of `total + 1` entries; the last entry is the basic value.
    rows: Vec<Vec<Rational>>,
    /// Reduced costs; the last entry is minus the objective value.
    cost_row: Vec<Rational>,
    basis: Vec<usize>,
    columns: Vec<Column>,
    /// First artificial column; artificial `i` sits at `art0 + i`.
    art0: usize,
    /// `-1` where the original row was negated to make `b' >= 0`.
    row_sign: Vec<bool>,
}

enum Phase {
    Optimal,
    Unbounded(usize),
}

impl Tableau {
    fn build(lp: &PointLp) -> Tableau {
        let m = lp.num_rows();
        let mut columns = Vec::new();
        for (j, s) in lp.signs.iter().enumerate() {
            columns.push(Column::Var { j, negated: false });
            if *s == Sign::Free {
                columns.push(Column::Var { j, negated: true });
            }
        }
        let mut slack_of_row = vec![None; m];
        for (i, rel) in lp.relations.iter().enumerate() {
            if *rel != Relation::Eq {
                slack_of_row[i] = Some(columns.len());
                columns.push(Column::Slack);
            }
        }
        let art0 = columns.len();
        columns.extend((0..m).map(|_| Column::Artificial));
        let total = columns.len();

        let mut rows = Vec::with_capacity(m);
        let mut row_sign = Vec::with_capacity(m);
        for i in 0..m {
            let mut row = vec![Rational::zero(); total + 1];
            for (k, col) in columns[..art0].iter().enumerate() {
                if let Column::Var { j, negated } = *col {
                    row[k] = if negated {
                        -&lp.matrix[i][j]
                    } else {
                        lp.matrix[i][j].clone()
                    };
                }
            }
            if let Some(k) = slack_of_row[i] {
                row[k] = match lp.relations[i] {
                    Relation::Le => Rational::one(),
                    _ => -Rational::one(),
                };
            }
            row[total] = lp.rhs[i].clone();
            let negate = lp.rhs[i].is_negative();
            if negate {
                for v in row.iter_mut() {
                    *v = -&*v;
                }
            }
            row[art0 + i] = Rational::one();
            rows.push(row);
            row_sign.push(negate);
        }

        // Phase-one costs: 1 on artificials, priced out against the all-artificial basis.
        let mut cost_row = vec![Rational::zero(); total + 1];
        for row in &rows {
            for (k, v) in row.iter().enumerate() {
                if k < art0 || k == total {
                    cost_row[k] -= v;
                }
            }
        }
        Tableau {
            rows,
            cost_row,
            basis: (art0..art0 + m).collect(),
            columns,
            art0,
            row_sign,
        }
    }

    fn width(&self) -> usize {
        self.columns.len()
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let p = self.rows[r][q].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                *v /= &p;
            }
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[q].is_zero() {
                continue;
            }
            let f = row[q].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        if !self.cost_row[q].is_zero() {
            let f = self.cost_row[q].clone();
            for (v, pv) in self.cost_row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = q;
    }

    /// Bland's rule: lowest-index improving column enters, ratio ties leave
    /// by lowest basic index.
    fn iterate(&mut self, allowed: usize) -> Phase {
        let rhs = self.width();
        loop {
            let Some(q) = (0..allowed).find(|&k| self.cost_row[k].is_negative()) else {
                return Phase::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[q].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[q];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, q),
                None => return Phase::Unbounded(q),
            }
        }
    }

    /// Dual vector `c_B^T B^{-1}` of the standard-form program, read off the
    /// artificial columns (their cost is `art_cost` in the current phase).
    fn std_dual(&self, art_cost: &Rational) -> Vec<Rational> {
        (0..self.rows.len())
            .map(|i| art_cost - &self.cost_row[self.art0 + i])
            .collect()
    }

    /// Maps a standard-form dual back to the original row orientation.
    fn orient(&self, y: Vec<Rational>) -> Vec<Rational> {
        y.into_iter()
            .zip(&self.row_sign)
            .map(|(v, neg)| if *neg { -v } else { v })
            .collect()
    }

    fn primal(&self, n: usize) -> Vec<Rational> {
        let rhs = self.width();
        let mut x = vec![Rational::zero(); n];
        for (i, &k) in self.basis.iter().enumerate() {
            if let Column::Var { j, negated } = self.columns[k] {
                if negated {
                    x[j] -= &self.rows[i][rhs];
                } else {
                    x[j] += &self.rows[i][rhs];
                }
            }
        }
        x
    }

    fn run(mut self, lp: &PointLp) -> LpOutcome {
        let n = lp.num_vars();
        let total = self.width();

        // Phase one never reports unbounded: its objective is bounded below by 0.
        let _ = self.iterate(self.art0);
        if self.cost_row[total].is_negative() {
            let farkas = self.orient(self.std_dual(&Rational::one()));
            return LpOutcome::Infeasible { farkas };
        }

        // Drive zero-level artificials out of the basis where possible. Rows
        // left with an artificial are redundant and stay inert.
        for r in 0..self.rows.len() {
            if self.basis[r] < self.art0 {
                continue;
            }
            if let Some(q) = (0..self.art0).find(|&k| !self.rows[r][k].is_zero()) {
                self.pivot(r, q);
            }
        }

        // Phase two, always as a minimization.
        let costs: Vec<Rational> = self
            .columns
            .iter()
            .map(|col| match *col {
                Column::Var { j, negated } => {
                    let c = match lp.sense {
                        Sense::Min => lp.objective[j].clone(),
                        Sense::Max => -&lp.objective[j],
                    };
                    if negated {
                        -c
                    } else {
                        c
                    }
                }
                _ => Rational::zero(),
            })
            .collect();
        let mut cost_row: Vec<Rational> = costs.iter().cloned().chain([Rational::zero()]).collect();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &costs[b];
            if cb.is_zero() {
                continue;
            }
            for (v, t) in cost_row.iter_mut().zip(&self.rows[i]) {
                *v -= cb * t;
            }
        }
        self.cost_row = cost_row;

        let flip = |v: Vec<Rational>| -> Vec<Rational> {
            match lp.sense {
                Sense::Min => v,
                Sense::Max => v.into_iter().map(|e| -e).collect(),
            }
        };
        match self.iterate(self.art0) {
            Phase::Optimal => {
                let primal = self.primal(n);
                let dual = flip(self.orient(self.std_dual(&Rational::zero())));
                let value = lp.objective_value(&primal);
                LpOutcome::Optimal {
                    value,
                    primal,
                    dual,
                }
            }
            Phase::Unbounded(q) => {
                let point = self.primal(n);
                let mut ray = vec![Rational::zero(); n];
                let mut add = |col: Column, amount: Rational| {
                    if let Column::Var { j, negated } = col {
                        if negated {
                            ray[j] -= amount;
                        } else {
                            ray[j] += amount;
                        }
                    }
                };
                add(self.columns[q], Rational::one());
                for (i, &b) in self.basis.iter().enumerate() {
                    add(self.columns[b], -&self.rows[i][q]);
                }
                LpOutcome::Unbounded { point, ray }
            }
        }
    }
}
