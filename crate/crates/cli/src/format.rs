//! JSON documents for programs, scenarios, outcomes and value ranges.
//!
//! Rationals are strings `"p"` or `"p/q"`; extended rationals add `"-inf"`
//! and `"+inf"`. An interval is `["lo", "hi"]` or a single string when crisp.
//! `>=` rows are written in their original orientation.
//!
//! Programs whose coefficient ids are not the sequential ones that a plain
//! file produces (transformed or dualized programs) carry an `ids` section:
//! one id per objective entry, row coefficient and right-hand side, written
//! `"-k"` when the entry reads coefficient `k` negated.

use std::collections::BTreeMap;

use ilp_core::analysis::{ValueRange, Witness};
use ilp_core::rational::{format_rational, parse_rational};
use ilp_core::transforms::{ColumnMap, IdLink, SolutionMap, TransformKind, TransformRecord};
use ilp_core::{
    Assignment, CoefId, Entry, ExtRational, IlpProgram, Interval, LpOutcome, Rational, Relation,
    Row, Scenario, Sense, Sign, Var,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntervalDoc {
    Crisp(String),
    Pair([String; 2]),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SenseDoc {
    Min,
    Max,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelDoc {
    Eq,
    Le,
    Ge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignDoc {
    Free,
    Nonneg,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RowDoc {
    pub coeffs: Vec<IntervalDoc>,
    pub rel: RelDoc,
    pub rhs: IntervalDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarDoc {
    pub name: String,
    pub sign: SignDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RowIdsDoc {
    pub coeffs: Vec<String>,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdsDoc {
    pub objective: Vec<String>,
    pub rows: Vec<RowIdsDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnDoc {
    Keep(usize),
    Split { pos: usize, neg: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapDoc {
    Identity,
    Slack { n: usize, rows: Vec<usize> },
    Substitute { columns: Vec<ColumnDoc>, width: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkDoc {
    pub source: u32,
    pub targets: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordDoc {
    pub kind: String,
    pub rows: Vec<usize>,
    pub columns: Vec<usize>,
    pub links: Vec<LinkDoc>,
    pub minted: Vec<(u32, String)>,
    pub map: MapDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProgramDoc {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub name: String,
    pub sense: SenseDoc,
    pub objective: Vec<IntervalDoc>,
    pub rows: Vec<RowDoc>,
    pub vars: Vec<VarDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ids: Option<IdsDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub provenance: Vec<RecordDoc>,
}

pub fn rational(s: &str) -> CliResult<Rational> {
    Ok(parse_rational(s)?)
}

pub fn text(r: &Rational) -> String {
    format_rational(r)
}

pub fn texts(v: &[Rational]) -> Vec<String> {
    v.iter().map(text).collect()
}

pub fn rationals(v: &[String]) -> CliResult<Vec<Rational>> {
    v.iter().map(|s| rational(s)).collect()
}

/// Parses a comma-separated vector such as `1,1/2,-3`.
pub fn vector(s: &str) -> CliResult<Vec<Rational>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|t| rational(t.trim())).collect()
}

pub fn ext_text(v: &ExtRational) -> String {
    v.to_string()
}

pub fn interval_doc(iv: &Interval) -> IntervalDoc {
    if iv.is_degenerate() {
        IntervalDoc::Crisp(text(iv.lo()))
    } else {
        IntervalDoc::Pair([text(iv.lo()), text(iv.hi())])
    }
}

pub fn interval(doc: &IntervalDoc) -> CliResult<Interval> {
    match doc {
        IntervalDoc::Crisp(s) => Ok(Interval::point(rational(s)?)),
        IntervalDoc::Pair([lo, hi]) => Ok(Interval::new(rational(lo)?, rational(hi)?)?),
    }
}

fn entry_text(e: Entry) -> String {
    if e.negated {
        format!("-{}", e.id.0)
    } else {
        e.id.0.to_string()
    }
}

fn entry(s: &str) -> CliResult<Entry> {
    let (negated, digits) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let id: u32 = digits
        .parse()
        .map_err(|_| CliError::Input(format!("invalid coefficient id {s:?}")))?;
    Ok(Entry {
        id: CoefId(id),
        negated,
    })
}

/// Entries in file order and orientation: objective, then each row's
/// coefficients followed by its right-hand side.
fn file_entries(p: &IlpProgram) -> Vec<Entry> {
    let mut out: Vec<Entry> = p.objective_entries().to_vec();
    for row in p.rows() {
        let orient = |e: &Entry| if row.from_ge { e.negate() } else { *e };
        out.extend(row.coeffs.iter().map(orient));
        out.push(orient(&row.rhs));
    }
    out
}

pub fn program_doc(p: &IlpProgram) -> ProgramDoc {
    let entries = file_entries(p);
    let sequential = entries
        .iter()
        .enumerate()
        .all(|(k, e)| !e.negated && e.id.0 as usize == k);
    let n = p.num_vars();
    let mut it = entries.iter();
    let mut take = |k: usize| -> Vec<Entry> { it.by_ref().take(k).copied().collect() };
    let objective = take(n);
    let rows: Vec<(Vec<Entry>, Entry)> = p
        .rows()
        .iter()
        .map(|_| {
            let mut r = take(n + 1);
            let rhs = r.pop().expect("row has a right-hand side");
            (r, rhs)
        })
        .collect();
    ProgramDoc {
        name: p.name.clone(),
        sense: match p.sense() {
            Sense::Min => SenseDoc::Min,
            Sense::Max => SenseDoc::Max,
        },
        objective: objective.iter().map(|e| interval_doc(&p.interval(e))).collect(),
        rows: p
            .rows()
            .iter()
            .zip(&rows)
            .map(|(row, (coeffs, rhs))| RowDoc {
                coeffs: coeffs.iter().map(|e| interval_doc(&p.interval(e))).collect(),
                rel: match (row.rel, row.from_ge) {
                    (_, true) => RelDoc::Ge,
                    (Relation::Eq, _) => RelDoc::Eq,
                    _ => RelDoc::Le,
                },
                rhs: interval_doc(&p.interval(rhs)),
            })
            .collect(),
        vars: p
            .vars()
            .iter()
            .map(|v| VarDoc {
                name: v.name.clone(),
                sign: match v.sign {
                    Sign::Free => SignDoc::Free,
                    Sign::NonNeg => SignDoc::Nonneg,
                },
            })
            .collect(),
        ids: (!sequential).then(|| IdsDoc {
            objective: objective.iter().map(|e| entry_text(*e)).collect(),
            rows: rows
                .iter()
                .map(|(coeffs, rhs)| RowIdsDoc {
                    coeffs: coeffs.iter().map(|e| entry_text(*e)).collect(),
                    rhs: entry_text(*rhs),
                })
                .collect(),
        }),
        provenance: p.provenance().iter().map(record_doc).collect(),
    }
}

pub fn program(doc: &ProgramDoc) -> CliResult<IlpProgram> {
    let n = doc.vars.len();
    let mismatch = |what: &'static str, expected: usize, found: usize| {
        CliError::from(ilp_core::Error::DimensionMismatch {
            what,
            expected,
            found,
        })
    };
    if doc.objective.len() != n {
        return Err(mismatch("objective", n, doc.objective.len()));
    }
    for r in &doc.rows {
        if r.coeffs.len() != n {
            return Err(mismatch("constraint row", n, r.coeffs.len()));
        }
    }

    let written: Vec<Entry> = match &doc.ids {
        None => (0..n + doc.rows.len() * (n + 1))
            .map(|k| Entry::new(CoefId(k as u32)))
            .collect(),
        Some(ids) => {
            if ids.objective.len() != n {
                return Err(mismatch("objective ids", n, ids.objective.len()));
            }
            if ids.rows.len() != doc.rows.len() {
                return Err(mismatch("row ids", doc.rows.len(), ids.rows.len()));
            }
            let mut out = Vec::new();
            for s in &ids.objective {
                out.push(entry(s)?);
            }
            for r in &ids.rows {
                if r.coeffs.len() != n {
                    return Err(mismatch("row coefficient ids", n, r.coeffs.len()));
                }
                for s in &r.coeffs {
                    out.push(entry(s)?);
                }
                out.push(entry(&r.rhs)?);
            }
            out
        }
    };
    let values: Vec<&IntervalDoc> = doc
        .objective
        .iter()
        .chain(doc.rows.iter().flat_map(|r| r.coeffs.iter().chain(std::iter::once(&r.rhs))))
        .collect();

    let mut table: BTreeMap<CoefId, Interval> = BTreeMap::new();
    for (e, v) in written.iter().zip(&values) {
        let iv = interval(v)?;
        let stored = if e.negated { -iv } else { iv };
        if let Some(prev) = table.insert(e.id, stored.clone()) {
            if prev != stored {
                return Err(CliError::Input(format!(
                    "coefficient {} is given two different intervals",
                    e.id
                )));
            }
        }
    }

    let objective = written[..n].to_vec();
    let rows = doc
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let base = n + i * (n + 1);
            let ge = r.rel == RelDoc::Ge;
            let orient = |e: Entry| if ge { e.negate() } else { e };
            Row {
                coeffs: written[base..base + n].iter().map(|e| orient(*e)).collect(),
                rel: if r.rel == RelDoc::Eq { Relation::Eq } else { Relation::Le },
                rhs: orient(written[base + n]),
                from_ge: ge,
            }
        })
        .collect();
    let vars = doc
        .vars
        .iter()
        .map(|v| {
            Var::new(
                v.name.clone(),
                match v.sign {
                    SignDoc::Free => Sign::Free,
                    SignDoc::Nonneg => Sign::NonNeg,
                },
            )
        })
        .collect();
    let provenance = doc.provenance.iter().map(record).collect::<CliResult<_>>()?;
    let sense = match doc.sense {
        SenseDoc::Min => Sense::Min,
        SenseDoc::Max => Sense::Max,
    };
    Ok(IlpProgram::from_parts(
        doc.name.clone(),
        sense,
        table,
        objective,
        rows,
        vars,
        provenance,
    )?)
}

pub fn parse_program(json: &str) -> CliResult<IlpProgram> {
    let doc: ProgramDoc = serde_json::from_str(json).map_err(CliError::json)?;
    program(&doc)
}

pub fn program_json(p: &IlpProgram) -> String {
    serde_json::to_string_pretty(&program_doc(p)).expect("program documents serialize")
}

pub fn record_doc(r: &TransformRecord) -> RecordDoc {
    RecordDoc {
        kind: r.kind.name().to_string(),
        rows: r.rows.clone(),
        columns: r.columns.clone(),
        links: r
            .links
            .iter()
            .map(|l| LinkDoc {
                source: l.source.0,
                targets: l.targets.iter().map(|t| t.0).collect(),
            })
            .collect(),
        minted: r.minted.iter().map(|(id, v)| (id.0, text(v))).collect(),
        map: match &r.map {
            SolutionMap::Identity => MapDoc::Identity,
            SolutionMap::Slack { n, rows } => MapDoc::Slack {
                n: *n,
                rows: rows.clone(),
            },
            SolutionMap::Substitute { columns, width } => MapDoc::Substitute {
                columns: columns
                    .iter()
                    .map(|c| match *c {
                        ColumnMap::Keep(k) => ColumnDoc::Keep(k),
                        ColumnMap::Split { pos, neg } => ColumnDoc::Split { pos, neg },
                    })
                    .collect(),
                width: *width,
            },
        },
    }
}

pub fn record(doc: &RecordDoc) -> CliResult<TransformRecord> {
    let kind = match doc.kind.as_str() {
        "flip" => TransformKind::Flip,
        "slack" => TransformKind::Slack,
        "split" => TransformKind::SplitEq,
        "nonneg" => TransformKind::NonnegSub,
        other => return Err(CliError::Input(format!("unknown transformation {other:?}"))),
    };
    Ok(TransformRecord {
        kind,
        rows: doc.rows.clone(),
        columns: doc.columns.clone(),
        links: doc
            .links
            .iter()
            .map(|l| IdLink {
                source: CoefId(l.source),
                targets: l.targets.iter().map(|t| CoefId(*t)).collect(),
            })
            .collect(),
        minted: doc
            .minted
            .iter()
            .map(|(id, v)| Ok((CoefId(*id), rational(v)?)))
            .collect::<CliResult<_>>()?,
        map: match &doc.map {
            MapDoc::Identity => SolutionMap::Identity,
            MapDoc::Slack { n, rows } => SolutionMap::Slack {
                n: *n,
                rows: rows.clone(),
            },
            MapDoc::Substitute { columns, width } => SolutionMap::Substitute {
                columns: columns
                    .iter()
                    .map(|c| match *c {
                        ColumnDoc::Keep(k) => ColumnMap::Keep(k),
                        ColumnDoc::Split { pos, neg } => ColumnMap::Split { pos, neg },
                    })
                    .collect(),
                width: *width,
            },
        },
    })
}

/// Scenario assignments are objects keyed by coefficient id.
pub type AssignmentDoc = BTreeMap<u32, String>;

pub fn assignment_doc(a: &Assignment) -> AssignmentDoc {
    a.iter().map(|(id, v)| (id.0, text(v))).collect()
}

pub fn assignment(doc: &AssignmentDoc) -> CliResult<Assignment> {
    doc.iter()
        .map(|(id, v)| Ok((CoefId(*id), rational(v)?)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum OutcomeDoc {
    Optimal {
        value: String,
        primal: Vec<String>,
        dual: Vec<String>,
    },
    Infeasible {
        farkas: Vec<String>,
    },
    Unbounded {
        point: Vec<String>,
        ray: Vec<String>,
    },
}

pub fn outcome_doc(o: &LpOutcome) -> OutcomeDoc {
    match o {
        LpOutcome::Optimal {
            value,
            primal,
            dual,
        } => OutcomeDoc::Optimal {
            value: text(value),
            primal: texts(primal),
            dual: texts(dual),
        },
        LpOutcome::Infeasible { farkas } => OutcomeDoc::Infeasible {
            farkas: texts(farkas),
        },
        LpOutcome::Unbounded { point, ray } => OutcomeDoc::Unbounded {
            point: texts(point),
            ray: texts(ray),
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessDoc {
    Scenario {
        assignment: AssignmentDoc,
        outcome: OutcomeDoc,
    },
    Ray {
        point: Vec<String>,
        direction: Vec<String>,
    },
}

pub fn scenario_doc(s: &Scenario, o: &LpOutcome) -> WitnessDoc {
    WitnessDoc::Scenario {
        assignment: assignment_doc(&s.assignment),
        outcome: outcome_doc(o),
    }
}

pub fn witness_doc(w: &Witness) -> WitnessDoc {
    match w {
        Witness::Scenario { scenario, outcome } => scenario_doc(scenario, outcome),
        Witness::Ray { point, direction } => WitnessDoc::Ray {
            point: texts(point),
            direction: texts(direction),
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeDoc {
    pub lower: String,
    pub upper: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_witness: Option<WitnessDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper_witness: Option<WitnessDoc>,
}

pub fn range_doc(r: &ValueRange) -> RangeDoc {
    RangeDoc {
        lower: ext_text(&r.lower),
        upper: ext_text(&r.upper),
        lower_witness: r.lower_witness.as_ref().map(witness_doc),
        upper_witness: r.upper_witness.as_ref().map(witness_doc),
    }
}
