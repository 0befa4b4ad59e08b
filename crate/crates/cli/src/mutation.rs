//! Deliberately wrong transformations for testing the harness itself.

use ilp_core::transforms::{split_equations, SolutionMap, TransformKind, TransformRecord};
use ilp_core::{IlpProgram, Relation, Row};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    #[default]
    None,
    /// Splits equations but lets both inequalities share the original
    /// coefficient ids, so the copies cannot differ.
    AliasedSplit,
    /// Keeps only the `<=` half of each split equation.
    HalfSplit,
}

impl Mutation {
    pub fn name(self) -> &'static str {
        match self {
            Mutation::None => "none",
            Mutation::AliasedSplit => "aliased-split",
            Mutation::HalfSplit => "half-split",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Mutation::None, Mutation::AliasedSplit, Mutation::HalfSplit]
            .into_iter()
            .find(|m| m.name() == s)
    }

    /// Equation splitting as this mutation performs it.
    pub fn split(self, p: &IlpProgram) -> (IlpProgram, TransformRecord) {
        if self == Mutation::None {
            return split_equations(p);
        }
        let mut rec = TransformRecord {
            kind: TransformKind::SplitEq,
            rows: Vec::new(),
            columns: Vec::new(),
            links: Vec::new(),
            minted: Vec::new(),
            map: SolutionMap::Identity,
        };
        let mut rows = Vec::new();
        for (i, row) in p.rows().iter().enumerate() {
            if row.rel != Relation::Eq {
                rows.push(row.clone());
                continue;
            }
            rec.rows.push(i);
            rows.push(Row {
                rel: Relation::Le,
                ..row.clone()
            });
            if self == Mutation::AliasedSplit {
                rows.push(Row {
                    coeffs: row.coeffs.iter().map(|e| e.negate()).collect(),
                    rel: Relation::Le,
                    rhs: row.rhs.negate(),
                    from_ge: false,
                });
            }
        }
        let table = p
            .table()
            .iter()
            .filter(|(id, _)| {
                p.objective_entries()
                    .iter()
                    .chain(rows.iter().flat_map(|r| r.coeffs.iter().chain([&r.rhs])))
                    .any(|e| e.id == **id)
            })
            .map(|(id, iv)| (*id, iv.clone()))
            .collect();
        let mut provenance = p.provenance().to_vec();
        provenance.push(rec.clone());
        let q = IlpProgram::from_parts_aliased(
            p.name.clone(),
            p.sense(),
            table,
            p.objective_entries().to_vec(),
            rows,
            p.vars().to_vec(),
            provenance,
        )
        .expect("rows reuse existing coefficients");
        (q, rec)
    }
}
