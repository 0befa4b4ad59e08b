use std::fmt;

use ilp_core::{IlpProgram, Rational};
use serde::{Deserialize, Serialize};

use crate::format::{program_doc, texts, ProgramDoc};
use crate::mutation::Mutation;

/// A failing instance, complete enough to rerun the check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub trial: usize,
    pub program: ProgramDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<String>>,
    pub detail: String,
}

impl Counterexample {
    pub fn new(trial: usize, p: &IlpProgram, point: Option<&[Rational]>, detail: String) -> Self {
        Counterexample {
            trial,
            program: program_doc(p),
            point: point.map(texts),
            detail,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    /// Theorem suite or fixture name.
    pub theorem: String,
    #[serde(default)]
    pub mutation: Mutation,
    pub seed: u64,
    pub trials: usize,
    /// Individual comparisons made across all trials.
    pub checks: usize,
    /// Generated instances thrown away for exceeding the enumeration cap or
    /// for offering nothing to compare.
    pub regenerated: usize,
    pub failures: Vec<Counterexample>,
    pub elapsed_ms: u64,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for TheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} ({} trials, {} checks, {} regenerated, {} failures, seed {}, {} ms",
            self.theorem,
            if self.passed() { "pass" } else { "FAIL" },
            self.trials,
            self.checks,
            self.regenerated,
            self.failures.len(),
            self.seed,
            self.elapsed_ms,
        )?;
        if self.mutation != Mutation::None {
            write!(f, ", mutation {}", self.mutation.name())?;
        }
        f.write_str(")")?;
        for cx in &self.failures {
            write!(f, "\n  trial {}: {}", cx.trial, cx.detail)?;
        }
        Ok(())
    }
}

/// Collects the outcome of individual comparisons.
#[derive(Debug, Default)]
pub struct Checks {
    pub count: usize,
    pub failures: Vec<String>,
}

impl Checks {
    pub fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.count += 1;
        if !ok {
            self.failures.push(detail());
        }
    }

    pub fn fail(&mut self, detail: String) {
        self.count += 1;
        self.failures.push(detail);
    }
}
