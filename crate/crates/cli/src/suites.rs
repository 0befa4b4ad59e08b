//! Randomized theorem checks.
//!
//! Each suite draws `trials` programs from the generator, runs one exact
//! check per program and records every failing instance in a form that
//! [`replay`] can rerun. Trial `k` draws from stream `k` of a ChaCha8
//! generator seeded with the suite seed, so results do not depend on how
//! trials are scheduled across threads.
//!
//! | id              | claim                                                        |
//! |-----------------|--------------------------------------------------------------|
//! | `thm1`          | splitting equations keeps weak feasibility of every point    |
//! | `thm2`          | fixed matrix: splitting keeps the weakly optimal set         |
//! | `thm3`          | fixed matrix: substitution maps weakly optimal points both ways |
//! | `thm5`          | splitting keeps the best optimal value                       |
//! | `thm7-sub-fbar` | substitution keeps the worst optimal value of `<=` programs with free variables |
//! | `thm8`          | fixed matrix: splitting keeps the finite optimal values      |
//! | `thm9`          | fixed matrix: substitution keeps the finite optimal values   |
//! | `subset-remark` | splitting and substitution only widen the value range        |
//! | `formula-oracle`| fixed matrix: closed-form bounds equal the enumerated ones   |

use std::collections::BTreeSet;
use std::time::Instant;

use ilp_core::analysis::{
    finite_value_backmap, is_weakly_feasible, is_weakly_optimal_fixed, optimal_value_range, Method,
    ValueRange, DEFAULT_CAP,
};
use ilp_core::rational::ratio;
use ilp_core::transforms::{free_vars, substitute_nonneg, TransformRecord};
use ilp_core::{
    solve, ExtRational, IlpProgram, LpOutcome, Rational, Relation, Sense, Sign,
};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{CliError, CliResult};
use crate::format::{program, rationals};
use crate::generate::{generate, GeneratorConfig};
use crate::mutation::Mutation;
use crate::report::{Checks, Counterexample, TheoremReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TheoremId {
    Thm1,
    Thm2,
    Thm3,
    Thm5,
    Thm7SubFbar,
    Thm8,
    Thm9,
    SubsetRemark,
    FormulaOracle,
}

pub const THEOREMS: [TheoremId; 9] = [
    TheoremId::Thm1,
    TheoremId::Thm2,
    TheoremId::Thm3,
    TheoremId::Thm5,
    TheoremId::Thm7SubFbar,
    TheoremId::Thm8,
    TheoremId::Thm9,
    TheoremId::SubsetRemark,
    TheoremId::FormulaOracle,
];

impl TheoremId {
    pub fn name(self) -> &'static str {
        match self {
            TheoremId::Thm1 => "thm1",
            TheoremId::Thm2 => "thm2",
            TheoremId::Thm3 => "thm3",
            TheoremId::Thm5 => "thm5",
            TheoremId::Thm7SubFbar => "thm7-sub-fbar",
            TheoremId::Thm8 => "thm8",
            TheoremId::Thm9 => "thm9",
            TheoremId::SubsetRemark => "subset-remark",
            TheoremId::FormulaOracle => "formula-oracle",
        }
    }

    pub fn parse(s: &str) -> CliResult<Self> {
        THEOREMS
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| CliError::Input(format!("unknown theorem {s:?}")))
    }

    fn generator(self, cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> GeneratorConfig {
        let base = GeneratorConfig {
            vars: rng.gen_range(1..=cfg.max_vars),
            rows: rng.gen_range(1..=cfg.max_rows),
            max_nondegenerate: cfg.max_nondegenerate,
            denominator: cfg.denominator,
            max_width: cfg.denominator,
            seed: rng.gen(),
            ..GeneratorConfig::default()
        };
        match self {
            TheoremId::Thm1 | TheoremId::Thm5 => GeneratorConfig {
                min_eq_rows: 1,
                ..base
            },
            TheoremId::Thm7SubFbar => GeneratorConfig {
                relation_weights: [0, 1, 0],
                free_fraction: 1.0,
                ..base
            },
            TheoremId::Thm2 | TheoremId::Thm8 => GeneratorConfig {
                fixed_matrix: true,
                min_eq_rows: 1,
                ..base
            },
            TheoremId::Thm3 | TheoremId::Thm9 => GeneratorConfig {
                fixed_matrix: true,
                min_free_vars: 1,
                ..base
            },
            TheoremId::FormulaOracle => GeneratorConfig {
                fixed_matrix: true,
                ..base
            },
            TheoremId::SubsetRemark => base,
        }
    }

    /// Runs the check on one instance. `Err` only for instances outside the
    /// suite's limits; zero checks means the instance had nothing to compare.
    pub fn check(self, inst: &Instance, mutation: Mutation, cap: u64) -> CliResult<Checks> {
        let p = &inst.program;
        let mut c = Checks::default();
        let range = |q: &IlpProgram| optimal_value_range(q, Method::Enumerate, cap);
        match self {
            TheoremId::Thm1 => {
                let x = inst
                    .point
                    .as_deref()
                    .ok_or_else(|| CliError::Input("thm1 instances need a point".into()))?;
                let q = mutation.split(p).0;
                let before = is_weakly_feasible(p, x)?;
                let after = is_weakly_feasible(&q, x)?;
                c.check(before == after, || {
                    format!("weakly feasible {before} before the split, {after} after")
                });
                let literal = oettli_prager(p, x);
                c.check(before == literal, || {
                    format!("dot-range test says {before}, absolute-value form says {literal}")
                });
            }
            TheoremId::Thm5 => {
                let (a, b) = (range(p)?, range(&mutation.split(p).0)?);
                let (u, v) = (best(p.sense(), &a), best(p.sense(), &b));
                c.check(u == v, || format!("best value {u} before the split, {v} after"));
            }
            TheoremId::Thm7SubFbar => {
                let q = substitute_nonneg(p, &free_vars(p))?.0;
                let (a, b) = (range(p)?, range(&q)?);
                let (u, v) = (worst(p.sense(), &a), worst(p.sense(), &b));
                c.check(u == v, || {
                    format!("worst value {u} before the substitution, {v} after")
                });
            }
            TheoremId::SubsetRemark => {
                let a = range(p)?;
                let split = mutation.split(p).0;
                let sub = substitute_nonneg(p, &free_vars(p))?.0;
                for (what, q) in [("split", split), ("substitution", sub)] {
                    let b = range(&q)?;
                    c.check(b.lower <= a.lower && a.upper <= b.upper, || {
                        format!(
                            "{what} turns [{}, {}] into [{}, {}]",
                            a.lower, a.upper, b.lower, b.upper
                        )
                    });
                }
            }
            TheoremId::FormulaOracle => match optimal_value_range(p, Method::Both, cap) {
                Ok(_) => c.check(true, String::new),
                Err(e @ ilp_core::Error::RangeDiscrepancy { .. }) => c.fail(e.to_string()),
                Err(e) => return Err(e.into()),
            },
            TheoremId::Thm2 => {
                let q = mutation.split(p).0;
                let mut candidates = endpoint_optima(p, cap)?;
                candidates.extend(endpoint_optima(&q, cap)?);
                for x in &candidates {
                    let before = weakly_optimal(p, x, &mut c)?;
                    let after = weakly_optimal(&q, x, &mut c)?;
                    c.check(before == after, || {
                        format!("{}: weakly optimal {before} before the split, {after} after", show(x))
                    });
                }
            }
            TheoremId::Thm3 => {
                let (q, rec) = substitute_nonneg(p, &free_vars(p))?;
                for s in p.endpoint_scenarios(cap)? {
                    if let LpOutcome::Optimal { primal, .. } = solve(&s.lp) {
                        let y = rec.forward(&primal, &s.lp);
                        let ok = weakly_optimal(&q, &y, &mut c)?;
                        c.check(ok, || {
                            format!("{} is optimal but its image {} is not", show(&primal), show(&y))
                        });
                    }
                }
                for s in q.endpoint_scenarios(cap)? {
                    if let LpOutcome::Optimal { primal, .. } = solve(&s.lp) {
                        let x = rec.backward(&primal);
                        let ok = weakly_optimal(p, &x, &mut c)?;
                        c.check(ok, || {
                            format!("{} is optimal but maps back to {}, which is not", show(&primal), show(&x))
                        });
                    }
                }
            }
            TheoremId::Thm8 => {
                let (q, rec) = mutation.split(p);
                finite_values_kept(p, &q, &rec, cap, &mut c)?;
            }
            TheoremId::Thm9 => {
                let (q, rec) = substitute_nonneg(p, &free_vars(p))?;
                finite_values_kept(p, &q, &rec, cap, &mut c)?;
            }
        }
        Ok(c)
    }
}

/// One generated program, plus a point for the point-wise suites.
#[derive(Clone, Debug)]
pub struct Instance {
    pub program: IlpProgram,
    pub point: Option<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub trials: usize,
    pub seed: u64,
    pub max_vars: usize,
    pub max_rows: usize,
    pub max_nondegenerate: usize,
    pub denominator: u32,
    pub cap: u64,
    pub mutation: Mutation,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            trials: 100,
            seed: 1,
            max_vars: 4,
            max_rows: 3,
            max_nondegenerate: 8,
            denominator: 16,
            cap: DEFAULT_CAP,
            mutation: Mutation::None,
        }
    }
}

const MAX_ATTEMPTS: usize = 1000;

struct Trial {
    checks: usize,
    regenerated: usize,
    failure: Option<Counterexample>,
}

fn run_trial(id: TheoremId, cfg: &SuiteConfig, index: usize) -> CliResult<Trial> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let mut regenerated = 0;
    for _ in 0..MAX_ATTEMPTS {
        let program = generate(&id.generator(cfg, &mut rng))?;
        let point = (id == TheoremId::Thm1).then(|| sample_point(&program, &mut rng, index));
        let inst = Instance { program, point };
        let checks = match id.check(&inst, cfg.mutation, cfg.cap) {
            Err(CliError::Core(ilp_core::Error::CapExceeded { .. })) => {
                regenerated += 1;
                continue;
            }
            Err(e) => Checks {
                count: 1,
                failures: vec![format!("error: {e}")],
            },
            Ok(c) if c.count == 0 => {
                regenerated += 1;
                continue;
            }
            Ok(c) => c,
        };
        let failure = (!checks.failures.is_empty()).then(|| {
            Counterexample::new(
                index,
                &inst.program,
                inst.point.as_deref(),
                checks.failures.join("; "),
            )
        });
        return Ok(Trial {
            checks: checks.count,
            regenerated,
            failure,
        });
    }
    Err(CliError::Undecided(format!(
        "{}: trial {index} found no instance within the cap after {MAX_ATTEMPTS} attempts",
        id.name()
    )))
}

pub fn verify_theorem(id: TheoremId, cfg: &SuiteConfig) -> CliResult<TheoremReport> {
    if cfg.max_vars == 0 || cfg.max_rows == 0 {
        return Err(CliError::Input("dimensions must be positive".into()));
    }
    let start = Instant::now();
    let trials = (0..cfg.trials)
        .into_par_iter()
        .map(|k| run_trial(id, cfg, k))
        .collect::<CliResult<Vec<Trial>>>()?;
    Ok(TheoremReport {
        theorem: id.name().to_string(),
        mutation: cfg.mutation,
        seed: cfg.seed,
        trials: cfg.trials,
        checks: trials.iter().map(|t| t.checks).sum(),
        regenerated: trials.iter().map(|t| t.regenerated).sum(),
        failures: trials.into_iter().filter_map(|t| t.failure).collect(),
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Reruns the check on a stored counterexample. The failure reproduces iff
/// the returned checks contain failures.
pub fn replay(
    id: TheoremId,
    mutation: Mutation,
    cx: &Counterexample,
    cap: u64,
) -> CliResult<Checks> {
    let inst = Instance {
        program: program(&cx.program)?,
        point: cx.point.as_deref().map(rationals).transpose()?,
    };
    id.check(&inst, mutation, cap)
}

fn best(sense: Sense, r: &ValueRange) -> ExtRational {
    match sense {
        Sense::Min => r.lower.clone(),
        Sense::Max => r.upper.clone(),
    }
}

fn worst(sense: Sense, r: &ValueRange) -> ExtRational {
    match sense {
        Sense::Min => r.upper.clone(),
        Sense::Max => r.lower.clone(),
    }
}

fn show(x: &[Rational]) -> String {
    let parts: Vec<String> = x.iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// Optimal points of all endpoint scenarios.
fn endpoint_optima(p: &IlpProgram, cap: u64) -> CliResult<BTreeSet<Vec<Rational>>> {
    Ok(p.endpoint_scenarios(cap)?
        .filter_map(|s| match solve(&s.lp) {
            LpOutcome::Optimal { primal, .. } => Some(primal),
            _ => None,
        })
        .collect())
}

/// Fixed-matrix weak optimality, with the certificate rechecked by solving
/// its scenario.
fn weakly_optimal(p: &IlpProgram, x: &[Rational], c: &mut Checks) -> CliResult<bool> {
    let Some(cert) = is_weakly_optimal_fixed(p, x)? else {
        return Ok(false);
    };
    let lp = &cert.scenario.lp;
    let attained = solve(lp).value() == Some(&lp.objective_value(x));
    c.check(lp.is_feasible(x) && attained, || {
        format!("certificate for {} does not hold up", show(x))
    });
    Ok(true)
}

/// Every finite endpoint value of `q` comes back through the backmap, and
/// every finite endpoint value of `p` survives the embedding.
fn finite_values_kept(
    p: &IlpProgram,
    q: &IlpProgram,
    rec: &TransformRecord,
    cap: u64,
    c: &mut Checks,
) -> CliResult<()> {
    for t in q.endpoint_scenarios(cap)? {
        let LpOutcome::Optimal { value, primal, .. } = solve(&t.lp) else {
            continue;
        };
        match finite_value_backmap(p, q, rec, &t, &primal) {
            Ok(s) => {
                let rebuilt = p.scenario(&s.assignment).map(|r| r.lp == s.lp);
                let v = solve(&s.lp);
                c.check(rebuilt == Ok(true) && v.value() == Some(&value), || {
                    format!("value {value} maps back to a scenario with outcome {v:?}")
                });
            }
            Err(e) => c.fail(format!("value {value} has no backmapped scenario: {e}")),
        }
    }
    for s in p.endpoint_scenarios(cap)? {
        let out = solve(&s.lp);
        let Some(value) = out.value() else { continue };
        let t = q.scenario(&rec.embed(&s.assignment))?;
        let v = solve(&t.lp);
        c.check(v.value() == Some(value), || {
            format!("value {value} becomes {v:?} in the transformed program")
        });
    }
    Ok(())
}

/// Weak feasibility straight from the absolute-value characterization:
/// `|A_c x - b_c| <= A_d |x| + b_d` for equations and
/// `A_c x - A_d |x| <= b_c + b_d` for inequalities.
pub fn oettli_prager(p: &IlpProgram, x: &[Rational]) -> bool {
    let signs_ok = p
        .vars()
        .iter()
        .zip(x)
        .all(|(v, xj)| v.sign == Sign::Free || !xj.is_negative());
    if !signs_ok {
        return false;
    }
    p.rows().iter().enumerate().all(|(i, row)| {
        let a = p.row_coeffs(i);
        let b = p.interval(&row.rhs);
        let center: Rational = a.iter().zip(x).map(|(iv, v)| iv.center() * v).sum();
        let spread: Rational = a.iter().zip(x).map(|(iv, v)| iv.radius() * v.abs()).sum();
        match row.rel {
            Relation::Eq => (center - b.center()).abs() <= spread + b.radius(),
            _ => center - spread <= b.center() + b.radius(),
        }
    })
}

fn small(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    let d = rng.gen_range(1..=4);
    ratio(rng.gen_range(-bound * d..=bound * d), d)
}

/// Even trials perturb a feasible point of a random scenario, odd trials
/// draw uniformly from a box.
fn sample_point(p: &IlpProgram, rng: &mut ChaCha8Rng, trial: usize) -> Vec<Rational> {
    if trial % 2 == 0 {
        let a = p.assignment_with(|iv| iv.lerp(&ratio(rng.gen_range(0..=4), 4)));
        let mut lp = p.scenario(&a).expect("interior assignment").lp;
        lp.objective.iter_mut().for_each(|c| *c = Rational::zero());
        if let LpOutcome::Optimal { primal, .. } = solve(&lp) {
            return primal
                .into_iter()
                .map(|v| if rng.gen_bool(0.5) { v + small(rng, 1) } else { v })
                .collect();
        }
    }
    (0..p.num_vars()).map(|_| small(rng, 3)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_program;
    use ilp_core::rational::int;

    fn quick(id: TheoremId, trials: usize) -> TheoremReport {
        let cfg = SuiteConfig {
            trials,
            seed: 7,
            ..SuiteConfig::default()
        };
        verify_theorem(id, &cfg).unwrap()
    }

    #[test]
    fn every_suite_passes_a_few_trials() {
        for id in THEOREMS {
            let r = quick(id, 8);
            assert!(r.passed(), "{r}");
            assert!(r.checks >= 8, "{r}");
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let mut a = quick(TheoremId::Thm1, 20);
        let mut b = quick(TheoremId::Thm1, 20);
        a.elapsed_ms = 0;
        b.elapsed_ms = 0;
        assert_eq!(a, b);
    }

    #[test]
    fn names_round_trip() {
        for id in THEOREMS {
            assert_eq!(TheoremId::parse(id.name()).unwrap(), id);
        }
        assert!(TheoremId::parse("thm4").is_err());
    }

    #[test]
    fn absolute_value_form_on_example_one() {
        let p = parse_program(crate::fixtures::EXAMPLE1).unwrap();
        assert!(oettli_prager(&p, &[int(1), int(1)]));
        assert!(oettli_prager(&p, &[int(0), int(0)]));
        assert!(!oettli_prager(&p, &[int(1), int(2)]));
        assert!(!oettli_prager(&p, &[int(-1), int(0)]));
    }

    #[test]
    fn half_split_failures_replay() {
        let cfg = SuiteConfig {
            trials: 60,
            seed: 3,
            mutation: Mutation::HalfSplit,
            ..SuiteConfig::default()
        };
        let r = verify_theorem(TheoremId::Thm1, &cfg).unwrap();
        assert!(!r.passed());
        for cx in &r.failures {
            let text = serde_json::to_string(cx).unwrap();
            let back: Counterexample = serde_json::from_str(&text).unwrap();
            let checks = replay(TheoremId::Thm1, Mutation::HalfSplit, &back, cfg.cap).unwrap();
            assert_eq!(checks.failures.join("; "), cx.detail);
            let fixed = replay(TheoremId::Thm1, Mutation::None, &back, cfg.cap).unwrap();
            assert!(fixed.failures.is_empty());
        }
    }
}
