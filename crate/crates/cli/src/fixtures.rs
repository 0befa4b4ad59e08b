//! The worked examples, each with the facts stated about it.

use std::time::Instant;

use ilp_core::analysis::{
    is_weakly_feasible, optimal_value_range, weak_optimality_search, Method, SearchResult,
    ValueRange, Witness,
};
use ilp_core::rational::int;
use ilp_core::transforms::substitute_nonneg;
use ilp_core::{certify, solve, ExtRational, IlpProgram, LpOutcome, Rational};

use crate::error::{CliError, CliResult};
use crate::format::parse_program;
use crate::mutation::Mutation;
use crate::report::{Checks, Counterexample, TheoremReport};

pub const FIXTURES: [&str; 8] = [
    "example1",
    "example1-split",
    "example2",
    "example2-sub",
    "example3a",
    "example3a-sub",
    "example3b",
    "example3b-split",
];

pub const EXAMPLE1: &str = include_str!("../fixtures/example1.json");
pub const EXAMPLE2: &str = include_str!("../fixtures/example2.json");
pub const EXAMPLE3A: &str = include_str!("../fixtures/example3a.json");
pub const EXAMPLE3B: &str = include_str!("../fixtures/example3b.json");

/// The fixture program, with transformations applied as `mutation` does them.
pub fn fixture_program(name: &str, mutation: Mutation) -> CliResult<IlpProgram> {
    let base = |text: &str| parse_program(text);
    let p = match name {
        "example1" => base(EXAMPLE1)?,
        "example1-split" => mutation.split(&base(EXAMPLE1)?).0,
        "example2" => base(EXAMPLE2)?,
        "example2-sub" => substitute_nonneg(&base(EXAMPLE2)?, &[0])?.0,
        "example3a" => base(EXAMPLE3A)?,
        "example3a-sub" => substitute_nonneg(&base(EXAMPLE3A)?, &[0])?.0,
        "example3b" => base(EXAMPLE3B)?,
        "example3b-split" => mutation.split(&base(EXAMPLE3B)?).0,
        other => return Err(CliError::Input(format!("unknown fixture {other:?}"))),
    };
    Ok(p.with_name(name))
}

fn fin(v: i64) -> ExtRational {
    ExtRational::Finite(int(v))
}

fn range_is(c: &mut Checks, r: &ValueRange, lower: ExtRational, upper: ExtRational) {
    c.check(r.lower == lower && r.upper == upper, || {
        format!("range is [{}, {}], expected [{lower}, {upper}]", r.lower, r.upper)
    });
}

/// The scenario and outcome behind a scenario witness, if that is what it is.
fn scenario_witness(w: &Option<Witness>) -> Option<(&ilp_core::Scenario, &LpOutcome)> {
    match w {
        Some(Witness::Scenario { scenario, outcome }) => Some((scenario, outcome)),
        _ => None,
    }
}

/// `x` is feasible in the found scenario with objective value equal to the
/// scenario optimum, both recomputed here.
fn certified_optimal(s: &ilp_core::Scenario, x: &[Rational]) -> Option<Rational> {
    let out = solve(&s.lp);
    let value = out.value()?;
    (s.lp.is_feasible(x) && &s.lp.objective_value(x) == value).then(|| value.clone())
}

fn facts(name: &str, p: &IlpProgram, cap: u64) -> CliResult<Checks> {
    let mut c = Checks::default();
    let ones = [int(1), int(1)];
    let zeros = [int(0), int(0)];
    match name {
        "example1" => {
            let r = optimal_value_range(p, Method::Both, cap)?;
            range_is(&mut c, &r, ExtRational::NegInf, fin(-1));
            match weak_optimality_search(p, &ones, cap) {
                SearchResult::Found(s) => {
                    c.check(s.lp.matrix[0][0] == int(1), || {
                        format!("(1,1) certified with a = {}, expected 1", s.lp.matrix[0][0])
                    });
                    c.check(certified_optimal(&s, &ones) == Some(int(-1)), || {
                        "(1,1) is not optimal with value -1 in the found scenario".into()
                    });
                }
                SearchResult::Unknown { .. } => c.fail("(1,1) not certified weakly optimal".into()),
            }
            c.check(is_weakly_feasible(p, &zeros)?, || "(0,0) not weakly feasible".into());
            c.check(
                matches!(weak_optimality_search(p, &zeros, cap), SearchResult::Unknown { .. }),
                || "(0,0) reported weakly optimal before splitting".into(),
            );
        }
        "example1-split" => match weak_optimality_search(p, &zeros, cap) {
            SearchResult::Found(s) => {
                let (a1, a2) = (&s.lp.matrix[0][0], -&s.lp.matrix[1][0]);
                c.check(*a1 == int(1) && a2 == int(0), || {
                    format!("(0,0) certified with (a1, a2) = ({a1}, {a2}), expected (1, 0)")
                });
                c.check(certified_optimal(&s, &zeros) == Some(int(0)), || {
                    "(0,0) is not optimal with value 0 in the found scenario".into()
                });
            }
            SearchResult::Unknown { .. } => {
                c.fail("(0,0) not found weakly optimal after splitting".into())
            }
        },
        "example2" => {
            let r = optimal_value_range(p, Method::Both, cap)?;
            range_is(&mut c, &r, fin(1), ExtRational::PosInf);
        }
        "example2-sub" => {
            let zero = p
                .endpoint_scenarios(cap)?
                .any(|s| solve(&s.lp).value() == Some(&int(0)));
            c.check(zero, || "no endpoint scenario has optimal value 0".into());
            let r = optimal_value_range(p, Method::Enumerate, cap)?;
            c.check(r.lower == fin(0), || format!("lower bound {}, expected 0", r.lower));
        }
        "example3a" => {
            let r = optimal_value_range(p, Method::Both, cap)?;
            range_is(&mut c, &r, fin(0), fin(1));
        }
        "example3b" => {
            let r = optimal_value_range(p, Method::Both, cap)?;
            range_is(&mut c, &r, fin(-1), fin(0));
        }
        "example3a-sub" => {
            let r = optimal_value_range(p, Method::Enumerate, cap)?;
            c.check(r.lower == ExtRational::NegInf, || {
                format!("lower bound {}, expected -inf", r.lower)
            });
            match scenario_witness(&r.lower_witness) {
                Some((s, out @ LpOutcome::Unbounded { .. })) => {
                    c.check(certify(&s.lp, out).is_ok(), || "ray certificate invalid".into());
                    c.check(s.lp.objective == [int(0), int(-1)], || {
                        format!("unbounded objective {:?}, expected 0x+ - 1x-", s.lp.objective)
                    });
                }
                _ => c.fail("lower bound lacks an unbounded scenario".into()),
            }
        }
        "example3b-split" => {
            let r = optimal_value_range(p, Method::Enumerate, cap)?;
            c.check(r.upper == ExtRational::PosInf, || {
                format!("upper bound {}, expected +inf", r.upper)
            });
            match scenario_witness(&r.upper_witness) {
                Some((s, out @ LpOutcome::Infeasible { .. })) => {
                    c.check(certify(&s.lp, out).is_ok(), || "Farkas certificate invalid".into());
                    let (b1, b2) = (&s.lp.rhs[0], -&s.lp.rhs[1]);
                    c.check(b1 < &b2, || format!("witness has b1 = {b1} >= b2 = {b2}"));
                }
                _ => c.fail("upper bound lacks an infeasible scenario".into()),
            }
        }
        other => return Err(CliError::Input(format!("unknown fixture {other:?}"))),
    }
    Ok(c)
}

pub fn run_fixture(name: &str, mutation: Mutation, cap: u64) -> CliResult<TheoremReport> {
    let start = Instant::now();
    let p = fixture_program(name, mutation)?;
    let checks = facts(name, &p, cap)?;
    Ok(TheoremReport {
        theorem: name.to_string(),
        mutation,
        seed: 0,
        trials: 1,
        checks: checks.count,
        regenerated: 0,
        failures: checks
            .failures
            .into_iter()
            .map(|d| Counterexample::new(0, &p, None, d))
            .collect(),
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}
