//! The harness must notice a split that shares coefficients between the two
//! inequalities, and one that drops half of each equation.

use ilp_cli::{replay, run_fixture, verify_theorem, Counterexample, Mutation, SuiteConfig, TheoremId};
use ilp_core::analysis::DEFAULT_CAP;

fn suite(id: TheoremId, trials: usize, mutation: Mutation) -> ilp_cli::TheoremReport {
    let cfg = SuiteConfig {
        trials,
        seed: 11,
        mutation,
        ..SuiteConfig::default()
    };
    verify_theorem(id, &cfg).unwrap()
}

#[test]
fn aliased_split_slips_past_the_subset_check_but_not_the_fixture() {
    let r = suite(TheoremId::SubsetRemark, 60, Mutation::AliasedSplit);
    assert!(r.passed(), "{r}");
    let f = run_fixture("example1-split", Mutation::AliasedSplit, DEFAULT_CAP).unwrap();
    assert!(!f.passed());
    assert!(run_fixture("example1-split", Mutation::None, DEFAULT_CAP).unwrap().passed());
}

#[test]
fn half_split_failures_replay_from_json() {
    let r = suite(TheoremId::Thm1, 200, Mutation::HalfSplit);
    assert!(!r.passed());
    let text = serde_json::to_string(&r).unwrap();
    let back: ilp_cli::TheoremReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
    for cx in &back.failures {
        let checks = replay(TheoremId::Thm1, back.mutation, cx, DEFAULT_CAP).unwrap();
        assert_eq!(checks.failures.join("; "), cx.detail);
    }
    let cx: &Counterexample = &back.failures[0];
    assert!(replay(TheoremId::Thm1, Mutation::None, cx, DEFAULT_CAP)
        .unwrap()
        .failures
        .is_empty());
}

#[test]
fn half_split_changes_the_best_value() {
    let r = suite(TheoremId::Thm5, 40, Mutation::HalfSplit);
    assert!(!r.passed(), "{r}");
}
