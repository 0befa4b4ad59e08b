//! The std side of the workspace: the JSON program format, the worked
//! examples as fixtures, a seeded program generator and the randomized
//! theorem suites behind the `ilp` command.

pub mod error;
pub mod fixtures;
pub mod format;
pub mod generate;
pub mod mutation;
pub mod report;
pub mod suites;

pub use error::{CliError, CliResult};
pub use fixtures::{fixture_program, run_fixture, FIXTURES};
pub use generate::{generate, GeneratorConfig, SenseChoice};
pub use mutation::Mutation;
pub use report::{Counterexample, TheoremReport};
pub use suites::{replay, verify_theorem, Instance, SuiteConfig, TheoremId, THEOREMS};
