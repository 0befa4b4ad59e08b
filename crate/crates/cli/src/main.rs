use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ilp_cli::format::{
    self, assignment, parse_program, program_json, range_doc, scenario_doc, text,
    texts, vector, AssignmentDoc,
};
use ilp_cli::{
    fixture_program, replay, run_fixture, verify_theorem, CliError, CliResult, Mutation,
    SuiteConfig, TheoremId, TheoremReport, FIXTURES, THEOREMS,
};
use ilp_core::analysis::{
    dualize, is_weakly_feasible, is_weakly_optimal_fixed, optimal_value_range,
    weak_optimality_search, Method, SearchResult, DEFAULT_CAP,
};
use ilp_core::transforms::{add_slack, flip_objective, free_vars, split_equations, substitute_nonneg};
use ilp_core::{solve, FormKind, IlpProgram, LpOutcome};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "ilp", version, about = "Exact interval linear programming")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Enumerate,
    Formula,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Flip,
    Slack,
    Split,
    Nonneg,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one scenario (the center scenario unless an assignment is given).
    Solve {
        file: PathBuf,
        /// JSON object mapping coefficient ids to values.
        #[arg(long)]
        scenario: Option<PathBuf>,
    },
    /// Range of optimal values over all scenarios.
    Range {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "enumerate")]
        method: MethodArg,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
    /// Apply a transformation and write the result with its provenance.
    Transform {
        file: PathBuf,
        #[arg(long, value_enum)]
        op: Op,
        /// Variables to substitute, by index or name (default: all free ones).
        #[arg(long, value_delimiter = ',')]
        vars: Vec<String>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Is the point feasible in some scenario?
    CheckFeasible {
        file: PathBuf,
        /// Comma-separated rationals.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Is the point optimal in some scenario?
    CheckOptimal {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Endpoint scenarios to try when the matrix has interval entries.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        search_budget: u64,
    },
    /// Write the dual interval program.
    Dualize {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Run a randomized theorem suite.
    Verify {
        /// Suite id, or `all`.
        #[arg(long)]
        theorem: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Maximum variables and rows, as `n,m`.
        #[arg(long)]
        dims: Option<String>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        #[arg(long, default_value = "none")]
        mutation: String,
        /// Write the reports, counterexamples included, to this file.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check the facts stated about the worked examples.
    Fixtures {
        #[arg(long)]
        name: Vec<String>,
        #[arg(long, default_value = "none")]
        mutation: String,
        /// Print the fixture program instead of checking it.
        #[arg(long)]
        show: bool,
    },
    /// Rerun the counterexamples stored in a report file.
    Replay {
        report: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
}

/// What a command prints, and the exit code it ends with.
struct Output {
    json: Value,
    text: String,
    code: u8,
}

impl Output {
    fn ok(json: Value, text: String) -> Self {
        Output { json, text, code: 0 }
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path) -> CliResult<IlpProgram> {
    parse_program(&read(path)?)
}

fn write_program(path: &Path, p: &IlpProgram) -> CliResult<()> {
    fs::write(path, program_json(p) + "\n")?;
    Ok(())
}

fn mutation(s: &str) -> CliResult<Mutation> {
    Mutation::parse(s).ok_or_else(|| CliError::Input(format!("unknown mutation {s:?}")))
}

fn var_index(p: &IlpProgram, s: &str) -> CliResult<usize> {
    if let Some(j) = p.vars().iter().position(|v| v.name == s) {
        return Ok(j);
    }
    s.parse::<usize>()
        .ok()
        .filter(|&j| j < p.num_vars())
        .ok_or_else(|| CliError::Input(format!("no variable {s:?}")))
}

fn kind_name(k: FormKind) -> &'static str {
    match k {
        FormKind::TypeI => "type-i",
        FormKind::TypeII => "type-ii",
        FormKind::TypeIII => "type-iii",
        FormKind::General => "general",
    }
}

fn outcome_text(o: &LpOutcome) -> String {
    let join = |v: &[ilp_core::Rational]| texts(v).join(", ");
    match o {
        LpOutcome::Optimal { value, primal, dual } => format!(
            "optimal\nvalue: {}\nprimal: ({})\ndual: ({})",
            text(value),
            join(primal),
            join(dual)
        ),
        LpOutcome::Infeasible { farkas } => format!("infeasible\nfarkas: ({})", join(farkas)),
        LpOutcome::Unbounded { point, ray } => {
            format!("unbounded\npoint: ({})\nray: ({})", join(point), join(ray))
        }
    }
}

fn reports_output(reports: Vec<TheoremReport>) -> Output {
    let code = if reports.iter().all(TheoremReport::passed) { 0 } else { 1 };
    let text = reports
        .iter()
        .map(|r| r.to_string())
        .collect::<Vec<_>>()
        .join("\n");
    Output {
        json: json!(reports),
        text,
        code,
    }
}

fn run(command: Command) -> CliResult<Output> {
    match command {
        Command::Solve { file, scenario } => {
            let p = load(&file)?;
            let s = match scenario {
                Some(path) => {
                    let doc: AssignmentDoc =
                        serde_json::from_str(&read(&path)?).map_err(CliError::json)?;
                    p.scenario(&assignment(&doc)?)?
                }
                None => p.center_scenario(),
            };
            let out = solve(&s.lp);
            Ok(Output::ok(json!(scenario_doc(&s, &out)), outcome_text(&out)))
        }
        Command::Range { file, method, cap } => {
            let p = load(&file)?;
            let method = match method {
                MethodArg::Enumerate => Method::Enumerate,
                MethodArg::Formula => Method::Formula,
                MethodArg::Both => Method::Both,
            };
            let r = optimal_value_range(&p, method, cap)?;
            let text = format!("[{}, {}]", r.lower, r.upper);
            Ok(Output::ok(json!(range_doc(&r)), text))
        }
        Command::Transform {
            file,
            op,
            vars,
            output,
        } => {
            let p = load(&file)?;
            let (q, rec) = match op {
                Op::Flip => flip_objective(&p),
                Op::Slack => add_slack(&p),
                Op::Split => split_equations(&p),
                Op::Nonneg => {
                    let js = if vars.is_empty() {
                        free_vars(&p)
                    } else {
                        vars.iter()
                            .map(|v| var_index(&p, v))
                            .collect::<CliResult<_>>()?
                    };
                    substitute_nonneg(&p, &js)?
                }
            };
            write_program(&output, &q)?;
            let class = q.classify();
            let json = json!({
                "output": output.display().to_string(),
                "kind": rec.kind.name(),
                "duplicated": rec.duplicated(),
                "class": kind_name(class.kind),
                "fixed_matrix": class.fixed_matrix,
            });
            let text = format!(
                "{} -> {} ({} coefficients duplicated, {})",
                rec.kind.name(),
                output.display(),
                rec.duplicated(),
                kind_name(class.kind)
            );
            Ok(Output::ok(json, text))
        }
        Command::CheckFeasible { file, point } => {
            let p = load(&file)?;
            let x = vector(&point)?;
            let ok = is_weakly_feasible(&p, &x)?;
            Ok(Output::ok(
                json!({ "weakly_feasible": ok }),
                format!("weakly feasible: {ok}"),
            ))
        }
        Command::CheckOptimal {
            file,
            point,
            search_budget,
        } => {
            let p = load(&file)?;
            let x = vector(&point)?;
            if p.is_fixed_matrix() {
                return Ok(match is_weakly_optimal_fixed(&p, &x)? {
                    Some(cert) => Output::ok(
                        json!({
                            "weakly_optimal": true,
                            "assignment": format::assignment_doc(&cert.scenario.assignment),
                            "dual": texts(&cert.dual),
                        }),
                        format!("weakly optimal: true\ndual: ({})", texts(&cert.dual).join(", ")),
                    ),
                    None => Output::ok(
                        json!({ "weakly_optimal": false }),
                        "weakly optimal: false".into(),
                    ),
                });
            }
            match weak_optimality_search(&p, &x, search_budget) {
                SearchResult::Found(s) => Ok(Output::ok(
                    json!({
                        "weakly_optimal": true,
                        "assignment": format::assignment_doc(&s.assignment),
                    }),
                    "weakly optimal: true".into(),
                )),
                SearchResult::Unknown { searched } => Err(CliError::Undecided(format!(
                    "no certificate among {searched} endpoint scenarios"
                ))),
            }
        }
        Command::Dualize { file, output } => {
            let d = dualize(&load(&file)?);
            write_program(&output, &d)?;
            Ok(Output::ok(
                json!({ "output": output.display().to_string() }),
                format!("dual -> {}", output.display()),
            ))
        }
        Command::Verify {
            theorem,
            trials,
            seed,
            dims,
            cap,
            mutation: m,
            report,
        } => {
            let ids = if theorem == "all" {
                THEOREMS.to_vec()
            } else {
                vec![TheoremId::parse(&theorem)?]
            };
            let mut cfg = SuiteConfig {
                trials,
                seed,
                cap,
                mutation: mutation(&m)?,
                ..SuiteConfig::default()
            };
            if let Some(d) = dims {
                let parts: Vec<usize> = d
                    .split(',')
                    .map(|s| s.trim().parse())
                    .collect::<Result<_, _>>()
                    .map_err(|_| CliError::Input(format!("bad --dims {d:?}, expected n,m")))?;
                let [n, m] = parts[..] else {
                    return Err(CliError::Input(format!("bad --dims {d:?}, expected n,m")));
                };
                cfg.max_vars = n;
                cfg.max_rows = m;
            }
            let reports = ids
                .into_iter()
                .map(|id| verify_theorem(id, &cfg))
                .collect::<CliResult<Vec<_>>>()?;
            if let Some(path) = report {
                let body = serde_json::to_string_pretty(&reports).map_err(CliError::json)?;
                fs::write(path, body + "\n")?;
            }
            Ok(reports_output(reports))
        }
        Command::Fixtures {
            name,
            mutation: m,
            show,
        } => {
            let m = mutation(&m)?;
            let names: Vec<String> = if name.is_empty() {
                FIXTURES.iter().map(|s| s.to_string()).collect()
            } else {
                name
            };
            if show {
                let docs = names
                    .iter()
                    .map(|n| Ok(format::program_doc(&fixture_program(n, m)?)))
                    .collect::<CliResult<Vec<_>>>()?;
                let text = docs
                    .iter()
                    .map(|d| serde_json::to_string_pretty(d).map_err(CliError::json))
                    .collect::<CliResult<Vec<_>>>()?
                    .join("\n");
                return Ok(Output::ok(json!(docs), text));
            }
            let reports = names
                .iter()
                .map(|n| run_fixture(n, m, DEFAULT_CAP))
                .collect::<CliResult<Vec<_>>>()?;
            Ok(reports_output(reports))
        }
        Command::Replay { report, cap } => {
            let reports: Vec<TheoremReport> =
                serde_json::from_str(&read(&report)?).map_err(CliError::json)?;
            let mut results = Vec::new();
            let mut lines = Vec::new();
            for r in &reports {
                for cx in &r.failures {
                    let failures = if FIXTURES.contains(&r.theorem.as_str()) {
                        run_fixture(&r.theorem, r.mutation, cap)?
                            .failures
                            .into_iter()
                            .map(|f| f.detail)
                            .collect()
                    } else {
                        replay(TheoremId::parse(&r.theorem)?, r.mutation, cx, cap)?.failures
                    };
                    let reproduced = !failures.is_empty();
                    lines.push(format!(
                        "{} trial {}: {}",
                        r.theorem,
                        cx.trial,
                        if reproduced { "reproduced" } else { "not reproduced" }
                    ));
                    results.push(json!({
                        "theorem": r.theorem,
                        "trial": cx.trial,
                        "reproduced": reproduced,
                        "failures": failures,
                    }));
                }
            }
            let any = results.iter().any(|r| r["reproduced"] == json!(true));
            Ok(Output {
                json: json!(results),
                text: lines.join("\n"),
                code: if any { 1 } else { 0 },
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            match cli.format {
                OutputFormat::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("json values serialize")
                ),
                OutputFormat::Text => {
                    if !out.text.is_empty() {
                        println!("{}", out.text)
                    }
                }
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            match cli.format {
                OutputFormat::Json => {
                    println!("{}", json!({ "error": e.to_string(), "code": e.exit_code() }))
                }
                OutputFormat::Text => eprintln!("error: {e}"),
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
