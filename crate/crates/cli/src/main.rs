//! Command-line driver: parse, ground, rewrite, solve and print.
//!
//! Exit status is 0 when at least one world view (or plan) is found, 1 when
//! there is none, 2 for unreadable input, parse or grounding errors and 3
//! when a resource limit is hit or an external solver fails.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use epispec::asp::{ExternalSolver, GroundAspProgram, SolverOptions};
use epispec::encodings::{solve_conformant_source, EncodingError, SecurePlan};
use epispec::engine::{brute_force_world_views, solve, EngineError, EngineOptions, DEFAULT_ORACLE_CAP};
use epispec::frontend::{ground, parse_with, FrontendError, ParseOptions, SourceProgram};
use epispec::transform::to_core;
use epispec::{BeliefSet, Program, WorldView};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Compute all world views.
    Solve,
    /// Print the program rewritten to use only K and -K.
    Transform,
    /// Print the ground program.
    Ground,
    /// Treat the input as a planning domain and print secure plans.
    Plan,
    /// Compute world views by exhaustive search (small programs only).
    Oracle,
    /// Print the answer sets of a program without subjective literals, one
    /// per line, in the format expected from an external solver.
    #[value(hide = true)]
    AnswerSets,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "epispec", version, about = "World views of epistemic specifications")]
struct Cli {
    /// Input files, concatenated in order before grounding.
    #[arg(required = true)]
    files: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mode::Solve)]
    mode: Mode,
    /// Same as --mode=oracle.
    #[arg(long)]
    oracle: bool,
    /// Planning horizon; required with --mode=plan.
    #[arg(long)]
    horizon: Option<i64>,
    /// Worker threads for evaluating guesses.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Enumerate guesses without preprocessing.
    #[arg(long)]
    basic: bool,
    /// Largest number of literals accepted by --mode=oracle.
    #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
    oracle_cap: usize,
    /// Command computing answer sets, e.g. "mysolver {input}".
    #[arg(long, value_name = "CMD")]
    external_solver: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Search nodes allowed per answer-set computation; 0 for no limit.
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
    /// Keep auxiliary atoms introduced for choice rules in the output.
    #[arg(long)]
    show_aux: bool,
}

/// A failed run: exit status and message.
struct Failure(u8, String);

impl From<FrontendError> for Failure {
    fn from(e: FrontendError) -> Self {
        Failure(2, e.to_string())
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        Failure(3, e.to_string())
    }
}

impl From<EncodingError> for Failure {
    fn from(e: EncodingError) -> Self {
        match e {
            EncodingError::Frontend(e) => e.into(),
            EncodingError::Engine(e) => e.into(),
            EncodingError::Horizon(_) => Failure(2, e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let status = match run(&cli, &mut out) {
        Ok(found) => {
            if found {
                0
            } else {
                1
            }
        }
        Err(Failure(status, message)) => {
            eprintln!("epispec: {message}");
            status
        }
    };
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        return ExitCode::from(3);
    }
    ExitCode::from(status)
}

fn read_sources(cli: &Cli, options: ParseOptions) -> Result<SourceProgram, Failure> {
    let mut parts = Vec::with_capacity(cli.files.len());
    for path in &cli.files {
        let text = std::fs::read_to_string(path).map_err(|e| Failure(2, format!("{}: {e}", path.display())))?;
        let part = parse_with(&text, options).map_err(|e| Failure(2, format!("{}:{e}", path.display())))?;
        parts.push(part);
    }
    Ok(SourceProgram::concat(parts))
}

fn engine_options(cli: &Cli) -> EngineOptions {
    EngineOptions {
        jobs: cli.jobs.max(1),
        basic: cli.basic,
        solver: SolverOptions {
            node_budget: (cli.budget > 0).then_some(cli.budget),
            show_aux: cli.show_aux,
            ..SolverOptions::default()
        },
        external: cli.external_solver.clone().map(ExternalSolver::new),
    }
}

/// Write the requested output into `out`; `Ok(false)` means nothing was
/// found.
fn run(cli: &Cli, out: &mut String) -> Result<bool, Failure> {
    let mode = if cli.oracle { Mode::Oracle } else { cli.mode };
    if mode == Mode::Plan && cli.horizon.is_none() {
        return Err(Failure(2, "--mode=plan requires --horizon".into()));
    }
    if mode != Mode::Plan && cli.horizon.is_some() {
        return Err(Failure(2, "--horizon is only meaningful with --mode=plan".into()));
    }
    let options = ParseOptions {
        allow_reserved: mode == Mode::AnswerSets,
    };
    let source = read_sources(cli, options)?;
    let opts = engine_options(cli);
    if let (Mode::Plan, Some(m)) = (mode, cli.horizon) {
        let plans = solve_conformant_source(source, m, &opts)?;
        print_plans(&plans, cli.format, out);
        return Ok(!plans.is_empty());
    }
    let program = ground(&source).map_err(FrontendError::from)?;
    match mode {
        Mode::Ground => {
            print_program(&program, cli.format, out);
            Ok(true)
        }
        Mode::Transform => {
            print_program(&to_core(&program).program, cli.format, out);
            Ok(true)
        }
        Mode::Solve => {
            let core = to_core(&program);
            let views = core.project(&solve(&core.program, &opts)?);
            print_world_views(&views, cli.format, out);
            Ok(!views.is_empty())
        }
        Mode::Oracle => {
            let views = brute_force_world_views(&program, cli.oracle_cap)?;
            print_world_views(&views, cli.format, out);
            Ok(!views.is_empty())
        }
        Mode::AnswerSets => {
            let compiled = GroundAspProgram::compile(&program).map_err(|e| Failure(2, e.to_string()))?;
            let sets = epispec::asp::answer_sets_with(&compiled, &opts.solver)
                .map_err(|e| Failure(3, e.to_string()))?;
            for s in &sets {
                let line: Vec<String> = s.iter().map(ToString::to_string).collect();
                let _ = writeln!(out, "{}", line.join(" "));
            }
            // An external solver reports "no answer sets" as empty output,
            // which must not look like a process failure.
            Ok(true)
        }
        Mode::Plan => unreachable!("handled above"),
    }
}

fn print_program(p: &Program, format: Format, out: &mut String) {
    match format {
        Format::Text => out.push_str(&p.to_string()),
        Format::Json => {
            let rules: Vec<String> = p.rules.iter().map(ToString::to_string).collect();
            out.push_str(&serde_json::to_string_pretty(&rules).expect("strings serialize"));
            out.push('\n');
        }
    }
}

fn belief_set_strings(b: &BeliefSet) -> Vec<String> {
    b.iter().map(ToString::to_string).collect()
}

fn print_world_views(views: &BTreeSet<WorldView>, format: Format, out: &mut String) {
    match format {
        Format::Text => {
            if views.is_empty() {
                out.push_str("no world views\n");
            }
            for (k, w) in views.iter().enumerate() {
                let _ = writeln!(out, "World view {}:", k + 1);
                for b in w.iter() {
                    let _ = writeln!(out, "  {b}");
                }
            }
        }
        Format::Json => {
            let nested: Vec<Vec<Vec<String>>> = views.iter().map(|w| w.iter().map(belief_set_strings).collect()).collect();
            out.push_str(&serde_json::to_string(&nested).expect("strings serialize"));
            out.push('\n');
        }
    }
}

fn print_plans(plans: &BTreeSet<SecurePlan>, format: Format, out: &mut String) {
    match format {
        Format::Text => {
            if plans.is_empty() {
                out.push_str("no plans\n");
            }
            for (k, plan) in plans.iter().enumerate() {
                if plans.len() > 1 {
                    let _ = writeln!(out, "Plan {}:", k + 1);
                }
                out.push_str(&plan.to_string());
            }
        }
        Format::Json => {
            let nested: Vec<Vec<serde_json::Value>> = plans
                .iter()
                .map(|p| {
                    p.actions
                        .iter()
                        .map(|(action, step)| serde_json::json!({ "step": step, "action": action.to_string() }))
                        .collect()
                })
                .collect();
            out.push_str(&serde_json::to_string(&nested).expect("values serialize"));
            out.push('\n');
        }
    }
}
