//! Scenario-driven batch runner: JSON scenarios in, versioned verification
//! reports out.

pub mod commands;
pub mod generate;
pub mod literal;
pub mod report;
pub mod scenario;

use std::path::PathBuf;

use clap::Parser;

pub use generate::{generate_random_metric, Constraint, GeneratedMetric};
pub use literal::{matrix_from_literal, matrix_to_literal, ElementLiteral, MatrixLiteral};
pub use report::{run, Overrides, Report};
pub use scenario::{Scenario, COMMANDS};

#[derive(Debug, Parser)]
#[command(name = "padic-curvature", version, about = "Run arithmetic curvature scenarios and emit verification reports")]
pub struct Args {
    /// scenario file (one scenario object or an array of them)
    #[arg(long)]
    pub scenario: PathBuf,
    /// where to write the JSON report; defaults to the scenario's "output" or stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// command to run, replacing the scenario's list (repeatable)
    #[arg(long = "command")]
    pub commands: Vec<String>,
    /// working precision nu, replacing the field's
    #[arg(long)]
    pub precision: Option<u32>,
    /// seed for every random draw
    #[arg(long)]
    pub seed: Option<u64>,
    /// suppress the human-readable summary
    #[arg(long)]
    pub quiet: bool,
}

/// Runs the CLI and returns the process exit code.
pub fn main_with(args: Args) -> i32 {
    let text = match std::fs::read_to_string(&args.scenario) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", args.scenario.display());
            return 2;
        }
    };
    let overrides = Overrides {
        seed: args.seed,
        precision: args.precision,
        commands: if args.commands.is_empty() { None } else { Some(args.commands.clone()) },
    };
    let report = match run(&text, &overrides) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{}: {e}", args.scenario.display());
            return 2;
        }
    };
    let out = args.out.clone().or_else(|| {
        // a single scenario may name its own output path
        scenario::ScenarioFile::parse(&text).ok().and_then(|s| match s.as_slice() {
            [one] => one.output.as_ref().map(PathBuf::from),
            _ => None,
        })
    });
    let json = report.to_json();
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, &json) {
                eprintln!("cannot write {}: {e}", path.display());
                return 2;
            }
        }
        None => print!("{json}"),
    }
    if !args.quiet {
        eprint!("{}", report.human_summary());
    }
    report.exit_code()
}
