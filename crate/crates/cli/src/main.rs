//! `atsp`: solve, verify, generate and exactly solve ATSP instances.
//!
//! Exit codes: 0 ok, 1 invalid input (or an invalid tour for `verify`),
//! 2 internal assertion failure.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use atsp_core::harness::{self, Model, PipelineOptions};
use atsp_core::{rational, Error, Rational};
use clap::{ArgAction, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "atsp",
    version,
    about = "Constant-factor ATSP approximation with exact certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Tsplib,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and print a JSON run report.
    Solve {
        /// Instance file (JSON edge list or TSPLIB FULL_MATRIX); `-` or absent reads stdin.
        input: Option<PathBuf>,
        #[arg(long, default_value = "1", value_parser = parse_epsilon)]
        epsilon: Rational,
        /// Evaluate every internal bound check.
        #[arg(long, default_value_t = true, action = ArgAction::Set)]
        check_all: bool,
        /// Also compute the exact optimum (n <= 18) and check the sandwich.
        #[arg(long)]
        oracle: bool,
    },
    /// Check that a tour file describes a valid tour of the instance.
    Verify {
        instance: PathBuf,
        /// JSON with `walk` (a run report works) or `edges`.
        tour: PathBuf,
    },
    /// Print a generated instance.
    Gen {
        #[arg(value_parser = parse_model)]
        model: Model,
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Print the exact optimum.
    Oracle { input: Option<PathBuf> },
}

fn parse_epsilon(s: &str) -> Result<Rational, String> {
    let e = rational::parse(s).map_err(|e| e.to_string())?;
    if e <= rational::zero() {
        return Err("epsilon must be positive".into());
    }
    Ok(e)
}

fn parse_model(s: &str) -> Result<Model, String> {
    s.parse()
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Internal(e.to_string())
        }
    }
}

fn read_input(path: Option<&PathBuf>) -> Result<Vec<u8>, Failure> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            fs::read(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut buf = Vec::new();
            io::stdin()
                .read_to_end(&mut buf)
                .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
            Ok(buf)
        }
    }
}

fn json(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) -> Result<(), Failure> {
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
            Err(Failure::Internal(format!("stdout: {e}")))
        }
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve {
            input,
            epsilon,
            check_all,
            oracle,
        } => {
            let file = harness::parse_instance_file(&read_input(input.as_ref())?)?;
            let opts = PipelineOptions {
                epsilon,
                check_all,
                oracle,
            };
            let report = harness::run_pipeline(&file.name, &file.graph, &opts)?;
            emit(&json(&report))?;
        }
        Command::Verify { instance, tour } => {
            let file = harness::parse_instance_file(&read_input(Some(&instance))?)?;
            let f = harness::parse_tour(&file.graph, &read_input(Some(&tour))?)?;
            let verdict = harness::verify_tour(&file.graph, &f);
            emit(&json(&verdict))?;
            if !verdict.valid {
                return Err(Failure::Input(format!(
                    "not a tour: {}",
                    verdict.diagnostics.join("; ")
                )));
            }
        }
        Command::Gen {
            model,
            n,
            seed,
            format,
        } => {
            if n == 0 {
                return Err(Failure::Input("n must be at least 1".into()));
            }
            let g = harness::gen_instance(model, n, seed);
            let name = format!("{model}-{n}-{seed}");
            match format {
                Format::Json => emit(&harness::to_json(&name, &g))?,
                Format::Tsplib => emit(&harness::to_tsplib(&name, &g)?)?,
            }
        }
        Command::Oracle { input } => {
            let file = harness::parse_instance_file(&read_input(input.as_ref())?)?;
            let opt = harness::held_karp_opt(&file.graph)?;
            emit(&json(
                &serde_json::json!({ "name": file.name, "held_karp_opt": rational::format(&opt) }),
            ))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Usage errors are invalid input; help and version are not errors.
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
    }
}
