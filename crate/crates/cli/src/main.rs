//! `bilin2`: analyze, steer and simulate two-dimensional bilinear systems.
//!
//! Exit codes: 0 success, 1 synthesis failure, 2 input error, 3 steering refusal.

mod input;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use bilin2::simulate::{excluded_set_hits, DEFAULT_ORACLE_SEED};
use bilin2::{
    analyze, plan_with_verdict, reachability_oracle, run, verify_plan, ControlClass, Error, Vec2,
};
use clap::{Parser, Subcommand};
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Refusal(Error),
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Failure(_) => 1,
            CliError::Input(_) => 2,
            CliError::Refusal(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InExcludedSet | Error::NotControllablePair | Error::ZeroState => CliError::Refusal(e),
            Error::ArityMismatch { .. } | Error::InvalidSystem(_) | Error::InvalidTolerance { .. } => {
                CliError::Input(e.to_string())
            }
            other => CliError::Failure(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "bilin2", version, about = "Controllability analysis and steering for 2-D bilinear systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify the system and print its structure as JSON
    Analyze {
        file: PathBuf,
        /// Human-readable summary instead of JSON
        #[arg(long)]
        text: bool,
    },
    /// Synthesize a control plan from one state to another
    Steer {
        file: PathBuf,
        #[arg(long, value_parser = input::parse_state, allow_hyphen_values = true)]
        from: Vec2,
        #[arg(long, value_parser = input::parse_state, allow_hyphen_values = true)]
        to: Vec2,
    },
    /// Replay a plan and emit the trajectory as CSV
    Simulate {
        file: PathBuf,
        #[arg(long, value_parser = input::parse_state, allow_hyphen_values = true)]
        from: Vec2,
        /// JSON plan: `{"steps": [[u1, .., um], ..]}` or a bare array of steps
        #[arg(long)]
        plan: PathBuf,
        /// Write the CSV here and print the terminal state instead
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Sample terminal states of random short plans
    Oracle {
        file: PathBuf,
        #[arg(long, value_parser = input::parse_state, allow_hyphen_values = true)]
        from: Vec2,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = DEFAULT_ORACLE_SEED)]
        seed: u64,
    },
}

fn print_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Failure(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn cmd_analyze(file: PathBuf, text: bool) -> Result<(), CliError> {
    let sys = input::load_system(&file)?;
    let verdict = analyze(&sys)?;
    if text {
        print!("{}", report::analyze_text(&verdict));
        Ok(())
    } else {
        print_json(&report::analyze_json(&verdict))
    }
}

fn cmd_steer(file: PathBuf, from: Vec2, to: Vec2) -> Result<(), CliError> {
    let sys = input::load_system(&file)?;
    let verdict = analyze(&sys)?;
    let plan = plan_with_verdict(&sys, &verdict, from, to)?;
    let check = verify_plan(&sys, from, to, &plan, 0.0);
    print_json(&report::SteerJson {
        steps: plan.steps,
        residual: check.error_norm,
    })
}

fn trajectory_csv<W: Write>(out: W, states: &[Vec2], steps: &[Vec<f64>], m: usize) -> Result<(), CliError> {
    let fail = |e: csv::Error| CliError::Failure(e.to_string());
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["k".to_string(), "x1".into(), "x2".into()];
    header.extend((1..=m).map(|i| format!("u{i}")));
    w.write_record(&header).map_err(fail)?;
    for (k, x) in states.iter().enumerate() {
        let mut row = vec![k.to_string(), x.x.to_string(), x.y.to_string()];
        match steps.get(k) {
            Some(u) => row.extend(u.iter().map(f64::to_string)),
            None => row.extend(std::iter::repeat(String::new()).take(m)),
        }
        w.write_record(&row).map_err(fail)?;
    }
    w.flush().map_err(|e| CliError::Failure(e.to_string()))
}

#[derive(Serialize)]
struct TerminalJson {
    steps: usize,
    terminal: [f64; 2],
}

fn cmd_simulate(file: PathBuf, from: Vec2, plan: PathBuf, csv_path: Option<PathBuf>) -> Result<(), CliError> {
    let sys = input::load_system(&file)?;
    let plan = input::load_plan(&plan)?;
    let traj = run(&sys, from, &plan)?;
    let terminal = TerminalJson {
        steps: plan.len(),
        terminal: traj.terminal().to_array(),
    };
    match csv_path {
        Some(path) => {
            let f = std::fs::File::create(&path)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            trajectory_csv(f, &traj.states, &plan.steps, sys.m())?;
            print_json(&terminal)
        }
        None => {
            trajectory_csv(std::io::stdout().lock(), &traj.states, &plan.steps, sys.m())?;
            let [x1, x2] = terminal.terminal;
            eprintln!("terminal state after {} steps: ({x1}, {x2})", terminal.steps);
            Ok(())
        }
    }
}

fn cmd_oracle(file: PathBuf, from: Vec2, trials: u64, seed: u64) -> Result<(), CliError> {
    let sys = input::load_system(&file)?;
    let verdict = analyze(&sys)?;
    let rep = reachability_oracle(&sys, from, trials as usize, seed);
    let hits = (verdict.class == ControlClass::NearlyControllable)
        .then(|| excluded_set_hits(&rep.samples, &verdict.excluded_initial, &sys));
    print_json(&report::OracleJson {
        samples: rep.samples.iter().map(|s| s.to_array()).collect(),
        covariance_rank: rep.covariance_rank,
        excluded_set_hits: hits,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Analyze { file, text } => cmd_analyze(file, text),
        Command::Steer { file, from, to } => cmd_steer(file, from, to),
        Command::Simulate { file, from, plan, csv } => cmd_simulate(file, from, plan, csv),
        Command::Oracle { file, from, trials, seed } => cmd_oracle(file, from, trials, seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if let CliError::Refusal(inner) = &e {
                let refusal = report::RefusalJson {
                    error: refusal_code(inner),
                    reason: inner.to_string(),
                };
                if let Ok(text) = serde_json::to_string(&refusal) {
                    println!("{text}");
                }
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn refusal_code(e: &Error) -> &'static str {
    match e {
        Error::InExcludedSet => "in-excluded-set",
        Error::NotControllablePair => "not-controllable",
        Error::ZeroState => "zero-state",
        _ => "refused",
    }
}
