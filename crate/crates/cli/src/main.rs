use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use schmidt_cli::report::{extremal_text, no_signaling_text, RunReport};
use schmidt_cli::{format, verify};
use schmidt_core::extremal::{self, ExtremalProblem, Model, SearchOptions};
use schmidt_core::scenarios::{MeasurementSet, ScenarioSpec};
use schmidt_core::stats::{ideal_distribution, no_signaling_test, perturb_counts, sample_counts, PerturbMode, SamplingPlan};
use schmidt_core::{Error, Execution, ScenarioKind};

#[derive(Parser)]
#[command(name = "schmidt", version, about = "Determinant witness for the Schmidt number")]
struct Cli {
    /// Run every loop on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scenario {
    #[value(name = "a-set1")]
    ASet1,
    #[value(name = "a-set2")]
    ASet2,
    B,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    A,
    B,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Classical,
    Real,
    Complex,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Signaling,
    ExtraDim,
}

#[derive(Subcommand)]
enum Command {
    /// Sample synthetic counts from the ideal circuits.
    Simulate {
        #[arg(long, value_enum)]
        scenario: Scenario,
        #[arg(long, default_value_t = 100_000)]
        shots: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value_t = 1)]
        reps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Qubits between the measured ends (scenario a).
        #[arg(long, default_value_t = 2)]
        middle: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Witness, error and job-averaged estimates of a counts file.
    Score {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// The 48 no-signaling comparisons of a scenario (a) counts file.
    Nosignal {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Largest witness for bounded dimension, compared with the published value.
    Maxima {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 200)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Gate identities, ideal nulls, printed configurations and the counterexample.
    Verify {
        #[arg(long)]
        json: bool,
    },
    /// Inject a controlled violation into a counts file.
    Perturb {
        file: PathBuf,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

enum Failure {
    Input(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read_counts(path: &Path) -> Result<schmidt_core::stats::CountsTable, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    format::parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes") + "\n"
}

fn run(cli: Cli) -> Result<(), Failure> {
    let exec = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    match cli.command {
        Command::Simulate { scenario, shots, jobs, reps, seed, middle, output } => {
            let spec = match scenario {
                Scenario::ASet1 => ScenarioSpec::a(MeasurementSet::SetI, middle)?,
                Scenario::ASet2 => ScenarioSpec::a(MeasurementSet::SetII, middle)?,
                Scenario::B => ScenarioSpec::b(None),
            };
            let dist = ideal_distribution(&spec)?;
            let plan = SamplingPlan { shots, jobs, repetitions: reps, seed };
            let table = sample_counts(&spec, &dist, &plan, exec)?;
            emit(&format::serialize(&table), output.as_deref())
        }
        Command::Score { file, json: as_json } => {
            let report = RunReport::build(&read_counts(&file)?)?;
            emit(&if as_json { json(&report) } else { report.to_text() }, None)
        }
        Command::Nosignal { file, json: as_json } => {
            let report = no_signaling_test(&read_counts(&file)?)?;
            emit(&if as_json { json(&report) } else { no_signaling_text(&report) }, None)
        }
        Command::Maxima { kind, model, n, d, restarts, seed, json: as_json } => {
            let model = match model {
                ModelArg::Classical => Model::Classical,
                ModelArg::Real => Model::QuantumReal,
                ModelArg::Complex => Model::QuantumComplex,
            };
            let kind = match kind {
                Kind::A => ScenarioKind::A,
                Kind::B => ScenarioKind::B,
            };
            let problem = ExtremalProblem::new(n, d, model, kind)?;
            let result = extremal::solve(&problem, &SearchOptions { restarts, seed, exec })?;
            emit(&if as_json { json(&result) } else { extremal_text(&result) }, None)
        }
        Command::Verify { json: as_json } => {
            let lines = verify::run_all()?;
            emit(&if as_json { json(&lines) } else { verify::to_text(&lines) }, None)?;
            if verify::all_pass(&lines) {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::Perturb { file, epsilon, mode, output } => {
            if !epsilon.is_finite() || !(0.0..=1.0).contains(&epsilon) {
                return Err(Failure::Input(format!("epsilon {epsilon} outside [0, 1]")));
            }
            let mode = match mode {
                Mode::Signaling => PerturbMode::Signaling,
                Mode::ExtraDim => PerturbMode::ExtraDim,
            };
            let table = perturb_counts(&read_counts(&file)?, mode, epsilon)?;
            emit(&format::serialize(&table), output.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
