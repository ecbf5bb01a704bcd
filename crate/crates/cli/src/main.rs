use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use poromech_core::io::{parse_config, preset, run_scenario, RunOptions, RunReport, PRESETS};
use poromech_core::Error;

const EXIT_VALIDATION: u8 = 2;
const EXIT_SOLVER: u8 = 3;
const EXIT_ACCEPTANCE: u8 = 4;

#[derive(Parser)]
#[command(name = "poromech", version, about = "Finite-strain multiphase poromechanics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario described by a configuration file.
    Run {
        config: PathBuf,
        /// Directory for CSV and VTK output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the time step.
        #[arg(long)]
        dt: Option<f64>,
        /// Multiply both element counts.
        #[arg(long)]
        refine: Option<usize>,
    },
    /// Run a consolidation benchmark against its series solution.
    Verify {
        #[arg(value_enum)]
        problem: Benchmark,
        #[arg(long)]
        refine: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Built-in scenarios.
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Subcommand)]
enum PresetAction {
    List,
    /// Print a preset in configuration-file form.
    Show { name: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Benchmark {
    Terzaghi,
    Mandel,
}

impl Benchmark {
    fn name(self) -> &'static str {
        match self {
            Benchmark::Terzaghi => "terzaghi",
            Benchmark::Mandel => "mandel",
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e.root() {
        Error::Parse { .. }
        | Error::Validation { .. }
        | Error::UnknownBoundaryTag(_)
        | Error::InvalidDimension(_)
        | Error::Io { .. } => EXIT_VALIDATION,
        _ => EXIT_SOLVER,
    }
}

fn fail(e: Error) -> u8 {
    eprintln!("error: {e}");
    exit_code(&e)
}

fn verdict(report: &RunReport) -> u8 {
    if report.passed() {
        println!("verification passed");
        0
    } else {
        println!("verification failed");
        EXIT_ACCEPTANCE
    }
}

fn summary(report: &RunReport) {
    let last = report.steps.last();
    println!("scenario {}", report.name);
    println!("steps {} newton {} bisections {}", report.steps.len(), report.newton_iterations, report.bisections);
    if let Some(s) = last {
        println!("t_end {:e} max_pressure {:e} min_phi {:e}", s.t, s.max_pressure, s.min_phi);
        if s.mass.len() > 1 {
            println!("closure mismatch {:e}", report.steps.iter().map(|s| s.closure_mismatch).fold(0.0, f64::max));
        }
    }
    if let Some(flag) = report.non_monotone_trace {
        println!("non-monotone p-1/rho trace: {}", if flag { "yes" } else { "no" });
    }
    for c in &report.checks {
        println!("{} {} = {:.3e} (limit {:.3e})", if c.passed { "PASS" } else { "FAIL" }, c.name, c.value, c.limit);
    }
}

fn run(config: PathBuf, options: RunOptions) -> u8 {
    let text = match std::fs::read_to_string(&config) {
        Ok(t) => t,
        Err(source) => return fail(Error::Io { path: config, source }),
    };
    let cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    match run_scenario(&cfg, &options) {
        Ok(report) => {
            summary(&report);
            0
        }
        Err(e) => fail(e),
    }
}

fn verify(problem: Benchmark, options: RunOptions) -> u8 {
    let cfg = match preset(problem.name()) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    match run_scenario(&cfg, &options) {
        Ok(report) => {
            summary(&report);
            verdict(&report)
        }
        Err(e) => fail(e),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run { config, out, dt, refine } => run(config, RunOptions { out_dir: out, dt, refine }),
        Command::Verify { problem, refine, out } => verify(problem, RunOptions { out_dir: out, dt: None, refine }),
        Command::Presets { action: PresetAction::List } => {
            for (name, description) in PRESETS {
                println!("{name:<20} {description}");
            }
            0
        }
        Command::Presets { action: PresetAction::Show { name } } => match preset(&name) {
            Ok(c) => {
                print!("{}", poromech_core::io::serialize_config(&c));
                0
            }
            Err(e) => fail(e),
        },
    };
    ExitCode::from(code)
}
