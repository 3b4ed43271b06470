//! `infoprox solve <config.json>` and `infoprox bench <suite>`.

mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use thiserror::Error;

use infoprox::bench::{default_sizes, run_suite, to_csv};
use infoprox::problems::ProblemKind;
use infoprox::solvers::{solve, Termination};
use infoprox::Error as SolverError;

use report::{RunConfig, RunReport, Units};

#[derive(Parser)]
#[command(
    name = "infoprox",
    version,
    about = "Bregman proximal solvers for capacities, rate-distortion and REE"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance described by a JSON config.
    Solve {
        config: PathBuf,
        /// Write the per-iteration log as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Report values in bits instead of nats.
        #[arg(long)]
        bits: bool,
        #[arg(long)]
        max_iters: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Sweep seeded random instances and print a CSV table.
    Bench {
        suite: ProblemKind,
        /// Comma-separated `NxL` rows, e.g. `4x1,32x4`.
        #[arg(long, value_delimiter = ',', value_parser = parse_size)]
        sizes: Option<Vec<(usize, usize)>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Solve rows one after another.
        #[arg(long)]
        sequential: bool,
    },
}

fn parse_size(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once('x')
        .ok_or_else(|| format!("expected NxL, got `{s}`"))?;
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    Ok((num(a)?, num(b)?))
}

#[derive(Debug, Error)]
enum Failure {
    #[error("config: {0}")]
    Config(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Config(_) | Failure::Io { .. } => 1,
            Failure::Infeasible(_) => 3,
            Failure::Numerical(_) => 4,
        }
    }

    fn io(path: &Path) -> impl FnOnce(io::Error) -> Failure + '_ {
        move |source| Failure::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

impl From<SolverError> for Failure {
    fn from(e: SolverError) -> Self {
        let msg = e.to_string();
        match e {
            SolverError::SuspectedInfeasible { .. } | SolverError::Infeasible(_) => {
                Failure::Infeasible(msg)
            }
            SolverError::NumericalFailure { .. }
            | SolverError::BacktrackingExhausted { .. }
            | SolverError::NonFinite(_)
            | SolverError::RootFinding { .. } => Failure::Numerical(msg),
            _ => Failure::Config(msg),
        }
    }
}

fn read_config(path: &Path) -> Result<RunConfig, Failure> {
    let text = std::fs::read_to_string(path).map_err(Failure::io(path))?;
    serde_json::from_str(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

fn run_solve(
    path: &Path,
    trace_path: Option<&Path>,
    units: Units,
    overrides: (Option<usize>, Option<f64>, Option<f64>, Option<u64>),
) -> Result<Termination, Failure> {
    let mut config = read_config(path)?;
    let (max_iters, tol, kappa, seed) = overrides;
    let solver = &mut config.solver;
    solver.max_iters = max_iters.unwrap_or(solver.max_iters);
    solver.tol = tol.unwrap_or(solver.tol);
    solver.kappa = kappa.or(solver.kappa);
    solver.seed = seed.unwrap_or(solver.seed);
    solver.validate()?;

    let problem = config.instance.build()?;
    let start = Instant::now();
    let (solution, mut trace) = solve(&problem, &config.solver)?;
    let report = RunReport::new(&config, &solution, start.elapsed().as_secs_f64(), units);

    if let Some(p) = trace_path {
        trace
            .records
            .iter_mut()
            .for_each(|r| r.objective *= units.scale());
        let file = File::create(p).map_err(Failure::io(p))?;
        trace
            .write_csv(BufWriter::new(file))
            .map_err(Failure::io(p))?;
    }
    let json = serde_json::to_string_pretty(&report).map_err(|e| Failure::Config(e.to_string()))?;
    writeln!(io::stdout(), "{json}").map_err(Failure::io(Path::new("<stdout>")))?;
    Ok(report.termination)
}

fn run_bench(
    suite: ProblemKind,
    sizes: Option<Vec<(usize, usize)>>,
    seed: u64,
    out: Option<&Path>,
    sequential: bool,
) -> Result<(), Failure> {
    let sizes = sizes.unwrap_or_else(|| default_sizes(suite));
    let rows = run_suite(suite, &sizes, seed, sequential);
    for row in &rows {
        if let Err(reason) = &row.outcome {
            eprintln!(
                "skipped {} {}x{} (seed {}): {reason}",
                row.suite, row.n, row.l, row.seed
            );
        }
    }
    let csv = to_csv(&rows);
    match out {
        Some(p) => std::fs::write(p, csv).map_err(Failure::io(p)),
        None => io::stdout()
            .write_all(csv.as_bytes())
            .map_err(Failure::io(Path::new("<stdout>"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve {
            config,
            trace,
            bits,
            max_iters,
            tol,
            kappa,
            seed,
        } => {
            let units = if bits { Units::Bits } else { Units::Nats };
            run_solve(
                &config,
                trace.as_deref(),
                units,
                (max_iters, tol, kappa, seed),
            )
            .map(|t| match t {
                Termination::Converged => 0,
                Termination::MaxIterations => 2,
            })
        }
        Command::Bench {
            suite,
            sizes,
            seed,
            out,
            sequential,
        } => run_bench(suite, sizes, seed, out.as_deref(), sequential).map(|()| 0),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
