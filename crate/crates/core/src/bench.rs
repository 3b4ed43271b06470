//! Seeded sweeps over random instances, one table row per size.

use std::fmt::Write as _;
use std::time::Instant;

use crate::error::Result;
use crate::factories::{random_instance, Dims};
use crate::parallel;
use crate::problems::ProblemKind;
use crate::solvers::{solve, Algorithm, SolverConfig, Termination};

pub const BENCH_HEADER: &str = "suite,n,l,iters,tol,value,seconds";

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub suite: ProblemKind,
    pub n: usize,
    /// Constraint count, or the second factor dimension for `ree`.
    pub l: usize,
    pub seed: u64,
    pub outcome: std::result::Result<BenchOutcome, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchOutcome {
    pub iters: usize,
    /// Stopping metric at exit.
    pub tol: f64,
    pub value: f64,
    pub seconds: f64,
    pub termination: Termination,
}

impl BenchRow {
    pub fn csv_line(&self) -> String {
        match &self.outcome {
            Ok(o) => format!(
                "{},{},{},{},{:.16e},{:.16e},{:.16e}",
                self.suite, self.n, self.l, o.iters, o.tol, o.value, o.seconds
            ),
            Err(_) => format!("{},{},{},,,,", self.suite, self.n, self.l),
        }
    }
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(BENCH_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{}", r.csv_line());
    }
    out
}

/// Desk-scale rows echoing the smallest table entries.
pub fn default_sizes(kind: ProblemKind) -> Vec<(usize, usize)> {
    match kind {
        ProblemKind::Cc => vec![(4, 1), (32, 4)],
        ProblemKind::Cq => vec![(4, 1), (8, 2)],
        ProblemKind::Ea => vec![(4, 1)],
        ProblemKind::Crd => vec![(4, 0), (32, 0)],
        ProblemKind::Qrd => vec![(3, 0)],
        ProblemKind::Ree => vec![(2, 2), (3, 3)],
    }
}

/// Backtracking PDHG with the problem's default step ratio.
pub fn bench_config(seed: u64) -> SolverConfig {
    SolverConfig {
        algorithm: Algorithm::PdhgBt,
        seed,
        ..SolverConfig::default()
    }
}

pub fn run_row(
    kind: ProblemKind,
    (a, b): (usize, usize),
    seed: u64,
    config: &SolverConfig,
) -> BenchRow {
    let outcome = solve_row(kind, (a, b), seed, config).map_err(|e| e.to_string());
    BenchRow {
        suite: kind,
        n: a,
        l: b,
        seed,
        outcome,
    }
}

fn solve_row(
    kind: ProblemKind,
    (a, b): (usize, usize),
    seed: u64,
    config: &SolverConfig,
) -> Result<BenchOutcome> {
    let problem = random_instance(kind, Dims::from_row(kind, a, b), seed)?.build()?;
    let start = Instant::now();
    let (solution, _) = solve(&problem, config)?;
    Ok(BenchOutcome {
        iters: solution.iterations,
        tol: solution.stop_metric,
        value: solution.objective,
        seconds: start.elapsed().as_secs_f64(),
        termination: solution.termination,
    })
}

/// One row per size; row `i` uses seed `seed + i`. Rows run concurrently
/// with the `parallel` feature unless `sequential` is set.
pub fn run_suite(
    kind: ProblemKind,
    sizes: &[(usize, usize)],
    seed: u64,
    sequential: bool,
) -> Vec<BenchRow> {
    let jobs: Vec<(usize, (usize, usize))> = sizes.iter().copied().enumerate().collect();
    let job = |&(i, size): &(usize, (usize, usize))| {
        let row_seed = seed.wrapping_add(i as u64);
        run_row(kind, size, row_seed, &bench_config(row_seed))
    };
    if sequential {
        parallel::map_sequential(&jobs, job)
    } else {
        parallel::map(&jobs, job)
    }
}
