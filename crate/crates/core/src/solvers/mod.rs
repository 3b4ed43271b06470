//! Mirror descent, PDHG and backtracking PDHG.

mod mirror;
mod pdhg;
mod steps;
mod trace;

use serde::{Deserialize, Serialize};

pub use mirror::mirror_descent;
pub use pdhg::{pdhg, pdhg_backtracking};
pub use steps::{
    dual_projection, ergodic_averages, feasible_step_sizes, stopping_metric, tau_min,
    ErgodicAverage,
};
pub use trace::{IterateLog, IterationRecord, RunTrace, CSV_HEADER};

use crate::error::{Error, Result};
use crate::point::{Dual, Point};
use crate::problems::SaddleProblem;

/// Dual norm beyond which a run is declared suspected infeasible.
pub const DUAL_DIVERGENCE: f64 = 1e12;
/// Relative slack on monotone descent.
pub const DESCENT_SLACK: f64 = 1e-12;
/// Relative slack on the backtracking exit test.
pub const BACKTRACK_SLACK: f64 = 1e-13;
pub const MAX_BACKTRACKS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Md,
    Pdhg,
    PdhgBt,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    /// Mirror-descent step `t`, fixed PDHG `tau`, or the initial `tau` for backtracking.
    pub step: Option<f64>,
    pub gamma: Option<f64>,
    /// `tau / gamma`; the problem default when unset.
    pub kappa: Option<f64>,
    pub alpha: f64,
    pub theta_bar: f64,
    pub tol: f64,
    pub max_iters: usize,
    pub seed: u64,
    #[serde(skip)]
    pub record_iterates: bool,
    pub power_iters: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::PdhgBt,
            step: None,
            gamma: None,
            kappa: None,
            alpha: 0.75,
            theta_bar: 1.01,
            tol: 1e-7,
            max_iters: 10_000,
            seed: 0,
            record_iterates: false,
            power_iters: 50,
        }
    }
}

impl SolverConfig {
    pub fn with_algorithm(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        if !(self.theta_bar >= 1.0) || !self.theta_bar.is_finite() {
            return bad(format!(
                "theta_bar must be at least 1, got {}",
                self.theta_bar
            ));
        }
        if !(self.tol > 0.0) {
            return bad(format!("tol must be positive, got {}", self.tol));
        }
        for (name, v) in [
            ("kappa", self.kappa),
            ("step", self.step),
            ("gamma", self.gamma),
        ] {
            if let Some(v) = v {
                if !(v > 0.0) || !v.is_finite() {
                    return bad(format!("{name} must be positive, got {v}"));
                }
            }
        }
        Ok(())
    }

    pub(crate) fn kappa_for(&self, problem: &SaddleProblem) -> f64 {
        self.kappa.unwrap_or_else(|| problem.kind.default_kappa())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Converged,
    MaxIterations,
}

#[derive(Debug, Clone)]
pub struct Solution {
    /// Last primal iterate, renormalized onto the domain.
    pub x: Point,
    pub z: Dual,
    pub x_avg: Point,
    pub z_avg: Dual,
    /// Natural objective at `x`.
    pub objective: f64,
    /// Natural objective at `x_avg`.
    pub objective_avg: f64,
    pub iterations: usize,
    pub termination: Termination,
    pub stop_metric: f64,
    /// Constraint violation norms per block at `x`.
    pub violations: Vec<f64>,
    pub tau: f64,
    pub gamma: f64,
}

impl Solution {
    pub fn converged(&self) -> bool {
        self.termination == Termination::Converged
    }

    pub fn violation(&self) -> f64 {
        self.violations.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Runs the configured algorithm.
pub fn solve(problem: &SaddleProblem, config: &SolverConfig) -> Result<(Solution, RunTrace)> {
    match config.algorithm {
        Algorithm::Md => mirror_descent(problem, config),
        Algorithm::Pdhg => pdhg(problem, config),
        Algorithm::PdhgBt => pdhg_backtracking(problem, config),
    }
}

pub(crate) fn finish(
    problem: &SaddleProblem,
    last: (Point, Dual),
    avg: &ErgodicAverage,
    iterations: usize,
    termination: Termination,
    (stop_metric, tau, gamma): (f64, f64, f64),
) -> Result<Solution> {
    let (x_raw, z) = last;
    let (x_avg, z_avg) = if avg.weight() > 0.0 {
        avg.averages()
    } else {
        (x_raw.clone(), z.clone())
    };
    let x = problem.domain.normalize(&x_raw);
    let x_avg = problem.domain.normalize(&x_avg);
    Ok(Solution {
        objective: problem.value(&x)?,
        objective_avg: problem.value(&x_avg)?,
        violations: problem.constraints.violations(&x)?,
        x,
        z,
        x_avg,
        z_avg,
        iterations,
        termination,
        stop_metric,
        tau,
        gamma,
    })
}
