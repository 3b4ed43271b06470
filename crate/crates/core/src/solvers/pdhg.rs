use crate::error::{Error, Result};
use crate::point::{Dual, Point};
use crate::problems::SaddleProblem;

use super::steps::{feasible_step_sizes, stopping_metric, ErgodicAverage};
use super::trace::{IterateLog, IterationRecord, RunTrace};
use super::{
    finish, Solution, SolverConfig, Termination, BACKTRACK_SLACK, DUAL_DIVERGENCE, MAX_BACKTRACKS,
};

#[derive(Debug, Clone, Copy)]
enum StepRule {
    Fixed { tau: f64, gamma: f64 },
    Backtracking { alpha: f64, theta_bar: f64 },
}

/// PDHG with fixed steps; defaults satisfy `(1/tau - L)/gamma = ||A||^2` at the problem's kappa.
pub fn pdhg(problem: &SaddleProblem, config: &SolverConfig) -> Result<(Solution, RunTrace)> {
    config.validate()?;
    let kappa = config.kappa_for(problem);
    let (tau, gamma) = match (config.step, config.gamma) {
        (Some(tau), Some(gamma)) => (tau, gamma),
        (Some(tau), None) => (tau, tau / kappa),
        (None, _) => {
            let x0 = problem.initial_point();
            let opnorm = problem
                .constraints
                .operator_norm(&x0, config.power_iters, config.seed)?;
            feasible_step_sizes(problem.smoothness, opnorm, kappa)?
        }
    };
    run(
        problem,
        config,
        StepRule::Fixed { tau, gamma },
        (tau, gamma),
    )
}

/// PDHG with the backtracking step-size search.
pub fn pdhg_backtracking(
    problem: &SaddleProblem,
    config: &SolverConfig,
) -> Result<(Solution, RunTrace)> {
    config.validate()?;
    let kappa = config.kappa_for(problem);
    let tau = config.step.unwrap_or(1.0 / problem.smoothness);
    let gamma = config.gamma.unwrap_or(tau / kappa);
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "initial step must be positive, got {tau}"
        )));
    }
    let rule = StepRule::Backtracking {
        alpha: config.alpha,
        theta_bar: config.theta_bar,
    };
    run(problem, config, rule, (tau, gamma))
}

struct Accepted {
    x: Point,
    z: Dual,
    z_bar: Dual,
    ax: Dual,
    f: f64,
    grad: Point,
    tau: f64,
    gamma: f64,
    theta: f64,
    backtracks: usize,
}

fn run(
    problem: &SaddleProblem,
    config: &SolverConfig,
    rule: StepRule,
    (mut tau_prev, mut gamma_prev): (f64, f64),
) -> Result<(Solution, RunTrace)> {
    let kernel = problem.kernel;
    let cons = &problem.constraints;
    let b = cons.rhs();

    let mut x = problem.initial_point();
    let mut z = cons.zero_dual();
    let mut z_prev = z.clone();
    let mut ax = cons.apply(&x)?;
    let (mut fx, mut grad) = problem.f_and_grad(&x)?;

    let mut trace = RunTrace {
        records: Vec::new(),
        iterates: config.record_iterates.then(|| IterateLog {
            primal: vec![x.clone()],
            dual: vec![z.clone()],
            extrapolated: Vec::new(),
        }),
    };
    let mut avg = ErgodicAverage::new(&x, &z);
    let mut termination = Termination::MaxIterations;
    let mut metric = f64::INFINITY;
    let mut iterations = 0;

    for k in 1..=config.max_iters {
        let step = |theta: f64, tau: f64, gamma: f64| -> Result<Accepted> {
            let z_bar = z.axpy(theta, &z.sub(&z_prev));
            let direction = if cons.is_empty() {
                grad.clone()
            } else {
                grad.axpy(1.0, &cons.adjoint(&z_bar, &x)?)
            };
            let x_new = kernel.mirror_step(&problem.domain, &x, &direction, tau)?;
            let ax_new = cons.apply(&x_new)?;
            let z_new = cons.project(&z.axpy(gamma, &ax_new.sub(&b)))?;
            let (f_new, grad_new) = problem.f_and_grad(&x_new)?;
            Ok(Accepted {
                x: x_new,
                z: z_new,
                z_bar,
                ax: ax_new,
                f: f_new,
                grad: grad_new,
                tau,
                gamma,
                theta,
                backtracks: 0,
            })
        };

        let next = match rule {
            StepRule::Fixed { tau, gamma } => step(1.0, tau, gamma)?,
            StepRule::Backtracking { alpha, theta_bar } => {
                let mut theta = theta_bar;
                let mut trials = 0;
                loop {
                    let cand = step(theta, theta * tau_prev, theta * gamma_prev)?;
                    if exit_test(problem, &x, fx, &grad, &ax, &cand)? {
                        break Accepted {
                            backtracks: trials,
                            ..cand
                        };
                    }
                    trials += 1;
                    if trials >= MAX_BACKTRACKS {
                        return Err(Error::BacktrackingExhausted {
                            iteration: k,
                            trials,
                        });
                    }
                    theta *= alpha;
                }
            }
        };

        if !next.f.is_finite() || !next.x.is_finite() || !next.z.is_finite() {
            return Err(Error::NumericalFailure {
                iteration: k,
                detail: "objective or iterate is not finite".into(),
            });
        }
        let dual_norm = next.z.norm();
        if dual_norm > DUAL_DIVERGENCE {
            return Err(Error::SuspectedInfeasible {
                iteration: k,
                dual_norm,
            });
        }

        metric = stopping_metric(kernel, (&next.x, &x), (&next.z, &z), next.tau, next.gamma)?;
        let violations = cons.residual_violations(&next.ax.sub(&b))?;
        trace.records.push(IterationRecord {
            iter: k,
            objective: problem.report(next.f),
            f: next.f,
            stop_metric: metric,
            tau: next.tau,
            gamma: next.gamma,
            theta: next.theta,
            backtracks: next.backtracks,
            violation: violations.iter().map(|v| v * v).sum::<f64>().sqrt(),
        });
        if let Some(log) = trace.iterates.as_mut() {
            log.primal.push(next.x.clone());
            log.dual.push(next.z.clone());
            log.extrapolated.push(next.z_bar.clone());
        }
        avg.push(next.tau, &next.x, &next.z_bar);

        z_prev = std::mem::replace(&mut z, next.z);
        x = next.x;
        ax = next.ax;
        fx = next.f;
        grad = next.grad;
        tau_prev = next.tau;
        gamma_prev = next.gamma;
        iterations = k;
        if metric <= config.tol {
            termination = Termination::Converged;
            break;
        }
    }
    let solution = finish(
        problem,
        (x, z),
        &avg,
        iterations,
        termination,
        (metric, tau_prev, gamma_prev),
    )?;
    Ok((solution, trace))
}

/// Relative smoothness plus the primal-dual coupling condition on one trial step.
fn exit_test(
    problem: &SaddleProblem,
    x: &Point,
    fx: f64,
    grad: &Point,
    ax: &Dual,
    cand: &Accepted,
) -> Result<bool> {
    let dx = cand.x.sub(x);
    let lhs = cand.f - fx - grad.inner(&dx);
    let dz = cand.z.sub(&cand.z_bar);
    let coupling = if dz.is_empty() {
        0.0
    } else {
        dz.inner(&cand.ax.sub(ax))
    };
    let rhs = problem.kernel.divergence(&cand.x, x)? / cand.tau + dz.norm_sq() / (2.0 * cand.gamma)
        - coupling;
    Ok(lhs.is_finite() && lhs <= rhs + BACKTRACK_SLACK * fx.abs().max(1.0))
}
