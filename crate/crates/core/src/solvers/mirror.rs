use crate::error::{Error, Result};
use crate::point::Dual;
use crate::problems::SaddleProblem;

use super::steps::{stopping_metric, ErgodicAverage};
use super::trace::{IterateLog, IterationRecord, RunTrace};
use super::{finish, Solution, SolverConfig, Termination, DESCENT_SLACK};

/// Mirror descent on a constraint-free problem, step `1/L` unless overridden.
pub fn mirror_descent(
    problem: &SaddleProblem,
    config: &SolverConfig,
) -> Result<(Solution, RunTrace)> {
    config.validate()?;
    if !problem.constraints.is_empty() {
        return Err(Error::InvalidConfig(
            "mirror descent needs a constraint-free problem; use pdhg instead".into(),
        ));
    }
    let t = config.step.unwrap_or(1.0 / problem.smoothness);
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "mirror-descent step must be positive, got {t}"
        )));
    }
    let kernel = problem.kernel;
    let no_dual = Dual(Vec::new());

    let mut x = problem.initial_point();
    let (mut fx, mut grad) = problem.f_and_grad(&x)?;
    let mut trace = RunTrace {
        records: Vec::new(),
        iterates: config.record_iterates.then(|| IterateLog {
            primal: vec![x.clone()],
            dual: vec![no_dual.clone()],
            extrapolated: Vec::new(),
        }),
    };
    let mut avg = ErgodicAverage::new(&x, &no_dual);
    let mut termination = Termination::MaxIterations;
    let mut metric = f64::INFINITY;
    let mut iterations = 0;

    for k in 1..=config.max_iters {
        let x_new = kernel.mirror_step(&problem.domain, &x, &grad, t)?;
        let (f_new, grad_new) = problem.f_and_grad(&x_new)?;
        if !f_new.is_finite() || !x_new.is_finite() {
            return Err(Error::NumericalFailure {
                iteration: k,
                detail: "objective or iterate is not finite".into(),
            });
        }
        if f_new > fx + DESCENT_SLACK * fx.abs().max(1.0) {
            return Err(Error::NumericalFailure {
                iteration: k,
                detail: format!("objective increased from {fx:.17e} to {f_new:.17e}"),
            });
        }
        metric = stopping_metric(kernel, (&x_new, &x), (&no_dual, &no_dual), t, t)?;
        trace.records.push(IterationRecord {
            iter: k,
            objective: problem.report(f_new),
            f: f_new,
            stop_metric: metric,
            tau: t,
            gamma: t,
            theta: 1.0,
            backtracks: 0,
            violation: 0.0,
        });
        if let Some(log) = trace.iterates.as_mut() {
            log.primal.push(x_new.clone());
            log.dual.push(no_dual.clone());
            log.extrapolated.push(no_dual.clone());
        }
        avg.push(t, &x_new, &no_dual);
        x = x_new;
        fx = f_new;
        grad = grad_new;
        iterations = k;
        if metric <= config.tol {
            termination = Termination::Converged;
            break;
        }
    }
    let solution = finish(
        problem,
        (x, no_dual),
        &avg,
        iterations,
        termination,
        (metric, t, t),
    )?;
    Ok((solution, trace))
}
