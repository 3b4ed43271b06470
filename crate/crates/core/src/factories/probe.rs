//! Feasibility and constraint-activity probes for energy-constrained problems.

use std::sync::Arc;

use nalgebra::DVector;

use crate::error::Result;
use crate::kernels::Domain;
use crate::matfun::{spectral_decompose, Hermitian};
use crate::point::Point;
use crate::problems::{LinearConstraintSet, LinearOp, Objective, SaddleProblem, Sense};
use crate::solvers::{mirror_descent, SolverConfig};

/// Constraint violation accepted as feasible.
pub const FEASIBILITY_TOL: f64 = 1e-9;
const GRID_BUDGET: usize = 20_000;
const PENALTY_ITERS: usize = 2_000;
const ACTIVITY_TOL: f64 = 1e-5;
const ACTIVITY_ITERS: usize = 20_000;

/// Whether some domain point satisfies the dualized constraints.
///
/// Tries the domain center, extreme points, a coarse simplex grid and finally
/// mirror descent on the squared violation.
pub fn is_feasible(problem: &SaddleProblem) -> Result<bool> {
    let cons = &problem.constraints;
    if cons.is_empty() {
        return Ok(true);
    }
    let ok = |x: &Point| -> Result<bool> { Ok(cons.violation(x)? <= FEASIBILITY_TOL) };
    if ok(&problem.initial_point())? {
        return Ok(true);
    }
    for candidate in extreme_candidates(problem) {
        if ok(&candidate)? {
            return Ok(true);
        }
    }
    if let Domain::Simplex(m) = problem.domain {
        if simplex_grid(m, GRID_BUDGET)
            .into_iter()
            .map(|p| ok(&Point::Vector(p)))
            .any(|r| matches!(r, Ok(true)))
        {
            return Ok(true);
        }
    }
    let penalty = penalty_problem(problem)?;
    let config = SolverConfig {
        max_iters: PENALTY_ITERS,
        tol: f64::MIN_POSITIVE,
        ..SolverConfig::default()
    };
    let (sol, _) = mirror_descent(&penalty, &config)?;
    ok(&sol.x)
}

/// Whether any constraint is violated at the unconstrained optimum.
pub fn active_constraints(problem: &SaddleProblem) -> Result<bool> {
    if problem.constraints.is_empty() {
        return Ok(false);
    }
    let config = SolverConfig {
        max_iters: ACTIVITY_ITERS,
        tol: ACTIVITY_TOL,
        ..SolverConfig::default()
    };
    let (sol, _) = mirror_descent(&problem.unconstrained(), &config)?;
    Ok(problem.constraints.violation(&sol.x)? > FEASIBILITY_TOL)
}

fn extreme_candidates(problem: &SaddleProblem) -> Vec<Point> {
    match &problem.domain {
        Domain::Simplex(m) => (0..*m)
            .map(|j| Point::Vector(DVector::from_fn(*m, |i, _| if i == j { 1.0 } else { 0.0 })))
            .collect(),
        Domain::Density(n) => {
            let mut observables: Vec<Hermitian> = Vec::new();
            for block in &problem.constraints.blocks {
                if let LinearOp::Observables(obs) = &block.op {
                    observables.extend(obs.iter().cloned());
                }
            }
            if let Some(total) = observables.iter().cloned().reduce(|a, b| a + b) {
                observables.push(total);
            }
            observables
                .iter()
                .map(|a| {
                    let spec = spectral_decompose(a);
                    let ground = spec
                        .eigenvectors
                        .column(n - 1)
                        .iter()
                        .copied()
                        .collect::<Vec<_>>();
                    Point::Matrix(Hermitian::outer(&ground))
                })
                .collect()
        }
        _ => Vec::new(),
    }
}

/// Points of the simplex with coordinates in multiples of `1/r`, for the largest `r` within budget.
fn simplex_grid(m: usize, budget: usize) -> Vec<DVector<f64>> {
    let count = |r: usize| -> f64 { (1..m).map(|k| (r + k) as f64 / k as f64).product() };
    let mut r = 1;
    while count(r + 1) <= budget as f64 && r < 1000 {
        r += 1;
    }
    let mut out = Vec::new();
    let mut current = vec![0usize; m];
    compositions(r, 0, &mut current, &mut |c| {
        out.push(DVector::from_iterator(
            m,
            c.iter().map(|&k| k as f64 / r as f64),
        ));
    });
    out
}

fn compositions(
    remaining: usize,
    idx: usize,
    current: &mut [usize],
    visit: &mut impl FnMut(&[usize]),
) {
    if idx + 1 == current.len() {
        current[idx] = remaining;
        visit(current);
        return;
    }
    for k in 0..=remaining {
        current[idx] = k;
        compositions(remaining - k, idx + 1, current, visit);
    }
}

/// `1/2 ||proj_K(A x - b)||^2`.
#[derive(Debug)]
struct SquaredViolation {
    constraints: LinearConstraintSet,
}

impl Objective for SquaredViolation {
    fn value_and_gradient(&self, x: &Point) -> Result<(f64, Point)> {
        let positive = self.constraints.project(&self.constraints.residual(x)?)?;
        Ok((
            0.5 * positive.norm_sq(),
            self.constraints.adjoint(&positive, x)?,
        ))
    }
}

fn penalty_problem(problem: &SaddleProblem) -> Result<SaddleProblem> {
    let x0 = problem.initial_point();
    let opnorm = problem.constraints.operator_norm(&x0, 50, 0)?;
    Ok(SaddleProblem {
        objective: Arc::new(SquaredViolation {
            constraints: problem.constraints.clone(),
        }),
        sense: Sense::Minimize,
        constraints: LinearConstraintSet::empty(),
        smoothness: (opnorm * opnorm * 1.01).max(1e-12),
        strong_convexity: None,
        report_offset: 0.0,
        ..problem.clone()
    })
}
