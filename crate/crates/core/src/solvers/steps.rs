//! Step-size rules, stopping metric, ergodic averaging and dual projection.

use crate::error::{Error, Result};
use crate::kernels::KernelKind;
use crate::point::{Dual, Point};
use crate::problems::LinearConstraintSet;

/// Largest `tau` with `(1/tau - L) * kappa / tau = opnorm^2`, and `gamma = tau / kappa`.
pub fn feasible_step_sizes(smoothness: f64, opnorm: f64, kappa: f64) -> Result<(f64, f64)> {
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "step ratio kappa must be positive, got {kappa}"
        )));
    }
    if smoothness < 0.0 || opnorm < 0.0 {
        return Err(Error::InvalidConfig(
            "smoothness and operator norm must be nonnegative".into(),
        ));
    }
    let inv_tau =
        0.5 * smoothness + (0.25 * smoothness * smoothness + opnorm * opnorm / kappa).sqrt();
    if inv_tau == 0.0 {
        return Err(Error::InvalidConfig(
            "no step-size bound: smoothness and operator norm are both zero".into(),
        ));
    }
    let tau = 1.0 / inv_tau;
    Ok((tau, tau / kappa))
}

/// Lower bound on accepted backtracking steps.
pub fn tau_min(tau_init: f64, alpha: f64, smoothness: f64, opnorm: f64, kappa: f64) -> f64 {
    // Rationalized form of sqrt(L^2 k^2 / 4|A|^4 + k / |A|^2) - L k / 2|A|^2.
    let denom =
        0.5 * smoothness + (0.25 * smoothness * smoothness + opnorm * opnorm / kappa).sqrt();
    if denom > 0.0 {
        tau_init.min(alpha / denom)
    } else {
        tau_init
    }
}

/// Scaled primal and dual progress between consecutive iterates.
pub fn stopping_metric(
    kernel: KernelKind,
    (x_new, x_old): (&Point, &Point),
    (z_new, z_old): (&Dual, &Dual),
    tau: f64,
    gamma: f64,
) -> Result<f64> {
    let primal = kernel.divergence(x_new, x_old)?.max(0.0) / (tau * x_new.norm_inf().max(1.0));
    if z_new.is_empty() {
        return Ok(primal);
    }
    let dual = z_new.sub(z_old).norm_sq() / (2.0 * gamma * z_new.norm_inf().max(1.0));
    Ok(primal + dual)
}

/// Weighted averages of primal and dual iterates.
pub fn ergodic_averages(xs: &[Point], zs: &[Dual], weights: &[f64]) -> Result<(Point, Dual)> {
    if xs.is_empty() || xs.len() != weights.len() || zs.len() != weights.len() {
        return Err(Error::InvalidConfig(
            "ergodic averaging needs one weight per iterate".into(),
        ));
    }
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return Err(Error::InvalidConfig(
            "ergodic weights must have positive sum".into(),
        ));
    }
    let mut acc = ErgodicAverage::new(&xs[0], &zs[0]);
    for ((x, z), &w) in xs.iter().zip(zs).zip(weights) {
        acc.push(w, x, z);
    }
    Ok(acc.averages())
}

/// Running weighted sums for ergodic averages.
#[derive(Debug, Clone)]
pub struct ErgodicAverage {
    x_sum: Point,
    z_sum: Dual,
    weight: f64,
}

impl ErgodicAverage {
    pub fn new(x_like: &Point, z_like: &Dual) -> Self {
        Self {
            x_sum: x_like.zeros_like(),
            z_sum: z_like.zeros_like(),
            weight: 0.0,
        }
    }

    pub fn push(&mut self, w: f64, x: &Point, z: &Dual) {
        self.x_sum = self.x_sum.axpy(w, x);
        self.z_sum = self.z_sum.axpy(w, z);
        self.weight += w;
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn averages(&self) -> (Point, Dual) {
        let s = 1.0 / self.weight;
        (self.x_sum.scale(s), self.z_sum.scale(s))
    }
}

/// Blockwise projection onto the dual cones of `constraints`.
pub fn dual_projection(z: &Dual, constraints: &LinearConstraintSet) -> Result<Dual> {
    constraints.project(z)
}
