//! Legendre kernels, their Bregman divergences and mirror-step solvers.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::entropy;
use crate::error::{Error, Result};
use crate::matfun::{
    clamp_eigenvalues, spectral_decompose, trace_functional_gradient, Hermitian, ScalarFunction,
    Spectrum, CLAMP_RELATIVE,
};
use crate::point::Point;

/// Residual accepted for the unit-trace root.
pub const ROOT_TOL: f64 = 1e-12;
const ROOT_MAX_ITERS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelKind {
    /// `||x||^2 / 2` on the whole space.
    Energy,
    /// `sum x log x` on nonnegative vectors.
    NegShannon,
    /// `tr rho log rho` on positive semidefinite matrices.
    NegVonNeumann,
    /// `-sum log x` on positive vectors.
    NegBurg,
    /// `-log det rho` on positive definite matrices.
    NegLogDet,
}

/// Primal feasible set handled inside the mirror step.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    /// Probability vectors of the given length.
    Simplex(usize),
    /// Density matrices of the given dimension.
    Density(usize),
    /// Nonnegative `rows x marginal.len()` matrices (flattened column-major)
    /// whose column sums equal `marginal`.
    FixedMarginal { rows: usize, marginal: DVector<f64> },
    /// Unconstrained real vectors.
    Free(usize),
}

impl Domain {
    /// Uniform distribution, maximally mixed state, or `p_j / rows` per column.
    pub fn initial_point(&self) -> Point {
        match self {
            Domain::Simplex(n) => Point::Vector(DVector::from_element(*n, 1.0 / *n as f64)),
            Domain::Density(n) => Point::Matrix(Hermitian::maximally_mixed(*n)),
            Domain::FixedMarginal { rows, marginal } => {
                let r = *rows;
                Point::Vector(DVector::from_fn(r * marginal.len(), |k, _| {
                    marginal[k / r] / r as f64
                }))
            }
            Domain::Free(n) => Point::Vector(DVector::zeros(*n)),
        }
    }

    /// Renormalizes sum, trace or column sums.
    pub fn normalize(&self, x: &Point) -> Point {
        match (self, x) {
            (Domain::Simplex(_), Point::Vector(v)) => Point::Vector(v / v.sum()),
            (Domain::Density(_), Point::Matrix(m)) => Point::Matrix(m.scale(1.0 / m.trace())),
            (Domain::FixedMarginal { rows, marginal }, Point::Vector(v)) => {
                let mut out = v.clone();
                for (j, col) in out.as_mut_slice().chunks_mut(*rows).enumerate() {
                    let s: f64 = col.iter().sum();
                    col.iter_mut().for_each(|c| *c *= marginal[j] / s);
                }
                Point::Vector(out)
            }
            _ => x.clone(),
        }
    }

    /// Checks that `x` has the right shape for this domain.
    pub fn check_shape(&self, x: &Point) -> Result<()> {
        let ok = match (self, x) {
            (Domain::Simplex(n), Point::Vector(v)) | (Domain::Free(n), Point::Vector(v)) => {
                v.len() == *n
            }
            (Domain::Density(n), Point::Matrix(m)) => m.dim() == *n,
            (Domain::FixedMarginal { rows, marginal }, Point::Vector(v)) => {
                v.len() == rows * marginal.len()
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidPoint(format!(
                "point shape does not match domain {self:?}"
            )))
        }
    }
}

impl KernelKind {
    /// Kernel value and gradient.
    pub fn value_and_gradient(self, x: &Point) -> Result<(f64, Point)> {
        match (self, x) {
            (KernelKind::Energy, _) => Ok((0.5 * x.norm_sq(), x.clone())),
            (KernelKind::NegShannon, Point::Vector(v)) => {
                check_nonnegative(v)?;
                let floor = CLAMP_RELATIVE * v.amax();
                let value = -entropy::shannon_entropy(v.as_slice());
                let grad = v.map(|a| a.max(floor).ln() + 1.0);
                Ok((value, Point::Vector(grad)))
            }
            (KernelKind::NegVonNeumann, Point::Matrix(m)) => {
                let value = -entropy::von_neumann_entropy(m);
                let grad = trace_functional_gradient(m, &ScalarFunction::xlogx())?;
                Ok((value, Point::Matrix(grad)))
            }
            (KernelKind::NegBurg, Point::Vector(v)) => {
                check_positive(v)?;
                let value = -v.iter().map(|a| a.ln()).sum::<f64>();
                Ok((value, Point::Vector(v.map(|a| -1.0 / a))))
            }
            (KernelKind::NegLogDet, Point::Matrix(m)) => {
                let spec = spectral_decompose(m);
                check_pd(&spec)?;
                let value = -spec.eigenvalues.iter().map(|l| l.ln()).sum::<f64>();
                Ok((value, Point::Matrix(spec.map(|l| -1.0 / l))))
            }
            _ => Err(mismatch(self)),
        }
    }

    pub fn value(self, x: &Point) -> Result<f64> {
        Ok(self.value_and_gradient(x)?.0)
    }

    /// Bregman divergence `D(x || y)`; `+inf` when `x` is outside the
    /// support allowed by `y`.
    pub fn divergence(self, x: &Point, y: &Point) -> Result<f64> {
        if !x.same_shape(y) {
            return Err(Error::InvalidPoint(
                "divergence arguments differ in shape".into(),
            ));
        }
        match (self, x, y) {
            (KernelKind::Energy, _, _) => Ok(0.5 * x.sub(y).norm_sq()),
            (KernelKind::NegShannon, Point::Vector(a), Point::Vector(b)) => {
                check_nonnegative(a)?;
                check_nonnegative(b)?;
                Ok(entropy::kl_divergence(a.as_slice(), b.as_slice()))
            }
            (KernelKind::NegVonNeumann, Point::Matrix(a), Point::Matrix(b)) => {
                let d = entropy::quantum_relative_entropy(a, b)?;
                Ok(d - (a.trace() - b.trace()))
            }
            (KernelKind::NegBurg, Point::Vector(a), Point::Vector(b)) => {
                check_positive(b)?;
                check_nonnegative(a)?;
                if a.iter().any(|&v| v == 0.0) {
                    return Ok(f64::INFINITY);
                }
                Ok(a.iter()
                    .zip(b.iter())
                    .map(|(&u, &v)| u / v - (u / v).ln() - 1.0)
                    .sum())
            }
            (KernelKind::NegLogDet, Point::Matrix(a), Point::Matrix(b)) => logdet_divergence(a, b),
            _ => Err(mismatch(self)),
        }
    }

    /// One mirror step `argmin_{x in domain} <g, x> + D(x || x_k) / t`.
    pub fn mirror_step(self, domain: &Domain, x: &Point, g: &Point, t: f64) -> Result<Point> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "step size must be positive, got {t}"
            )));
        }
        if !g.is_finite() {
            return Err(Error::NonFinite("mirror-step gradient"));
        }
        match (self, domain, x, g) {
            (KernelKind::NegShannon, Domain::Simplex(_), Point::Vector(x), Point::Vector(g)) => {
                Ok(Point::Vector(mirror_step_simplex(x, g, t)?))
            }
            (
                KernelKind::NegShannon,
                Domain::FixedMarginal { rows, marginal },
                Point::Vector(x),
                Point::Vector(g),
            ) => Ok(Point::Vector(mirror_step_fixed_marginal(
                x, g, t, *rows, marginal,
            )?)),
            (KernelKind::NegVonNeumann, Domain::Density(_), Point::Matrix(x), Point::Matrix(g)) => {
                Ok(Point::Matrix(mirror_step_density(x, g, t)?))
            }
            (KernelKind::NegLogDet, Domain::Density(_), Point::Matrix(x), Point::Matrix(g)) => {
                Ok(Point::Matrix(mirror_step_logdet_density(x, g, t)?))
            }
            (KernelKind::NegBurg, Domain::Simplex(_), Point::Vector(x), Point::Vector(g)) => {
                Ok(Point::Vector(mirror_step_burg_simplex(x, g, t)?))
            }
            (KernelKind::Energy, Domain::Free(_), _, _) => Ok(x.axpy(-t, g)),
            _ => Err(Error::Unsupported(format!(
                "no mirror step for {self:?} on {domain:?}"
            ))),
        }
    }
}

pub fn kernel_value_and_gradient(kind: KernelKind, x: &Point) -> Result<(f64, Point)> {
    kind.value_and_gradient(x)
}

pub fn bregman_divergence(kind: KernelKind, x: &Point, y: &Point) -> Result<f64> {
    kind.divergence(x, y)
}

fn mismatch(kind: KernelKind) -> Error {
    Error::Unsupported(format!("point kind does not match kernel {kind:?}"))
}

fn check_nonnegative(v: &DVector<f64>) -> Result<()> {
    match v.iter().find(|&&a| !(a >= 0.0)) {
        Some(&a) if a.is_nan() => Err(Error::NonFinite("kernel argument")),
        Some(&a) => Err(Error::DomainViolation {
            value: a,
            lo: 0.0,
            hi: f64::INFINITY,
        }),
        None => Ok(()),
    }
}

fn check_positive(v: &DVector<f64>) -> Result<()> {
    match v.iter().find(|&&a| !(a > 0.0 && a.is_finite())) {
        Some(&a) => Err(Error::DomainViolation {
            value: a,
            lo: 0.0,
            hi: f64::INFINITY,
        }),
        None => Ok(()),
    }
}

fn check_pd(spec: &Spectrum) -> Result<()> {
    let min = spec.min();
    if !(min > 0.0) {
        return Err(Error::DomainViolation {
            value: min,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    Ok(())
}

/// `tr(A B^-1) - log det(A B^-1) - n` through the spectrum of `B^-1/2 A B^-1/2`.
fn logdet_divergence(a: &Hermitian, b: &Hermitian) -> Result<f64> {
    let sb = spectral_decompose(b);
    check_pd(&sb)?;
    let inv_sqrt = sb.map(|l| 1.0 / l.sqrt());
    let w = a.conjugate_by(inv_sqrt.matrix());
    let mu = spectral_decompose(&w).eigenvalues;
    if mu.iter().any(|&m| m <= 0.0) {
        return Ok(f64::INFINITY);
    }
    Ok(mu.iter().map(|&m| m - m.ln() - 1.0).sum())
}

/// Entropic step `x_i exp(-t g_i)` normalized, computed in the log domain.
pub fn mirror_step_simplex(x: &DVector<f64>, g: &DVector<f64>, t: f64) -> Result<DVector<f64>> {
    if x.len() != g.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: g.len(),
        });
    }
    check_nonnegative(x)?;
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("simplex gradient"));
    }
    Ok(softmax(
        x.iter().zip(g.iter()).map(|(&a, &b)| a.ln() - t * b),
        1.0,
        x.len(),
    ))
}

/// Normalized `exp` of log-weights scaled to `total`; `-inf` weights give zero.
fn softmax(logits: impl Iterator<Item = f64>, total: f64, len: usize) -> DVector<f64> {
    let l: Vec<f64> = logits.collect();
    let top = l.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = l.iter().map(|&v| (v - top).exp()).collect();
    let s: f64 = w.iter().sum();
    DVector::from_iterator(len, w.into_iter().map(|v| total * v / s))
}

/// Column-wise entropic step on the fixed-marginal set: each column is
/// renormalized to its prescribed sum.
pub fn mirror_step_fixed_marginal(
    x: &DVector<f64>,
    g: &DVector<f64>,
    t: f64,
    rows: usize,
    marginal: &DVector<f64>,
) -> Result<DVector<f64>> {
    if x.len() != rows * marginal.len() || g.len() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: rows * marginal.len(),
            found: x.len().min(g.len()),
        });
    }
    check_nonnegative(x)?;
    let mut out = DVector::zeros(x.len());
    for (j, &pj) in marginal.iter().enumerate() {
        let range = j * rows..(j + 1) * rows;
        let col = softmax(range.clone().map(|k| x[k].ln() - t * g[k]), pj, rows);
        out.rows_mut(j * rows, rows).copy_from(&col);
    }
    Ok(out)
}

/// `exp(log rho - t G)` normalized to unit trace.
pub fn mirror_step_density(rho: &Hermitian, g: &Hermitian, t: f64) -> Result<Hermitian> {
    if rho.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: g.dim(),
        });
    }
    let spec = spectral_decompose(rho);
    let (logs, _) = clamp_eigenvalues(&spec.eigenvalues, &ScalarFunction::log())?;
    let log_rho = Hermitian::from_eigen(
        &logs.iter().map(|l| l.ln()).collect::<Vec<_>>(),
        &spec.eigenvectors,
    );
    let h = log_rho.axpy(-t, g);
    let hs = spectral_decompose(&h);
    let top = hs.max();
    let w: Vec<f64> = hs.eigenvalues.iter().map(|&l| (l - top).exp()).collect();
    let s: f64 = w.iter().sum();
    let w: Vec<f64> = w.into_iter().map(|v| v / s).collect();
    Ok(Hermitian::from_eigen(&w, &hs.eigenvectors))
}

/// Log-determinant step `[sigma^-1 + t G + nu I]^-1` with `nu` fixing unit trace.
pub fn mirror_step_logdet_density(sigma: &Hermitian, g: &Hermitian, t: f64) -> Result<Hermitian> {
    if sigma.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: sigma.dim(),
            found: g.dim(),
        });
    }
    let spec = spectral_decompose(sigma);
    check_pd(&spec)?;
    let inv = spec.map(|l| 1.0 / l);
    let bar = inv.axpy(t, g);
    let bs = spectral_decompose(&bar);
    let (gaps, shift) = unit_trace_shift(&bs.eigenvalues)?;
    let w: Vec<f64> = gaps.iter().map(|d| 1.0 / (d + shift)).collect();
    Ok(Hermitian::from_eigen(&w, &bs.eigenvectors))
}

/// Burg-entropy step on the simplex: `x+_i = 1 / (1/x_i + t g_i + nu)`.
pub fn mirror_step_burg_simplex(
    x: &DVector<f64>,
    g: &DVector<f64>,
    t: f64,
) -> Result<DVector<f64>> {
    check_positive(x)?;
    let lam: Vec<f64> = x
        .iter()
        .zip(g.iter())
        .map(|(&a, &b)| 1.0 / a + t * b)
        .collect();
    let (gaps, shift) = unit_trace_shift(&lam)?;
    Ok(DVector::from_iterator(
        x.len(),
        gaps.iter().map(|d| 1.0 / (d + shift)),
    ))
}

/// The unique `nu > -min(eigs)` with `sum 1 / (eigs_i + nu) = 1`.
pub fn solve_unit_trace_root(eigs: &[f64]) -> Result<f64> {
    let (_, shift) = unit_trace_shift(eigs)?;
    let min = eigs.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(shift - min)
}

/// Solves in the shifted variable `s = nu + min(eigs)`, returning the gaps
/// `eigs_i - min(eigs)` and `s`. Working with gaps keeps `eigs_i + nu`
/// free of cancellation.
fn unit_trace_shift(eigs: &[f64]) -> Result<(Vec<f64>, f64)> {
    if eigs.is_empty() {
        return Err(Error::InvalidPoint("empty eigenvalue list".into()));
    }
    if eigs.iter().any(|l| !l.is_finite()) {
        return Err(Error::NonFinite("unit-trace root eigenvalues"));
    }
    let n = eigs.len() as f64;
    let min = eigs.iter().copied().fold(f64::INFINITY, f64::min);
    let scale = eigs.iter().fold(1.0f64, |a, l| a.max(l.abs()));
    let gaps: Vec<f64> = eigs.iter().map(|l| l - min).collect();
    let residual = |s: f64| -> (f64, f64) {
        gaps.iter().fold((-1.0, 0.0), |(h, dh), d| {
            let inv = 1.0 / (d + s);
            (h + inv, dh - inv * inv)
        })
    };
    let (mut lo, mut hi) = (1e-14 * scale, n);
    let mut s = 0.5 * n;
    for _ in 0..ROOT_MAX_ITERS {
        let (h, dh) = residual(s);
        if h.abs() <= 4.0 * f64::EPSILON * n {
            return Ok((gaps, s));
        }
        if h > 0.0 {
            lo = s;
        } else {
            hi = s;
        }
        let newton = s - h / dh;
        s = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
    }
    let (h, _) = residual(s);
    if h.abs() <= ROOT_TOL {
        Ok((gaps, s))
    } else {
        Err(Error::RootFinding {
            lo: lo - min,
            hi: hi - min,
        })
    }
}
