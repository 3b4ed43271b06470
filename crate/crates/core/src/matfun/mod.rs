//! Spectral calculus for Hermitian matrices.
//!
//! Operator functions `f(H) = U f(Lambda) U^dagger`, their directional
//! (Frechet) derivatives through the first divided-difference table, and the
//! gradient `f'(H)` of trace functionals `tr f(H)`.

mod hermitian;
mod subsystem;

pub use hermitian::{CMatrix, Hermitian, C64, HERMITIAN_TOL};
pub use subsystem::{partial_trace, partial_trace_adjoint, partial_transpose, Subsystem};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Eigenvalues below `CLAMP_RELATIVE * lambda_max` are lifted to that floor
/// before evaluating functions whose domain is the open positive half-line.
pub const CLAMP_RELATIVE: f64 = 1e-14;

/// Negative eigenvalues of magnitude up to `NEGATIVE_SLACK * max(1, lambda_max)`
/// are treated as rounding noise and clamped; anything below is a domain error.
pub const NEGATIVE_SLACK: f64 = 1e-10;

/// Relative gap under which two eigenvalues are merged in the divided
/// difference table.
pub const MERGE_RELATIVE: f64 = 1e-8;

/// Eigen-decomposition `H = U diag(eigenvalues) U^dagger`, eigenvalues descending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn min(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    pub fn reconstruct(&self) -> Hermitian {
        Hermitian::from_eigen(&self.eigenvalues, &self.eigenvectors)
    }

    /// `U diag(g(lambda_i)) U^dagger` with no domain handling.
    pub fn map(&self, g: impl Fn(f64) -> f64) -> Hermitian {
        let values: Vec<f64> = self.eigenvalues.iter().map(|&l| g(l)).collect();
        Hermitian::from_eigen(&values, &self.eigenvectors)
    }

    /// Copy of the spectrum with eigenvalues moved into the domain of `f`,
    /// together with the number of clamped eigenvalues.
    pub fn clamped_for(&self, f: &ScalarFunction) -> Result<(Spectrum, usize)> {
        let (eigenvalues, clamped) = clamp_eigenvalues(&self.eigenvalues, f)?;
        Ok((
            Spectrum {
                eigenvalues,
                eigenvectors: self.eigenvectors.clone(),
            },
            clamped,
        ))
    }

    /// `U^dagger X U`, i.e. `X` expressed in the eigenbasis.
    pub fn to_eigenbasis(&self, x: &Hermitian) -> CMatrix {
        self.eigenvectors.adjoint() * x.matrix() * &self.eigenvectors
    }

    pub fn from_eigenbasis(&self, w: CMatrix) -> Hermitian {
        Hermitian::symmetrized(&self.eigenvectors * w * self.eigenvectors.adjoint())
    }
}

/// Spectral decomposition with deterministic ordering: eigenvalues descending,
/// each eigenvector scaled so its first non-negligible component is real and
/// positive.
pub fn spectral_decompose(h: &Hermitian) -> Spectrum {
    let n = h.dim();
    let eig = h.matrix().clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));

    let mut vectors = CMatrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    for (col, &src) in order.iter().enumerate() {
        values.push(eig.eigenvalues[src]);
        let v = eig.eigenvectors.column(src);
        let pivot = v
            .iter()
            .find(|z| z.norm() > 1e-8)
            .copied()
            .unwrap_or(C64::new(1.0, 0.0));
        let phase = pivot.conj() / pivot.norm();
        for i in 0..n {
            vectors[(i, col)] = v[i] * phase;
        }
    }
    Spectrum {
        eigenvalues: values,
        eigenvectors: vectors,
    }
}

/// A scalar function with its derivative and open domain `(lo, hi)`.
#[derive(Clone, Copy)]
pub struct ScalarFunction {
    pub name: &'static str,
    pub value: fn(f64) -> f64,
    pub derivative: fn(f64) -> f64,
    pub domain: (f64, f64),
}

impl std::fmt::Debug for ScalarFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ScalarFunction({} on {:?})", self.name, self.domain)
    }
}

impl ScalarFunction {
    pub const fn new(
        name: &'static str,
        value: fn(f64) -> f64,
        derivative: fn(f64) -> f64,
        domain: (f64, f64),
    ) -> Self {
        Self {
            name,
            value,
            derivative,
            domain,
        }
    }

    pub fn log() -> Self {
        Self::new("log", f64::ln, |x| 1.0 / x, (0.0, f64::INFINITY))
    }

    pub fn exp() -> Self {
        Self::new(
            "exp",
            f64::exp,
            f64::exp,
            (f64::NEG_INFINITY, f64::INFINITY),
        )
    }

    /// `x log x`, the integrand of negative von Neumann entropy.
    pub fn xlogx() -> Self {
        Self::new(
            "xlogx",
            |x| if x == 0.0 { 0.0 } else { x * x.ln() },
            |x| x.ln() + 1.0,
            (0.0, f64::INFINITY),
        )
    }

    /// `-log x`, the integrand of the negative log-determinant.
    pub fn neg_log() -> Self {
        Self::new("neg_log", |x| -x.ln(), |x| -1.0 / x, (0.0, f64::INFINITY))
    }

    pub fn inverse() -> Self {
        Self::new(
            "inverse",
            |x| 1.0 / x,
            |x| -1.0 / (x * x),
            (0.0, f64::INFINITY),
        )
    }

    pub fn square() -> Self {
        Self::new(
            "square",
            |x| x * x,
            |x| 2.0 * x,
            (f64::NEG_INFINITY, f64::INFINITY),
        )
    }

    pub fn sqrt() -> Self {
        Self::new("sqrt", f64::sqrt, |x| 0.5 / x.sqrt(), (0.0, f64::INFINITY))
    }

    fn is_positive_half_line(&self) -> bool {
        self.domain.0 == 0.0
    }
}

/// Moves eigenvalues into the domain of `f`. For functions on `(0, inf)`
/// values below `CLAMP_RELATIVE * lambda_max` are lifted to that floor.
pub fn clamp_eigenvalues(eigs: &[f64], f: &ScalarFunction) -> Result<(Vec<f64>, usize)> {
    let (lo, hi) = f.domain;
    let mut out = eigs.to_vec();
    let mut clamped = 0;
    if f.is_positive_half_line() {
        let top = eigs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !(top > 0.0) {
            return Err(Error::DomainViolation { value: top, lo, hi });
        }
        let floor = CLAMP_RELATIVE * top;
        let slack = NEGATIVE_SLACK * top.max(1.0);
        for l in out.iter_mut() {
            if *l < floor {
                if *l < -slack {
                    return Err(Error::DomainViolation { value: *l, lo, hi });
                }
                *l = floor;
                clamped += 1;
            }
        }
    }
    for &l in &out {
        if !(l > lo && l < hi) {
            return Err(Error::DomainViolation { value: l, lo, hi });
        }
    }
    Ok((out, clamped))
}

/// `f(H) = U f(Lambda) U^dagger`.
pub fn apply_operator_function(h: &Hermitian, f: &ScalarFunction) -> Result<Hermitian> {
    let spec = spectral_decompose(h);
    apply_to_spectrum(&spec, f)
}

pub fn apply_to_spectrum(spec: &Spectrum, f: &ScalarFunction) -> Result<Hermitian> {
    let (clamped, _) = spec.clamped_for(f)?;
    Ok(clamped.map(f.value))
}

/// First divided-difference table `f^[1](lambda_i, lambda_j)`.
pub fn first_divided_differences(eigs: &[f64], f: &ScalarFunction) -> Result<DMatrix<f64>> {
    let (l, _) = clamp_eigenvalues(eigs, f)?;
    let n = l.len();
    let fv: Vec<f64> = l.iter().map(|&x| (f.value)(x)).collect();
    let mut table = DMatrix::zeros(n, n);
    for i in 0..n {
        table[(i, i)] = (f.derivative)(l[i]);
        for j in 0..i {
            let gap = l[i] - l[j];
            let scale = 1f64.max(l[i].abs()).max(l[j].abs());
            let v = if gap.abs() <= MERGE_RELATIVE * scale {
                (f.derivative)(0.5 * (l[i] + l[j]))
            } else {
                (fv[i] - fv[j]) / gap
            };
            table[(i, j)] = v;
            table[(j, i)] = v;
        }
    }
    Ok(table)
}

/// Directional derivative `D f(H)[V] = U [f^[1](Lambda) .* (U^dagger V U)] U^dagger`.
pub fn directional_derivative(
    h: &Hermitian,
    v: &Hermitian,
    f: &ScalarFunction,
) -> Result<Hermitian> {
    if h.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: v.dim(),
        });
    }
    let spec = spectral_decompose(h);
    directional_derivative_at(&spec, v, f)
}

/// Same as [`directional_derivative`] with a precomputed spectrum of `H`.
pub fn directional_derivative_at(
    spec: &Spectrum,
    v: &Hermitian,
    f: &ScalarFunction,
) -> Result<Hermitian> {
    let table = first_divided_differences(&spec.eigenvalues, f)?;
    let mut w = spec.to_eigenbasis(v);
    w.zip_apply(&table, |z, t| *z *= t);
    Ok(spec.from_eigenbasis(w))
}

/// Gradient of `X -> tr f(X)`, which is `f'(X)`.
pub fn trace_functional_gradient(h: &Hermitian, f: &ScalarFunction) -> Result<Hermitian> {
    let spec = spectral_decompose(h);
    let (clamped, _) = spec.clamped_for(f)?;
    Ok(clamped.map(f.derivative))
}

/// `tr f(H)`.
pub fn trace_function(h: &Hermitian, f: &ScalarFunction) -> Result<f64> {
    let spec = spectral_decompose(h);
    let (clamped, _) = spec.clamped_for(f)?;
    Ok(clamped.eigenvalues.iter().map(|&l| (f.value)(l)).sum())
}
