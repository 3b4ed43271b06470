//! Primal and dual iterates: real vectors or Hermitian matrices.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::matfun::Hermitian;

/// Tolerance on the sum or trace of a normalized point.
pub const NORMALIZATION_TOL: f64 = 1e-10;
/// Violations of normalization beyond this are rejected instead of repaired.
pub const RENORMALIZE_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum Point {
    Vector(DVector<f64>),
    Matrix(Hermitian),
}

impl Point {
    /// Probability vector; renormalized when within `RENORMALIZE_LIMIT` of unit sum.
    pub fn simplex(v: DVector<f64>) -> Result<Point> {
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("probability vector"));
        }
        if let Some(&x) = v.iter().find(|&&x| x < 0.0) {
            return Err(Error::InvalidPoint(format!("negative probability {x:e}")));
        }
        let s = v.sum();
        if (s - 1.0).abs() > RENORMALIZE_LIMIT {
            return Err(Error::InvalidPoint(format!("probabilities sum to {s}")));
        }
        Ok(Point::Vector(v / s))
    }

    /// Density matrix; renormalized when within `RENORMALIZE_LIMIT` of unit trace.
    pub fn density(rho: Hermitian) -> Result<Point> {
        let tr = rho.trace();
        if (tr - 1.0).abs() > RENORMALIZE_LIMIT {
            return Err(Error::InvalidPoint(format!("trace is {tr}")));
        }
        let min = crate::matfun::spectral_decompose(&rho).min();
        if min < -NORMALIZATION_TOL {
            return Err(Error::InvalidPoint(format!("negative eigenvalue {min:e}")));
        }
        Ok(Point::Matrix(rho.scale(1.0 / tr)))
    }

    pub fn as_vector(&self) -> Result<&DVector<f64>> {
        match self {
            Point::Vector(v) => Ok(v),
            Point::Matrix(_) => Err(Error::Unsupported("expected a vector point".into())),
        }
    }

    pub fn as_matrix(&self) -> Result<&Hermitian> {
        match self {
            Point::Matrix(m) => Ok(m),
            Point::Vector(_) => Err(Error::Unsupported("expected a matrix point".into())),
        }
    }

    pub fn zeros_like(&self) -> Point {
        match self {
            Point::Vector(v) => Point::Vector(DVector::zeros(v.len())),
            Point::Matrix(m) => Point::Matrix(Hermitian::zeros(m.dim())),
        }
    }

    /// Real inner product (Euclidean or Hilbert-Schmidt).
    pub fn inner(&self, other: &Point) -> f64 {
        match (self, other) {
            (Point::Vector(a), Point::Vector(b)) => a.dot(b),
            (Point::Matrix(a), Point::Matrix(b)) => a.inner(b),
            _ => panic!("inner product between a vector and a matrix point"),
        }
    }

    /// `self + a * other`.
    pub fn axpy(&self, a: f64, other: &Point) -> Point {
        match (self, other) {
            (Point::Vector(x), Point::Vector(y)) => Point::Vector(x + y * a),
            (Point::Matrix(x), Point::Matrix(y)) => Point::Matrix(x.axpy(a, y)),
            _ => panic!("axpy between a vector and a matrix point"),
        }
    }

    pub fn sub(&self, other: &Point) -> Point {
        self.axpy(-1.0, other)
    }

    pub fn scale(&self, a: f64) -> Point {
        match self {
            Point::Vector(x) => Point::Vector(x * a),
            Point::Matrix(x) => Point::Matrix(x.scale(a)),
        }
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner(self)
    }

    /// Largest absolute entry.
    pub fn norm_inf(&self) -> f64 {
        match self {
            Point::Vector(x) => x.amax(),
            Point::Matrix(x) => x.max_abs(),
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Point::Vector(x) => x.iter().all(|v| v.is_finite()),
            Point::Matrix(x) => x.is_finite(),
        }
    }

    /// Sum of entries or trace.
    pub fn total(&self) -> f64 {
        match self {
            Point::Vector(x) => x.sum(),
            Point::Matrix(x) => x.trace(),
        }
    }

    /// Same shape, same kind.
    pub fn same_shape(&self, other: &Point) -> bool {
        match (self, other) {
            (Point::Vector(a), Point::Vector(b)) => a.len() == b.len(),
            (Point::Matrix(a), Point::Matrix(b)) => a.dim() == b.dim(),
            _ => false,
        }
    }
}

/// A column-major `rows x cols` matrix stored as a flat vector point.
pub fn flatten(m: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_column_slice(m.as_slice())
}

pub fn unflatten(v: &DVector<f64>, rows: usize) -> DMatrix<f64> {
    DMatrix::from_column_slice(rows, v.len() / rows, v.as_slice())
}

/// Dual iterate: one point per constraint block.
#[derive(Debug, Clone, PartialEq)]
pub struct Dual(pub Vec<Point>);

impl Dual {
    pub fn blocks(&self) -> &[Point] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn zeros_like(&self) -> Dual {
        Dual(self.0.iter().map(Point::zeros_like).collect())
    }

    pub fn inner(&self, other: &Dual) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a.inner(b)).sum()
    }

    pub fn axpy(&self, a: f64, other: &Dual) -> Dual {
        Dual(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(x, y)| x.axpy(a, y))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Dual) -> Dual {
        self.axpy(-1.0, other)
    }

    pub fn scale(&self, a: f64) -> Dual {
        Dual(self.0.iter().map(|x| x.scale(a)).collect())
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn norm_inf(&self) -> f64 {
        self.0.iter().map(Point::norm_inf).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(Point::is_finite)
    }
}
