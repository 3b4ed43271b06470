use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// Relative tolerance on `|H - H^dagger|` accepted by [`Hermitian::new`].
pub const HERMITIAN_TOL: f64 = 1e-12;

/// A dense complex Hermitian matrix.
///
/// The stored matrix is always exactly Hermitian: construction symmetrizes
/// the input after checking that the symmetry residual is within
/// `HERMITIAN_TOL * max|entry|`.
#[derive(Clone, PartialEq)]
pub struct Hermitian {
    m: CMatrix,
}

impl fmt::Debug for Hermitian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hermitian({}x{}) {}", self.dim(), self.dim(), self.m)
    }
}

impl Hermitian {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(Error::InvalidPoint("empty matrix".into()));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("Hermitian matrix entries"));
        }
        let scale = m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
        let tolerance = HERMITIAN_TOL * scale;
        let residual = symmetry_residual(&m);
        if residual > tolerance {
            return Err(Error::NotHermitian {
                residual,
                tolerance,
            });
        }
        Ok(Self::symmetrized(m))
    }

    /// Hermitian part `(M + M^dagger) / 2` without any tolerance check.
    pub fn symmetrized(m: CMatrix) -> Self {
        let adj = m.adjoint();
        Self {
            m: (m + adj).scale(0.5),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            m: CMatrix::zeros(n, n),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            m: CMatrix::identity(n, n),
        }
    }

    /// The maximally mixed state `I / n`.
    pub fn maximally_mixed(n: usize) -> Self {
        Self::identity(n).scale(1.0 / n as f64)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        Self { m }
    }

    /// Builds a Hermitian matrix from real row-major entries.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = C64::new(v, 0.0);
            }
        }
        Self::new(m)
    }

    /// Rank-one projector-like matrix `|psi><psi|` (not normalized).
    pub fn outer(psi: &[C64]) -> Self {
        let n = psi.len();
        let m = CMatrix::from_fn(n, n, |i, j| psi[i] * psi[j].conj());
        Self::symmetrized(m)
    }

    /// `U diag(values) U^dagger`.
    pub fn from_eigen(values: &[f64], vectors: &CMatrix) -> Self {
        let n = vectors.nrows();
        let mut scaled = vectors.clone();
        for (j, &v) in values.iter().enumerate() {
            for i in 0..n {
                scaled[(i, j)] *= v;
            }
        }
        Self::symmetrized(scaled * vectors.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.m[(i, i)].re).sum()
    }

    /// Real Hilbert-Schmidt inner product `Re tr(A^dagger B)`.
    pub fn inner(&self, other: &Hermitian) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.m
            .iter()
            .zip(other.m.iter())
            .map(|(a, b)| a.re * b.re + a.im * b.im)
            .sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner(self).sqrt()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
    }

    pub fn scale(&self, a: f64) -> Self {
        Self { m: self.m.scale(a) }
    }

    /// `self + a * other`.
    pub fn axpy(&self, a: f64, other: &Hermitian) -> Self {
        Self {
            m: &self.m + other.m.scale(a),
        }
    }

    pub fn kron(&self, other: &Hermitian) -> Self {
        Self {
            m: self.m.kronecker(&other.m),
        }
    }

    /// `V H V^dagger` for an arbitrary (possibly rectangular) `V`.
    pub fn conjugate_by(&self, v: &CMatrix) -> Self {
        Self::symmetrized(v * &self.m * v.adjoint())
    }

    /// `V^dagger H V` for an arbitrary (possibly rectangular) `V`.
    pub fn adjoint_conjugate_by(&self, v: &CMatrix) -> Self {
        Self::symmetrized(v.adjoint() * &self.m * v)
    }

    /// Matrix product `self * other` (not Hermitian in general).
    pub fn product(&self, other: &Hermitian) -> CMatrix {
        &self.m * &other.m
    }

    /// Real part of `tr(self * other * ...)` helpers are built on top of this.
    pub fn real_diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.m[(i, i)].re).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

fn symmetry_residual(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

impl Add for &Hermitian {
    type Output = Hermitian;
    fn add(self, rhs: &Hermitian) -> Hermitian {
        Hermitian {
            m: &self.m + &rhs.m,
        }
    }
}

impl Add for Hermitian {
    type Output = Hermitian;
    fn add(self, rhs: Hermitian) -> Hermitian {
        Hermitian { m: self.m + rhs.m }
    }
}

impl Sub for &Hermitian {
    type Output = Hermitian;
    fn sub(self, rhs: &Hermitian) -> Hermitian {
        Hermitian {
            m: &self.m - &rhs.m,
        }
    }
}

impl Sub for Hermitian {
    type Output = Hermitian;
    fn sub(self, rhs: Hermitian) -> Hermitian {
        Hermitian { m: self.m - rhs.m }
    }
}

impl Mul<f64> for &Hermitian {
    type Output = Hermitian;
    fn mul(self, rhs: f64) -> Hermitian {
        self.scale(rhs)
    }
}

impl Mul<f64> for Hermitian {
    type Output = Hermitian;
    fn mul(self, rhs: f64) -> Hermitian {
        self.scale(rhs)
    }
}

impl Neg for Hermitian {
    type Output = Hermitian;
    fn neg(self) -> Hermitian {
        self.scale(-1.0)
    }
}
