//! Classical channels, classical-quantum ensembles and Stinespring channels.

use nalgebra::{DMatrix, DVector};

use crate::entropy::von_neumann_entropy;
use crate::error::{Error, Result};
use crate::matfun::{
    partial_trace, partial_trace_adjoint, spectral_decompose, CMatrix, Hermitian, Subsystem, C64,
};

/// Column-sum tolerance for stochastic matrices.
pub const STOCHASTIC_TOL: f64 = 1e-10;
/// Residual tolerance for `U^dagger U = I`.
pub const ISOMETRY_TOL: f64 = 1e-10;

/// Column-stochastic `n x m` matrix: column `j` is the output law for input `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalChannel {
    q: DMatrix<f64>,
}

impl ClassicalChannel {
    pub fn new(q: DMatrix<f64>) -> Result<Self> {
        if q.nrows() == 0 || q.ncols() == 0 {
            return Err(Error::InvalidPoint("empty channel matrix".into()));
        }
        if let Some(&v) = q.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidPoint(format!(
                "channel entry {v} is not a probability"
            )));
        }
        for (j, col) in q.column_iter().enumerate() {
            let s = col.sum();
            if (s - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::InvalidPoint(format!(
                    "channel column {j} sums to {s}"
                )));
            }
        }
        Ok(Self { q })
    }

    /// Binary symmetric channel with crossover probability `flip`.
    pub fn binary_symmetric(flip: f64) -> Result<Self> {
        Self::new(DMatrix::from_row_slice(
            2,
            2,
            &[1.0 - flip, flip, flip, 1.0 - flip],
        ))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn outputs(&self) -> usize {
        self.q.nrows()
    }

    pub fn inputs(&self) -> usize {
        self.q.ncols()
    }

    /// Output distribution `Q p`.
    pub fn apply(&self, p: &DVector<f64>) -> DVector<f64> {
        &self.q * p
    }
}

/// Channel outputs `N(rho_j)` of a classical-quantum encoding, with their
/// entropies cached.
#[derive(Debug, Clone)]
pub struct CqEnsemble {
    states: Vec<Hermitian>,
    entropies: Vec<f64>,
}

impl CqEnsemble {
    pub fn new(states: Vec<Hermitian>) -> Result<Self> {
        let dim = states
            .first()
            .ok_or_else(|| Error::InvalidPoint("empty ensemble".into()))?
            .dim();
        for s in &states {
            if s.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: s.dim(),
                });
            }
            check_density(s)?;
        }
        let entropies = states.iter().map(von_neumann_entropy).collect();
        Ok(Self { states, entropies })
    }

    pub fn states(&self) -> &[Hermitian] {
        &self.states
    }

    pub fn entropies(&self) -> &[f64] {
        &self.entropies
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    /// Ensemble average `sum p_j rho_j`.
    pub fn average(&self, p: &DVector<f64>) -> Hermitian {
        self.states
            .iter()
            .zip(p.iter())
            .fold(Hermitian::zeros(self.dim()), |acc, (s, &w)| acc.axpy(w, s))
    }
}

pub(crate) fn check_density(s: &Hermitian) -> Result<()> {
    let tr = s.trace();
    if (tr - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidPoint(format!("state has trace {tr}")));
    }
    let min = spectral_decompose(s).min();
    if min < -1e-10 {
        return Err(Error::InvalidPoint(format!("state has eigenvalue {min:e}")));
    }
    Ok(())
}

/// Quantum channel `rho -> tr_E(U rho U^dagger)` given by an isometry
/// `U: A -> B (x) E`; output index is `b * dim_e + e`.
#[derive(Debug, Clone)]
pub struct StinespringChannel {
    u: CMatrix,
    dim_a: usize,
    dim_b: usize,
    dim_e: usize,
}

impl StinespringChannel {
    pub fn new(u: CMatrix, dim_b: usize, dim_e: usize) -> Result<Self> {
        let dim_a = u.ncols();
        if dim_a == 0 || dim_b == 0 || dim_e == 0 || u.nrows() != dim_b * dim_e {
            return Err(Error::Factorization {
                dim: u.nrows(),
                dim_a: dim_b,
                dim_b: dim_e,
            });
        }
        let residual = (u.adjoint() * &u - CMatrix::identity(dim_a, dim_a)).norm();
        if residual > ISOMETRY_TOL * dim_a as f64 {
            return Err(Error::InvalidPoint(format!(
                "isometry residual {residual:e}"
            )));
        }
        Ok(Self {
            u,
            dim_a,
            dim_b,
            dim_e,
        })
    }

    /// Builds the isometry `|a> -> sum_k K_k|a> (x) |k>` from Kraus operators.
    pub fn from_kraus(kraus: &[CMatrix]) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidPoint("no Kraus operators".into()))?;
        let (dim_b, dim_a) = first.shape();
        let dim_e = kraus.len();
        let mut u = CMatrix::zeros(dim_b * dim_e, dim_a);
        for (k, op) in kraus.iter().enumerate() {
            if op.shape() != (dim_b, dim_a) {
                return Err(Error::DimensionMismatch {
                    expected: dim_b,
                    found: op.nrows(),
                });
            }
            for b in 0..dim_b {
                for a in 0..dim_a {
                    u[(b * dim_e + k, a)] = op[(b, a)];
                }
            }
        }
        Self::new(u, dim_b, dim_e)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            u: CMatrix::identity(dim, dim),
            dim_a: dim,
            dim_b: dim,
            dim_e: 1,
        }
    }

    /// Qubit depolarizing channel `rho -> (1 - p) rho + p I / 2`.
    pub fn depolarizing(p: f64) -> Result<Self> {
        let c = |re: f64, im: f64| C64::new(re, im);
        let id = CMatrix::identity(2, 2);
        let x = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        let y = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]);
        let z = CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]);
        let w0 = (1.0 - 0.75 * p).sqrt();
        let w = (0.25 * p).sqrt();
        Self::from_kraus(&[id * c(w0, 0.), x * c(w, 0.), y * c(w, 0.), z * c(w, 0.)])
    }

    pub fn isometry(&self) -> &CMatrix {
        &self.u
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.dim_a, self.dim_b, self.dim_e)
    }

    /// Stinespring isometry of the complementary channel (roles of `B` and `E` swapped).
    pub fn complementary(&self) -> Self {
        let mut u = CMatrix::zeros(self.u.nrows(), self.dim_a);
        for b in 0..self.dim_b {
            for e in 0..self.dim_e {
                u.row_mut(e * self.dim_b + b)
                    .copy_from(&self.u.row(b * self.dim_e + e));
            }
        }
        Self {
            u,
            dim_a: self.dim_a,
            dim_b: self.dim_e,
            dim_e: self.dim_b,
        }
    }

    fn check_input(&self, rho: &Hermitian) -> Result<()> {
        if rho.dim() != self.dim_a {
            return Err(Error::DimensionMismatch {
                expected: self.dim_a,
                found: rho.dim(),
            });
        }
        Ok(())
    }

    fn dilate(&self, rho: &Hermitian) -> Result<Hermitian> {
        self.check_input(rho)?;
        Ok(rho.conjugate_by(&self.u))
    }

    /// `N(rho) = tr_E(U rho U^dagger)`.
    pub fn apply(&self, rho: &Hermitian) -> Result<Hermitian> {
        partial_trace(&self.dilate(rho)?, self.dim_b, self.dim_e, Subsystem::B)
    }

    /// `N_c(rho) = tr_B(U rho U^dagger)`.
    pub fn complementary_apply(&self, rho: &Hermitian) -> Result<Hermitian> {
        partial_trace(&self.dilate(rho)?, self.dim_b, self.dim_e, Subsystem::A)
    }

    /// `N^dagger(Y) = U^dagger (Y (x) I_E) U`.
    pub fn adjoint_apply(&self, y: &Hermitian) -> Result<Hermitian> {
        let lifted = partial_trace_adjoint(y, self.dim_b, self.dim_e, Subsystem::B)?;
        Ok(lifted.adjoint_conjugate_by(&self.u))
    }

    /// `N_c^dagger(Z) = U^dagger (I_B (x) Z) U`.
    pub fn complementary_adjoint_apply(&self, z: &Hermitian) -> Result<Hermitian> {
        let lifted = partial_trace_adjoint(z, self.dim_b, self.dim_e, Subsystem::A)?;
        Ok(lifted.adjoint_conjugate_by(&self.u))
    }
}

pub fn channel_apply(ch: &StinespringChannel, rho: &Hermitian) -> Result<Hermitian> {
    ch.apply(rho)
}

pub fn complementary_apply(ch: &StinespringChannel, rho: &Hermitian) -> Result<Hermitian> {
    ch.complementary_apply(rho)
}
