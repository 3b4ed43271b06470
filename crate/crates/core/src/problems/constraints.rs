//! Linear constraints `b - A(x) in K`, blockwise with cone tags.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matfun::{
    partial_trace, partial_trace_adjoint, partial_transpose, spectral_decompose, Hermitian,
    Subsystem,
};
use crate::point::{Dual, Point};
use crate::random::{random_hermitian, seeded_rng};

/// Cone `K` of a constraint block; all three are self-dual or trivially dual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cone {
    /// `A(x) <= b` componentwise.
    Nonneg,
    /// `b - A(x)` positive semidefinite.
    Psd,
    /// `A(x) = b`.
    Zero,
}

impl Cone {
    /// Euclidean projection onto the dual cone.
    pub fn project(self, z: &Point) -> Result<Point> {
        match (self, z) {
            (Cone::Zero, _) => Ok(z.clone()),
            (Cone::Nonneg, Point::Vector(v)) => Ok(Point::Vector(v.map(|a| a.max(0.0)))),
            (Cone::Psd, Point::Matrix(m)) => {
                Ok(Point::Matrix(spectral_decompose(m).map(|l| l.max(0.0))))
            }
            _ => Err(Error::Unsupported(format!(
                "cone {self:?} does not match the block shape"
            ))),
        }
    }

    /// Distance from `b - A(x)` to the cone, given the residual `A(x) - b`.
    pub fn violation(self, residual: &Point) -> Result<f64> {
        match self {
            Cone::Zero => Ok(residual.norm_sq().sqrt()),
            _ => Ok(self.project(residual)?.norm_sq().sqrt()),
        }
    }
}

#[derive(Debug, Clone)]
pub enum LinearOp {
    /// `x -> M x` on real vectors.
    Matrix(DMatrix<f64>),
    /// `rho -> (tr(A_i rho))_i`.
    Observables(Vec<Hermitian>),
    /// `rho -> tr_over(rho)` on a `dim_a x dim_b` bipartition.
    PartialTrace {
        dim_a: usize,
        dim_b: usize,
        over: Subsystem,
    },
    /// `rho -> -rho^{T_over}`.
    NegPartialTranspose {
        dim_a: usize,
        dim_b: usize,
        over: Subsystem,
    },
}

impl LinearOp {
    pub fn apply(&self, x: &Point) -> Result<Point> {
        match (self, x) {
            (LinearOp::Matrix(m), Point::Vector(v)) => {
                if m.ncols() != v.len() {
                    return Err(Error::DimensionMismatch {
                        expected: m.ncols(),
                        found: v.len(),
                    });
                }
                Ok(Point::Vector(m * v))
            }
            (LinearOp::Observables(obs), Point::Matrix(rho)) => Ok(Point::Vector(
                DVector::from_iterator(obs.len(), obs.iter().map(|a| a.inner(rho))),
            )),
            (LinearOp::PartialTrace { dim_a, dim_b, over }, Point::Matrix(rho)) => {
                Ok(Point::Matrix(partial_trace(rho, *dim_a, *dim_b, *over)?))
            }
            (LinearOp::NegPartialTranspose { dim_a, dim_b, over }, Point::Matrix(rho)) => Ok(
                Point::Matrix(partial_transpose(rho, *dim_a, *dim_b, *over)?.scale(-1.0)),
            ),
            _ => Err(Error::Unsupported(
                "linear operator does not accept this point kind".into(),
            )),
        }
    }

    pub fn adjoint(&self, z: &Point) -> Result<Point> {
        match (self, z) {
            (LinearOp::Matrix(m), Point::Vector(v)) => {
                if m.nrows() != v.len() {
                    return Err(Error::DimensionMismatch {
                        expected: m.nrows(),
                        found: v.len(),
                    });
                }
                Ok(Point::Vector(m.tr_mul(v)))
            }
            (LinearOp::Observables(obs), Point::Vector(v)) => {
                let dim = obs.first().map_or(0, Hermitian::dim);
                let acc = obs
                    .iter()
                    .zip(v.iter())
                    .fold(Hermitian::zeros(dim), |acc, (a, &w)| acc.axpy(w, a));
                Ok(Point::Matrix(acc))
            }
            (LinearOp::PartialTrace { dim_a, dim_b, over }, Point::Matrix(y)) => Ok(Point::Matrix(
                partial_trace_adjoint(y, *dim_a, *dim_b, *over)?,
            )),
            (LinearOp::NegPartialTranspose { dim_a, dim_b, over }, Point::Matrix(y)) => Ok(
                Point::Matrix(partial_transpose(y, *dim_a, *dim_b, *over)?.scale(-1.0)),
            ),
            _ => Err(Error::Unsupported(
                "adjoint does not accept this dual kind".into(),
            )),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConstraintBlock {
    pub op: LinearOp,
    pub rhs: Point,
    pub cone: Cone,
}

impl ConstraintBlock {
    /// Checks that the cone matches the shape of the right-hand side.
    pub fn new(op: LinearOp, rhs: Point, cone: Cone) -> Result<Self> {
        let ok = match (&op, &rhs, cone) {
            (LinearOp::Matrix(m), Point::Vector(b), Cone::Nonneg | Cone::Zero) => {
                m.nrows() == b.len()
            }
            (LinearOp::Observables(obs), Point::Vector(b), Cone::Nonneg | Cone::Zero) => {
                obs.len() == b.len()
            }
            (
                LinearOp::PartialTrace { dim_a, dim_b, over },
                Point::Matrix(b),
                Cone::Psd | Cone::Zero,
            ) => {
                b.dim()
                    == if *over == Subsystem::A {
                        *dim_b
                    } else {
                        *dim_a
                    }
            }
            (
                LinearOp::NegPartialTranspose { dim_a, dim_b, .. },
                Point::Matrix(b),
                Cone::Psd | Cone::Zero,
            ) => b.dim() == dim_a * dim_b,
            _ => false,
        };
        if !ok {
            return Err(Error::InvalidConfig(format!(
                "cone {cone:?} is incompatible with the operator or right-hand side shape"
            )));
        }
        Ok(Self { op, rhs, cone })
    }
}

#[derive(Debug, Clone, Default)]
pub struct LinearConstraintSet {
    pub blocks: Vec<ConstraintBlock>,
}

impl LinearConstraintSet {
    pub fn new(blocks: Vec<ConstraintBlock>) -> Self {
        Self { blocks }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `A(x)`.
    pub fn apply(&self, x: &Point) -> Result<Dual> {
        self.blocks
            .iter()
            .map(|b| b.op.apply(x))
            .collect::<Result<Vec<_>>>()
            .map(Dual)
    }

    /// `A(x) - b`.
    pub fn residual(&self, x: &Point) -> Result<Dual> {
        self.blocks
            .iter()
            .map(|b| Ok(b.op.apply(x)?.sub(&b.rhs)))
            .collect::<Result<Vec<_>>>()
            .map(Dual)
    }

    /// `A^dagger(z)`, shaped like `primal`.
    pub fn adjoint(&self, z: &Dual, primal: &Point) -> Result<Point> {
        self.check_dual(z)?;
        self.blocks
            .iter()
            .zip(z.blocks())
            .try_fold(primal.zeros_like(), |acc, (b, zb)| {
                Ok(acc.axpy(1.0, &b.op.adjoint(zb)?))
            })
    }

    /// Blockwise projection onto the dual cones.
    pub fn project(&self, z: &Dual) -> Result<Dual> {
        self.check_dual(z)?;
        self.blocks
            .iter()
            .zip(z.blocks())
            .map(|(b, zb)| b.cone.project(zb))
            .collect::<Result<Vec<_>>>()
            .map(Dual)
    }

    /// Euclidean norm of the per-block constraint violations.
    pub fn violation(&self, x: &Point) -> Result<f64> {
        Ok(self
            .violations(x)?
            .iter()
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt())
    }

    pub fn violations(&self, x: &Point) -> Result<Vec<f64>> {
        self.residual_violations(&self.residual(x)?)
    }

    /// Per-block violations from a precomputed residual `A(x) - b`.
    pub fn residual_violations(&self, residual: &Dual) -> Result<Vec<f64>> {
        self.check_dual(residual)?;
        self.blocks
            .iter()
            .zip(residual.blocks())
            .map(|(b, rb)| b.cone.violation(rb))
            .collect()
    }

    /// The right-hand side `b` as a dual-shaped value.
    pub fn rhs(&self) -> Dual {
        Dual(self.blocks.iter().map(|b| b.rhs.clone()).collect())
    }

    pub fn zero_dual(&self) -> Dual {
        Dual(self.blocks.iter().map(|b| b.rhs.zeros_like()).collect())
    }

    fn check_dual(&self, z: &Dual) -> Result<()> {
        if z.blocks().len() != self.blocks.len() {
            return Err(Error::DimensionMismatch {
                expected: self.blocks.len(),
                found: z.blocks().len(),
            });
        }
        for (b, zb) in self.blocks.iter().zip(z.blocks()) {
            if !b.rhs.same_shape(zb) {
                return Err(Error::InvalidPoint(
                    "dual block shape does not match its constraint".into(),
                ));
            }
        }
        Ok(())
    }

    /// Power-iteration estimate of `||A||` from a seeded random start.
    pub fn operator_norm(&self, primal: &Point, iters: usize, seed: u64) -> Result<f64> {
        if self.is_empty() {
            return Ok(0.0);
        }
        let mut rng = seeded_rng(seed);
        let mut x = match primal {
            Point::Vector(v) => {
                Point::Vector(DVector::from_fn(v.len(), |_, _| rng.random::<f64>() - 0.5))
            }
            Point::Matrix(m) => Point::Matrix(random_hermitian(&mut rng, m.dim())),
        };
        let mut estimate = 0.0;
        for _ in 0..iters {
            let n = x.norm_sq().sqrt();
            if n == 0.0 {
                return Ok(0.0);
            }
            x = x.scale(1.0 / n);
            let y = self.adjoint(&self.apply(&x)?, primal)?;
            estimate = x.inner(&y).max(0.0).sqrt();
            x = y;
        }
        Ok(estimate)
    }
}
