//! Partial trace and partial transpose on a bipartite space `A (x) B`.
//!
//! Basis index of `|a>|b>` is `a * dim_b + b`.

use serde::{Deserialize, Serialize};

use super::hermitian::{CMatrix, Hermitian, C64};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Subsystem {
    A,
    B,
}

impl Subsystem {
    pub fn other(self) -> Subsystem {
        match self {
            Subsystem::A => Subsystem::B,
            Subsystem::B => Subsystem::A,
        }
    }
}

fn check_factorization(m: &Hermitian, dim_a: usize, dim_b: usize) -> Result<()> {
    if dim_a == 0 || dim_b == 0 || m.dim() != dim_a * dim_b {
        return Err(Error::Factorization {
            dim: m.dim(),
            dim_a,
            dim_b,
        });
    }
    Ok(())
}

pub fn partial_trace(
    m: &Hermitian,
    dim_a: usize,
    dim_b: usize,
    over: Subsystem,
) -> Result<Hermitian> {
    check_factorization(m, dim_a, dim_b)?;
    let x = m.matrix();
    let out = match over {
        Subsystem::B => CMatrix::from_fn(dim_a, dim_a, |a, ap| {
            (0..dim_b).fold(C64::new(0.0, 0.0), |acc, b| {
                acc + x[(a * dim_b + b, ap * dim_b + b)]
            })
        }),
        Subsystem::A => CMatrix::from_fn(dim_b, dim_b, |b, bp| {
            (0..dim_a).fold(C64::new(0.0, 0.0), |acc, a| {
                acc + x[(a * dim_b + b, a * dim_b + bp)]
            })
        }),
    };
    Ok(Hermitian::symmetrized(out))
}

/// Adjoint of [`partial_trace`]: `X -> X (x) I_B` when tracing over `B`,
/// `X -> I_A (x) X` when tracing over `A`.
pub fn partial_trace_adjoint(
    x: &Hermitian,
    dim_a: usize,
    dim_b: usize,
    over: Subsystem,
) -> Result<Hermitian> {
    match over {
        Subsystem::B => {
            if x.dim() != dim_a {
                return Err(Error::DimensionMismatch {
                    expected: dim_a,
                    found: x.dim(),
                });
            }
            Ok(x.kron(&Hermitian::identity(dim_b)))
        }
        Subsystem::A => {
            if x.dim() != dim_b {
                return Err(Error::DimensionMismatch {
                    expected: dim_b,
                    found: x.dim(),
                });
            }
            Ok(Hermitian::identity(dim_a).kron(x))
        }
    }
}

pub fn partial_transpose(
    m: &Hermitian,
    dim_a: usize,
    dim_b: usize,
    over: Subsystem,
) -> Result<Hermitian> {
    check_factorization(m, dim_a, dim_b)?;
    let n = m.dim();
    let x = m.matrix();
    let out = CMatrix::from_fn(n, n, |r, c| {
        let (a, b) = (r / dim_b, r % dim_b);
        let (ap, bp) = (c / dim_b, c % dim_b);
        match over {
            Subsystem::B => x[(a * dim_b + bp, ap * dim_b + b)],
            Subsystem::A => x[(ap * dim_b + b, a * dim_b + bp)],
        }
    });
    Ok(Hermitian::symmetrized(out))
}
