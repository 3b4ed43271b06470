//! Seeded samplers for states, channels and isometries.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matfun::{CMatrix, Hermitian, C64};

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Complex Ginibre matrix with standard normal real and imaginary parts.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian_complex(rng))
}

/// Hermitian matrix `(G + G^dagger) / 2` from a Ginibre draw.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Hermitian {
    Hermitian::symmetrized(ginibre(rng, n, n))
}

/// Full-rank density matrix `G G^dagger / tr(G G^dagger)`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Hermitian {
    let g = ginibre(rng, n, n);
    let w = Hermitian::symmetrized(&g * g.adjoint());
    let tr = w.trace();
    w.scale(1.0 / tr)
}

/// Haar-like unitary from the QR factor of a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    random_isometry(rng, n, n)
}

/// `rows x cols` isometry (`V^dagger V = I`) by orthonormalizing a Gaussian matrix.
pub fn random_isometry<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    assert!(rows >= cols, "isometry needs rows >= cols");
    let g = ginibre(rng, rows, cols);
    orthonormalize_columns(g)
}

/// Modified Gram-Schmidt with one reorthogonalization pass.
pub fn orthonormalize_columns(mut m: CMatrix) -> CMatrix {
    let cols = m.ncols();
    for j in 0..cols {
        for _ in 0..2 {
            for k in 0..j {
                let proj = m.column(k).dotc(&m.column(j));
                let qk = m.column(k).clone_owned();
                let mut cj = m.column_mut(j);
                cj -= qk * proj;
            }
        }
        let norm = m.column(j).norm();
        m.column_mut(j).unscale_mut(norm);
    }
    m
}

/// Column-stochastic `n x m` matrix with uniform entries normalized per column.
pub fn random_channel<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> DMatrix<f64> {
    let mut q = DMatrix::from_fn(n, m, |_, _| rng.random::<f64>() + f64::MIN_POSITIVE);
    for mut col in q.column_iter_mut() {
        let s = col.sum();
        col /= s;
    }
    q
}

/// Strictly positive probability vector with uniform entries normalized.
pub fn random_simplex<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DVector<f64> {
    let mut p = DVector::from_fn(n, |_, _| rng.random::<f64>() + 1e-3);
    let s = p.sum();
    p /= s;
    p
}

/// Uniform entries in `[0, 1)`.
pub fn uniform_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.random::<f64>())
}

pub fn uniform_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.random::<f64>())
}
