//! Classical and quantum entropies and relative entropies, in nats.

use crate::error::Result;
use crate::matfun::{spectral_decompose, Hermitian, Spectrum, CLAMP_RELATIVE};

/// Mass on the null space of the second argument above which the relative
/// entropy is declared infinite.
pub const SUPPORT_TOL: f64 = 1e-10;

fn xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Shannon entropy `-sum p log p` with `0 log 0 = 0`.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    -p.iter().map(|&x| xlogx(x)).sum::<f64>()
}

/// Binary entropy `h(x)`.
pub fn binary_entropy(x: f64) -> f64 {
    shannon_entropy(&[x, 1.0 - x])
}

/// Generalized KL divergence `sum p log(p/q) - sum(p - q)`; `+inf` when
/// `p_i > 0` where `q_i = 0`.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> f64 {
    debug_assert_eq!(p.len(), q.len());
    let mut acc = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        if a > 0.0 {
            if b <= 0.0 {
                return f64::INFINITY;
            }
            acc += a * (a / b).ln();
        }
        acc -= a - b;
    }
    acc
}

/// Relative entropy `sum p log(p/q)` between probability vectors.
pub fn relative_entropy(p: &[f64], q: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        if a > 0.0 {
            if b <= 0.0 {
                return f64::INFINITY;
            }
            acc += a * (a / b).ln();
        }
    }
    acc
}

/// Von Neumann entropy `-tr rho log rho` from the spectrum, `0 log 0 = 0`.
pub fn von_neumann_entropy(rho: &Hermitian) -> f64 {
    let spec = spectral_decompose(rho);
    shannon_entropy(&spec.eigenvalues)
}

/// `tr(rho log sigma)` given the spectrum of `sigma`; `-inf` when `rho` has
/// mass on the null space of `sigma`.
pub fn cross_log_trace(rho: &Hermitian, sigma: &Spectrum) -> f64 {
    let top = sigma.max().max(0.0);
    let floor = CLAMP_RELATIVE * top;
    let w = sigma.to_eigenbasis(rho);
    let scale = rho.trace().abs().max(f64::MIN_POSITIVE);
    let mut acc = 0.0;
    for (i, &l) in sigma.eigenvalues.iter().enumerate() {
        let mass = w[(i, i)].re;
        if l <= floor {
            if mass > SUPPORT_TOL * scale {
                return f64::NEG_INFINITY;
            }
            if mass > 0.0 && floor > 0.0 {
                acc += mass * floor.ln();
            }
        } else {
            acc += mass * l.ln();
        }
    }
    acc
}

/// Quantum relative entropy `tr rho (log rho - log sigma)`; `+inf` on
/// support mismatch.
pub fn quantum_relative_entropy(rho: &Hermitian, sigma: &Hermitian) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(crate::Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    let neg_entropy = -von_neumann_entropy(rho);
    let cross = cross_log_trace(rho, &spectral_decompose(sigma));
    Ok(neg_entropy - cross)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matfun::C64;
    use std::f64::consts::LN_2;

    #[test]
    fn shannon_uniform() {
        assert!((shannon_entropy(&[0.25; 4]) - 4f64.ln()).abs() < 1e-15);
        assert_eq!(shannon_entropy(&[1.0, 0.0]), 0.0);
    }

    #[test]
    fn kl_examples() {
        assert!((kl_divergence(&[1.0, 0.0], &[0.5, 0.5]) - LN_2).abs() < 1e-15);
        assert_eq!(kl_divergence(&[0.5, 0.5], &[1.0, 0.0]), f64::INFINITY);
        assert_eq!(kl_divergence(&[0.3, 0.7], &[0.3, 0.7]), 0.0);
    }

    #[test]
    fn qre_pure_vs_maximally_mixed() {
        let pure = Hermitian::outer(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        let d = quantum_relative_entropy(&pure, &Hermitian::maximally_mixed(2)).unwrap();
        assert!((d - LN_2).abs() < 1e-14);
    }

    #[test]
    fn qre_support_failure_is_infinite() {
        let pure0 = Hermitian::from_real_diagonal(&[1.0, 0.0]);
        let d = quantum_relative_entropy(&Hermitian::maximally_mixed(2), &pure0).unwrap();
        assert_eq!(d, f64::INFINITY);
        assert_eq!(quantum_relative_entropy(&pure0, &pure0).unwrap(), 0.0);
    }

    #[test]
    fn qre_commuting_matches_classical() {
        let a = Hermitian::from_real_diagonal(&[0.2, 0.3, 0.5]);
        let b = Hermitian::from_real_diagonal(&[0.4, 0.4, 0.2]);
        let q = quantum_relative_entropy(&a, &b).unwrap();
        let c = relative_entropy(&[0.2, 0.3, 0.5], &[0.4, 0.4, 0.2]);
        assert!((q - c).abs() < 1e-14);
    }
}
