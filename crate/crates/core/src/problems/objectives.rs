//! Objective and gradient oracles for the six applications.
//!
//! Each oracle returns the natural information quantity and its gradient;
//! [`super::SaddleProblem`] attaches the optimization sense.

use std::fmt;

use nalgebra::{DMatrix, DVector};

use super::channel::{ClassicalChannel, CqEnsemble, StinespringChannel};
use crate::entropy::{cross_log_trace, shannon_entropy};
use crate::error::{Error, Result};
use crate::matfun::{
    clamp_eigenvalues, directional_derivative_at, partial_trace, partial_trace_adjoint,
    spectral_decompose, Hermitian, ScalarFunction, Subsystem, CLAMP_RELATIVE,
};
use crate::point::Point;

/// Value and gradient oracle over a primal point.
pub trait Objective: Send + Sync + fmt::Debug {
    fn value(&self, x: &Point) -> Result<f64> {
        Ok(self.value_and_gradient(x)?.0)
    }

    fn value_and_gradient(&self, x: &Point) -> Result<(f64, Point)>;
}

/// `S(H)` and `log H` from one eigendecomposition, with clamped logarithm.
fn entropy_and_log(h: &Hermitian) -> Result<(f64, Hermitian)> {
    let spec = spectral_decompose(h);
    let s = shannon_entropy(&spec.eigenvalues);
    let (clamped, _) = clamp_eigenvalues(&spec.eigenvalues, &ScalarFunction::log())?;
    let logs: Vec<f64> = clamped.iter().map(|l| l.ln()).collect();
    Ok((s, Hermitian::from_eigen(&logs, &spec.eigenvectors)))
}

fn non_finite_gradient(what: &str) -> Error {
    Error::InvalidPoint(format!("{what} gradient is not finite at this point"))
}

/// `I_c(p) = sum_j p_j D(Q_j || Q p)` with partials `D(Q_j || Q p) - 1`.
pub fn classical_mutual_information(
    p: &DVector<f64>,
    channel: &ClassicalChannel,
) -> Result<(f64, DVector<f64>)> {
    let q = channel.matrix();
    if p.len() != q.ncols() {
        return Err(Error::DimensionMismatch {
            expected: q.ncols(),
            found: p.len(),
        });
    }
    let out = channel.apply(p);
    let mut value = 0.0;
    let mut grad = DVector::zeros(p.len());
    for (j, col) in q.column_iter().enumerate() {
        let d = crate::entropy::relative_entropy(col.as_slice(), out.as_slice());
        if p[j] > 0.0 {
            value += p[j] * d;
        }
        grad[j] = d - 1.0;
    }
    if !grad.iter().all(|g| g.is_finite()) {
        return Err(non_finite_gradient("classical mutual information"));
    }
    Ok((value, grad))
}

/// Holevo quantity `chi(p) = sum_j p_j S(rho_j || rho_p)` with partials
/// `S(rho_j || rho_p) - 1`.
pub fn holevo_information(p: &DVector<f64>, ensemble: &CqEnsemble) -> Result<(f64, DVector<f64>)> {
    if p.len() != ensemble.len() {
        return Err(Error::DimensionMismatch {
            expected: ensemble.len(),
            found: p.len(),
        });
    }
    let avg = spectral_decompose(&ensemble.average(p));
    let members: Vec<(&Hermitian, f64)> = ensemble
        .states()
        .iter()
        .zip(ensemble.entropies().iter().copied())
        .collect();
    let divergences =
        crate::parallel::map(&members, |(state, s)| -s - cross_log_trace(state, &avg));
    let value = divergences
        .iter()
        .zip(p.iter())
        .filter(|(_, &w)| w > 0.0)
        .map(|(d, w)| w * d)
        .sum();
    let grad = DVector::from_iterator(p.len(), divergences.iter().map(|d| d - 1.0));
    if !grad.iter().all(|g| g.is_finite()) {
        return Err(non_finite_gradient("Holevo information"));
    }
    Ok((value, grad))
}

/// `I_q(rho) = S(rho) + S(N(rho)) - S(N_c(rho))` with gradient
/// `-log rho - N^dagger(log N(rho)) + N_c^dagger(log N_c(rho)) - I`.
pub fn quantum_mutual_information(
    rho: &Hermitian,
    channel: &StinespringChannel,
) -> Result<(f64, Hermitian)> {
    let (s_in, log_in) = entropy_and_log(rho)?;
    let (s_out, log_out) = entropy_and_log(&channel.apply(rho)?)?;
    let (s_env, log_env) = entropy_and_log(&channel.complementary_apply(rho)?)?;
    let value = s_in + s_out - s_env;
    let grad = channel.complementary_adjoint_apply(&log_env)?
        - log_in
        - channel.adjoint_apply(&log_out)?
        - Hermitian::identity(rho.dim());
    Ok((value, grad))
}

/// Mutual information of a joint law `P` (`rows x marginal.len()`,
/// column `j` summing to `p_j`), with partials `log P_ij - log(p_j q_i)`.
pub fn joint_mutual_information(
    joint: &DMatrix<f64>,
    marginal: &DVector<f64>,
) -> Result<(f64, DMatrix<f64>)> {
    if joint.ncols() != marginal.len() {
        return Err(Error::DimensionMismatch {
            expected: marginal.len(),
            found: joint.ncols(),
        });
    }
    if let Some(&v) = joint.iter().find(|v| !(**v >= 0.0)) {
        return Err(Error::DomainViolation {
            value: v,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    let out: DVector<f64> = joint.column_sum();
    let floor = CLAMP_RELATIVE * joint.amax();
    let mut value = 0.0;
    let mut grad = DMatrix::zeros(joint.nrows(), joint.ncols());
    for j in 0..joint.ncols() {
        for i in 0..joint.nrows() {
            let pij = joint[(i, j)];
            if pij > 0.0 {
                value += pij * (pij / (marginal[j] * out[i])).ln();
            }
            grad[(i, j)] = pij.max(floor).ln() - (marginal[j] * out[i].max(floor)).ln();
        }
    }
    Ok((value, grad))
}

/// `I_q(rho_BR) = S_A + S(tr_R rho_BR) - S(rho_BR)` with gradient
/// `log rho_BR - log(tr_R rho_BR) (x) I_R`.
pub fn bipartite_mutual_information(
    rho: &Hermitian,
    dim_b: usize,
    dim_r: usize,
    source_entropy: f64,
) -> Result<(f64, Hermitian)> {
    let (s_joint, log_joint) = entropy_and_log(rho)?;
    let reduced = partial_trace(rho, dim_b, dim_r, Subsystem::B)?;
    let (s_b, log_b) = entropy_and_log(&reduced)?;
    let value = source_entropy + s_b - s_joint;
    let grad = log_joint - partial_trace_adjoint(&log_b, dim_b, dim_r, Subsystem::B)?;
    Ok((value, grad))
}

/// `g(sigma) = -tr(rho log sigma)` with gradient
/// `-U [log^[1](Lambda) .* (U^dagger rho U)] U^dagger`.
pub fn qre_linear_objective(sigma: &Hermitian, rho: &Hermitian) -> Result<(f64, Hermitian)> {
    if sigma.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    let spec = spectral_decompose(sigma);
    let value = -cross_log_trace(rho, &spec);
    let grad = directional_derivative_at(&spec, rho, &ScalarFunction::log())?.scale(-1.0);
    Ok((value, grad))
}

fn qre_value(sigma: &Hermitian, rho: &Hermitian) -> f64 {
    -cross_log_trace(rho, &spectral_decompose(sigma))
}

/// Classical mutual information of a channel as a function of the input law.
#[derive(Debug, Clone)]
pub struct ClassicalCapacityObjective {
    pub channel: ClassicalChannel,
}

impl Objective for ClassicalCapacityObjective {
    fn value_and_gradient(&self, x: &Point) -> Result<(f64, Point)> {
        let (v, g) = classical_mutual_information(x.as_vector()?, &self.channel)?;
        Ok((v, Point::Vector(g)))
    }

    fn value(&self, x: &Point) -> Result<f64> {
        let p = x.as_vector()?;
        let out = self.channel.apply(p);
        Ok(self
            .channel
            .matrix()
            .column_iter()
            .zip(p.iter())
            .filter(|(_, &w)| w > 0.0)
            .map(|(col, &w)| w * crate::entropy::relative_entropy(col.as_slice(), out.as_slice()))
            .sum())
    }
}

#[derive(Debug, Clone)]
pub struct HolevoObjective {
    pub ensemble: CqEnsemble,
}

impl Objective for HolevoObjective {
    fn value_and_gradient(&self, x: &Point) -> Result<(f64, Point)> {
        let (v, g) = holevo_information(x.as_vector()?, &self.ensemble)?;
        Ok((v, Point::Vector(g)))
    }

    fn value(&self, x: &Point) -> Result<f64> {
        let p = x.as_vector()?;
        let avg = crate::entropy::von_neumann_entropy(&self.ensemble.average(p));
        let mixed: f64 = p
            .iter()
            .zip(self.ensemble.entropies())
            .map(|(w, s)| w * s)
            .sum();
        Ok(avg - mixed)
    }
}

#[derive(Debug, Clone)]
pub struct EntanglementAssistedObjective {
    pub channel: StinespringChannel,
}

impl Objective for EntanglementAssistedObjective {
    fn value_and_gradient(&self, x: &Point) -> Result<(f64, Point)> {
        let (v, g) = quantum_mutual_information(x.as_matrix()?, &self.channel)?;
        Ok((v, Point::Matrix(g)))
    }

    fn value(&self, x: &Point) -> Result<f64> {
        use crate::entropy::von_neumann_entropy as s;
        let rho = x.as_matrix()?;
        Ok(s(rho) + s(&self.channel.apply(rho)?) - s(&self.channel.complementary_apply(rho)?))
    }
}

/// Mutual information of a joint law with fixed input marginal.
#[derive(Debug, Clone)]
pub struct ClassicalRateObjective {
    pub rows: usize,
    pub marginal: DVector<f64>,
}

impl Objective for ClassicalRateObjective {
    fn value_and_gradient(&self, x: &Point) -> Result<(f64, Point)> {
        let joint = crate::point::unflatten(x.as_vector()?, self.rows);
        let (v, g) = joint_mutual_information(&joint, &self.marginal)?;
        Ok((v, Point::Vector(crate::point::flatten(&g))))
    }
}

/// Quantum mutual information of `rho_BR` with a fixed source entropy.
#[derive(Debug, Clone)]
pub struct QuantumRateObjective {
    pub dim_b: usize,
    pub dim_r: usize,
    pub source_entropy: f64,
}

impl Objective for QuantumRateObjective {
    fn value_and_gradient(&self, x: &Point) -> Result<(f64, Point)> {
        let (v, g) = bipartite_mutual_information(
            x.as_matrix()?,
            self.dim_b,
            self.dim_r,
            self.source_entropy,
        )?;
        Ok((v, Point::Matrix(g)))
    }

    fn value(&self, x: &Point) -> Result<f64> {
        use crate::entropy::von_neumann_entropy as s;
        let rho = x.as_matrix()?;
        let reduced = partial_trace(rho, self.dim_b, self.dim_r, Subsystem::B)?;
        Ok(self.source_entropy + s(&reduced) - s(rho))
    }
}

/// `-tr(rho log sigma)` for fixed `rho`.
#[derive(Debug, Clone)]
pub struct RelativeEntropyObjective {
    pub rho: Hermitian,
}

impl Objective for RelativeEntropyObjective {
    fn value_and_gradient(&self, x: &Point) -> Result<(f64, Point)> {
        let (v, g) = qre_linear_objective(x.as_matrix()?, &self.rho)?;
        Ok((v, Point::Matrix(g)))
    }

    fn value(&self, x: &Point) -> Result<f64> {
        Ok(qre_value(x.as_matrix()?, &self.rho))
    }
}
