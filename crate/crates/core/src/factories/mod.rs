//! Builders turning application data into [`SaddleProblem`]s.

mod probe;
mod random;
mod spec;

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

pub use probe::{active_constraints, is_feasible, FEASIBILITY_TOL};
pub use random::{random_instance, Dims, RESAMPLE_LIMIT};
pub use spec::{ChannelSpec, ComplexRows, EnergySpec, InstanceData, InstanceSpec, ObservableSpec};

use crate::entropy::von_neumann_entropy;
use crate::error::{Error, Result};
use crate::kernels::{Domain, KernelKind};
use crate::matfun::{spectral_decompose, Hermitian, Subsystem, C64};
use crate::point::{flatten, Point};
use crate::problems::{
    check_density, ClassicalCapacityObjective, ClassicalChannel, ClassicalRateObjective, Cone,
    ConstraintBlock, CqEnsemble, EntanglementAssistedObjective, HolevoObjective,
    LinearConstraintSet, LinearOp, ProblemKind, QuantumRateObjective, RelativeEntropyObjective,
    SaddleProblem, Sense, StinespringChannel,
};

/// Componentwise energy constraints `A p <= b` on an input distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyConstraints {
    pub matrix: DMatrix<f64>,
    pub bounds: DVector<f64>,
}

impl EnergyConstraints {
    pub fn new(matrix: DMatrix<f64>, bounds: DVector<f64>) -> Result<Self> {
        if matrix.nrows() != bounds.len() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: bounds.len(),
            });
        }
        if matrix
            .iter()
            .chain(bounds.iter())
            .any(|v| !(*v >= 0.0) || !v.is_finite())
        {
            return Err(Error::InvalidConfig(
                "energy data must be finite and nonnegative".into(),
            ));
        }
        Ok(Self { matrix, bounds })
    }

    fn block(&self) -> Result<ConstraintBlock> {
        ConstraintBlock::new(
            LinearOp::Matrix(self.matrix.clone()),
            Point::Vector(self.bounds.clone()),
            Cone::Nonneg,
        )
    }
}

/// Energy constraints `tr(A_i rho) <= b_i` with positive semidefinite `A_i`.
#[derive(Debug, Clone)]
pub struct ObservableConstraints {
    pub observables: Vec<Hermitian>,
    pub bounds: DVector<f64>,
}

impl ObservableConstraints {
    pub fn new(observables: Vec<Hermitian>, bounds: DVector<f64>) -> Result<Self> {
        if observables.len() != bounds.len() {
            return Err(Error::DimensionMismatch {
                expected: observables.len(),
                found: bounds.len(),
            });
        }
        if bounds.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidConfig(
                "energy bounds must be finite and nonnegative".into(),
            ));
        }
        for (i, a) in observables.iter().enumerate() {
            let min = spectral_decompose(a).min();
            if min < -crate::matfun::NEGATIVE_SLACK * a.max_abs().max(1.0) {
                return Err(Error::InvalidConfig(format!(
                    "observable {i} is not positive semidefinite (eigenvalue {min:e})"
                )));
            }
        }
        Ok(Self {
            observables,
            bounds,
        })
    }

    fn block(&self) -> Result<ConstraintBlock> {
        ConstraintBlock::new(
            LinearOp::Observables(self.observables.clone()),
            Point::Vector(self.bounds.clone()),
            Cone::Nonneg,
        )
    }
}

fn checked_feasible(problem: SaddleProblem) -> Result<SaddleProblem> {
    if !is_feasible(&problem)? {
        return Err(Error::Infeasible(format!(
            "no feasible point found for the {} energy constraints",
            problem.kind
        )));
    }
    Ok(problem)
}

fn simplex_energy(
    inputs: usize,
    energy: Option<&EnergyConstraints>,
) -> Result<LinearConstraintSet> {
    match energy {
        None => Ok(LinearConstraintSet::empty()),
        Some(e) if e.matrix.nrows() == 0 => Ok(LinearConstraintSet::empty()),
        Some(e) if e.matrix.ncols() != inputs => Err(Error::DimensionMismatch {
            expected: inputs,
            found: e.matrix.ncols(),
        }),
        Some(e) => Ok(LinearConstraintSet::new(vec![e.block()?])),
    }
}

/// Energy-constrained classical capacity as the minimization of `-I_c`.
pub fn make_classical_capacity(
    channel: ClassicalChannel,
    energy: Option<&EnergyConstraints>,
) -> Result<SaddleProblem> {
    let m = channel.inputs();
    let problem = SaddleProblem {
        kind: ProblemKind::Cc,
        objective: Arc::new(ClassicalCapacityObjective { channel }),
        sense: Sense::Maximize,
        domain: Domain::Simplex(m),
        kernel: KernelKind::NegShannon,
        constraints: simplex_energy(m, energy)?,
        smoothness: 1.0,
        strong_convexity: None,
        report_offset: 0.0,
    };
    checked_feasible(problem)
}

/// Energy-constrained classical-quantum capacity over the input law of a fixed ensemble.
pub fn make_cq_capacity(
    ensemble: CqEnsemble,
    energy: Option<&EnergyConstraints>,
) -> Result<SaddleProblem> {
    let m = ensemble.len();
    let problem = SaddleProblem {
        kind: ProblemKind::Cq,
        objective: Arc::new(HolevoObjective { ensemble }),
        sense: Sense::Maximize,
        domain: Domain::Simplex(m),
        kernel: KernelKind::NegShannon,
        constraints: simplex_energy(m, energy)?,
        smoothness: 1.0,
        strong_convexity: None,
        report_offset: 0.0,
    };
    checked_feasible(problem)
}

/// Energy-constrained entanglement-assisted capacity.
pub fn make_ea_capacity(
    channel: StinespringChannel,
    energy: Option<&ObservableConstraints>,
) -> Result<SaddleProblem> {
    let (dim_a, _, _) = channel.dims();
    let constraints = match energy {
        None => LinearConstraintSet::empty(),
        Some(e) if e.observables.is_empty() => LinearConstraintSet::empty(),
        Some(e) => {
            if let Some(bad) = e.observables.iter().find(|a| a.dim() != dim_a) {
                return Err(Error::DimensionMismatch {
                    expected: dim_a,
                    found: bad.dim(),
                });
            }
            LinearConstraintSet::new(vec![e.block()?])
        }
    };
    let problem = SaddleProblem {
        kind: ProblemKind::Ea,
        objective: Arc::new(EntanglementAssistedObjective { channel }),
        sense: Sense::Maximize,
        domain: Domain::Density(dim_a),
        kernel: KernelKind::NegVonNeumann,
        constraints,
        smoothness: 2.0,
        strong_convexity: None,
        report_offset: 0.0,
    };
    checked_feasible(problem)
}

/// Hamming distortion `1 1^T - I` on `n` symbols.
pub fn hamming_distortion(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { 1.0 })
}

/// Classical rate-distortion over joint laws `P` (`n x m`, column sums `p`).
///
/// `distortion` defaults to Hamming on the source alphabet.
pub fn make_classical_rd(
    source: &DVector<f64>,
    distortion: Option<&DMatrix<f64>>,
    max_distortion: f64,
) -> Result<SaddleProblem> {
    let m = source.len();
    if m == 0 || source.iter().any(|p| !(*p > 0.0) || !p.is_finite()) {
        return Err(Error::InvalidConfig(
            "source distribution must be strictly positive".into(),
        ));
    }
    let source = Point::simplex(source.clone())?.as_vector()?.clone();
    let delta = distortion.cloned().unwrap_or_else(|| hamming_distortion(m));
    if delta.ncols() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: delta.ncols(),
        });
    }
    if delta.iter().any(|d| !(*d >= 0.0) || !d.is_finite()) {
        return Err(Error::InvalidConfig(
            "distortion matrix must be finite and nonnegative".into(),
        ));
    }
    if !(max_distortion >= 0.0) || !max_distortion.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "distortion bound must be nonnegative, got {max_distortion}"
        )));
    }
    let n = delta.nrows();
    let row = DMatrix::from_row_slice(1, n * m, flatten(&delta).as_slice());
    let block = ConstraintBlock::new(
        LinearOp::Matrix(row),
        Point::Vector(DVector::from_element(1, max_distortion)),
        Cone::Nonneg,
    )?;
    Ok(SaddleProblem {
        kind: ProblemKind::Crd,
        objective: Arc::new(ClassicalRateObjective {
            rows: n,
            marginal: source.clone(),
        }),
        sense: Sense::Minimize,
        domain: Domain::FixedMarginal {
            rows: n,
            marginal: source,
        },
        kernel: KernelKind::NegShannon,
        constraints: LinearConstraintSet::new(vec![block]),
        smoothness: 1.0,
        strong_convexity: None,
        report_offset: 0.0,
    })
}

/// Relative rank threshold below which a source eigenvalue counts as zero.
pub const RANK_TOL: f64 = 1e-12;

/// Entanglement-assisted rate-distortion with entanglement-fidelity distortion.
///
/// The reference system has dimension `rank(rho_a) = dim(rho_a)`, and the
/// reconstruction system `B` is identified with `A`.
pub fn make_quantum_rd(rho_a: &Hermitian, max_distortion: f64) -> Result<SaddleProblem> {
    check_density(rho_a)?;
    if !(0.0..=1.0).contains(&max_distortion) {
        return Err(Error::InvalidConfig(format!(
            "distortion bound must lie in [0, 1], got {max_distortion}"
        )));
    }
    let n = rho_a.dim();
    let spec = spectral_decompose(rho_a);
    if spec.min() <= RANK_TOL * spec.max() {
        return Err(Error::InvalidConfig(format!(
            "source state is rank deficient (smallest eigenvalue {:e}); truncate it to its support first",
            spec.min()
        )));
    }
    // |psi> = sum_i sqrt(l_i) |a_i>|i>, index a * n + r.
    let mut psi = vec![C64::new(0.0, 0.0); n * n];
    for (i, &l) in spec.eigenvalues.iter().enumerate() {
        let w = l.sqrt();
        for a in 0..n {
            psi[a * n + i] += spec.eigenvectors[(a, i)] * w;
        }
    }
    let purification = Hermitian::outer(&psi);
    let rho_r = Hermitian::from_real_diagonal(&spec.eigenvalues);
    let fidelity_distortion = Hermitian::identity(n * n) - purification;

    let marginal = ConstraintBlock::new(
        LinearOp::PartialTrace {
            dim_a: n,
            dim_b: n,
            over: Subsystem::A,
        },
        Point::Matrix(rho_r),
        Cone::Zero,
    )?;
    let distortion = ConstraintBlock::new(
        LinearOp::Observables(vec![fidelity_distortion]),
        Point::Vector(DVector::from_element(1, max_distortion)),
        Cone::Nonneg,
    )?;
    Ok(SaddleProblem {
        kind: ProblemKind::Qrd,
        objective: Arc::new(QuantumRateObjective {
            dim_b: n,
            dim_r: n,
            source_entropy: von_neumann_entropy(rho_a),
        }),
        sense: Sense::Minimize,
        domain: Domain::Density(n * n),
        kernel: KernelKind::NegVonNeumann,
        constraints: LinearConstraintSet::new(vec![marginal, distortion]),
        smoothness: 1.0,
        strong_convexity: None,
        report_offset: 0.0,
    })
}

/// Relative entropy of entanglement relaxed to PPT states, `min S(rho || sigma)`.
pub fn make_ree_ppt(rho: &Hermitian, dim_a: usize, dim_b: usize) -> Result<SaddleProblem> {
    if dim_a == 0 || dim_b == 0 || dim_a * dim_b != rho.dim() {
        return Err(Error::Factorization {
            dim: rho.dim(),
            dim_a,
            dim_b,
        });
    }
    check_density(rho)?;
    let n = rho.dim();
    let spec = spectral_decompose(rho);
    let block = ConstraintBlock::new(
        LinearOp::NegPartialTranspose {
            dim_a,
            dim_b,
            over: Subsystem::B,
        },
        Point::Matrix(Hermitian::zeros(n)),
        Cone::Psd,
    )?;
    Ok(SaddleProblem {
        kind: ProblemKind::Ree,
        objective: Arc::new(RelativeEntropyObjective { rho: rho.clone() }),
        sense: Sense::Minimize,
        domain: Domain::Density(n),
        kernel: KernelKind::NegLogDet,
        constraints: LinearConstraintSet::new(vec![block]),
        smoothness: spec.max(),
        strong_convexity: Some(spec.min().max(0.0)),
        report_offset: -von_neumann_entropy(rho),
    })
}
