//! Seeded random instances in the style of the benchmark tables.

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::probe::active_constraints;
use super::spec::{
    hermitian_to_rows, real_rows, ChannelSpec, EnergySpec, InstanceData, InstanceSpec,
    ObservableSpec,
};
use crate::error::{Error, Result};
use crate::matfun::{CMatrix, Hermitian, C64};
use crate::problems::{ProblemKind, StinespringChannel};
use crate::random::{
    random_channel, random_density, random_isometry, random_simplex, seeded_rng, uniform_matrix,
    uniform_vector, SeededRng,
};

pub const RESAMPLE_LIMIT: usize = 100;
/// Distortion bound used for random rate-distortion instances.
pub const RANDOM_MAX_DISTORTION: f64 = 0.5;

/// Instance dimensions. `n` is the output or system dimension, `m` the input
/// alphabet or second factor, `l` the number of energy constraints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dims {
    pub n: usize,
    pub m: usize,
    pub l: usize,
}

impl Dims {
    pub fn new(n: usize, m: usize, l: usize) -> Self {
        Self { n, m, l }
    }

    /// Dimensions from a sweep row: `(n, l)` for capacities, `(n, _)` for
    /// rate-distortion and `(n, m)` for relative entropy of entanglement.
    pub fn from_row(kind: ProblemKind, a: usize, b: usize) -> Self {
        match kind {
            ProblemKind::Cc | ProblemKind::Cq | ProblemKind::Ea => Self::new(a, a, b),
            ProblemKind::Crd | ProblemKind::Qrd => Self::new(a, a, 0),
            ProblemKind::Ree => Self::new(a, b, 0),
        }
    }
}

/// Stinespring channel with environment of dimension `ceil(dim_b / 2)`.
pub fn random_stinespring<R: Rng + ?Sized>(
    rng: &mut R,
    dim_a: usize,
    dim_b: usize,
) -> Result<StinespringChannel> {
    let dim_e = dim_b.div_ceil(2);
    StinespringChannel::new(random_isometry(rng, dim_b * dim_e, dim_a), dim_b, dim_e)
}

/// Reproducible random instance; energy constraints are resampled until
/// feasible with at least one active constraint.
pub fn random_instance(kind: ProblemKind, dims: Dims, seed: u64) -> Result<InstanceSpec> {
    if dims.n == 0 || dims.m == 0 {
        return Err(Error::InvalidConfig(
            "instance dimensions must be positive".into(),
        ));
    }
    let mut rng = seeded_rng(seed);
    let data = match kind {
        ProblemKind::Cc => {
            let channel = real_rows(&random_channel(&mut rng, dims.n, dims.m));
            with_energy(&mut rng, dims, |energy| InstanceData::Cc {
                channel: channel.clone(),
                energy,
            })?
        }
        ProblemKind::Cq => {
            let ch = random_stinespring(&mut rng, dims.n, dims.n)?;
            let states = (0..dims.m)
                .map(|j| {
                    let input = if j < dims.n {
                        basis_state(dims.n, j)
                    } else {
                        let psi = random_isometry(&mut rng, dims.n, 1);
                        Hermitian::outer(psi.column(0).as_slice())
                    };
                    ch.apply(&input).map(|out| hermitian_to_rows(&out))
                })
                .collect::<Result<Vec<_>>>()?;
            with_energy(&mut rng, dims, |energy| InstanceData::Cq {
                states: states.clone(),
                energy,
            })?
        }
        ProblemKind::Ea => {
            let channel = ChannelSpec::from_channel(&random_stinespring(&mut rng, dims.n, dims.n)?);
            resample(dims.l, || {
                let energy = (dims.l > 0).then(|| {
                    let observables = (0..dims.l)
                        .map(|_| {
                            hermitian_to_rows(
                                &random_density(&mut rng, dims.n).scale(dims.n as f64),
                            )
                        })
                        .collect();
                    ObservableSpec {
                        observables,
                        bounds: uniform_vector(&mut rng, dims.l).iter().copied().collect(),
                        cone: None,
                    }
                });
                InstanceData::Ea {
                    channel: channel.clone(),
                    energy,
                }
            })?
        }
        ProblemKind::Crd => {
            let source = strictly_positive_simplex(&mut rng, dims.m);
            let distortion = (dims.n != dims.m).then(|| {
                real_rows(&DMatrix::from_fn(dims.n, dims.m, |i, j| {
                    if i == j {
                        0.0
                    } else {
                        1.0
                    }
                }))
            });
            InstanceData::Crd {
                source,
                distortion,
                max_distortion: RANDOM_MAX_DISTORTION,
                cone: None,
            }
        }
        ProblemKind::Qrd => InstanceData::Qrd {
            state: hermitian_to_rows(&random_density(&mut rng, dims.n)),
            max_distortion: RANDOM_MAX_DISTORTION,
            cone: None,
        },
        ProblemKind::Ree => InstanceData::Ree {
            state: hermitian_to_rows(&random_density(&mut rng, dims.n * dims.m)),
            dim_a: dims.n,
            dim_b: dims.m,
        },
    };
    Ok(InstanceSpec {
        data,
        seed: Some(seed),
    })
}

fn with_energy(
    rng: &mut SeededRng,
    dims: Dims,
    make: impl Fn(Option<EnergySpec>) -> InstanceData,
) -> Result<InstanceData> {
    resample(dims.l, || {
        let energy = (dims.l > 0).then(|| EnergySpec {
            matrix: real_rows(&uniform_matrix(rng, dims.l, dims.m)),
            bounds: uniform_vector(rng, dims.l).iter().copied().collect(),
            cone: None,
        });
        make(energy)
    })
}

fn resample(l: usize, mut draw: impl FnMut() -> InstanceData) -> Result<InstanceData> {
    if l == 0 {
        return Ok(draw());
    }
    let mut reason = String::new();
    for _ in 0..RESAMPLE_LIMIT {
        let data = draw();
        match InstanceSpec::new(data.clone()).build() {
            Ok(problem) => {
                if active_constraints(&problem)? {
                    return Ok(data);
                }
                reason = "no constraint active at the unconstrained optimum".into();
            }
            Err(Error::Infeasible(msg)) => reason = msg,
            Err(e) => return Err(e),
        }
    }
    Err(Error::ResampleBudget {
        attempts: RESAMPLE_LIMIT,
        reason,
    })
}

fn basis_state(n: usize, j: usize) -> Hermitian {
    let mut m = CMatrix::zeros(n, n);
    m[(j, j)] = C64::new(1.0, 0.0);
    Hermitian::symmetrized(m)
}

fn strictly_positive_simplex(rng: &mut SeededRng, m: usize) -> Vec<f64> {
    loop {
        let p = random_simplex(rng, m);
        if p.iter().all(|&v| v > 1e-6) {
            return p.iter().copied().collect();
        }
    }
}
