//! Serializable problem instances.
//!
//! Complex matrices are row-major arrays of `[re, im]` pairs.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{
    make_classical_capacity, make_classical_rd, make_cq_capacity, make_ea_capacity,
    make_quantum_rd, make_ree_ppt, EnergyConstraints, ObservableConstraints,
};
use crate::error::{Error, Result};
use crate::matfun::{CMatrix, Hermitian, C64};
use crate::problems::{
    ClassicalChannel, Cone, CqEnsemble, ProblemKind, SaddleProblem, StinespringChannel,
};

pub type ComplexRows = Vec<Vec<[f64; 2]>>;

fn real_rows_to_matrix(rows: &[Vec<f64>], what: &str) -> Result<DMatrix<f64>> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(Error::InvalidConfig(format!(
            "`{what}` rows have unequal lengths"
        )));
    }
    Ok(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
}

fn matrix_to_real_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter()
        .map(|row| row.iter().copied().collect())
        .collect()
}

fn complex_rows_to_matrix(rows: &ComplexRows, what: &str) -> Result<CMatrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if r == 0 || rows.iter().any(|row| row.len() != c) {
        return Err(Error::InvalidConfig(format!(
            "`{what}` must be a nonempty rectangular matrix"
        )));
    }
    Ok(CMatrix::from_fn(r, c, |i, j| {
        C64::new(rows[i][j][0], rows[i][j][1])
    }))
}

pub(crate) fn matrix_to_complex_rows(m: &CMatrix) -> ComplexRows {
    m.row_iter()
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

fn hermitian_from_rows(rows: &ComplexRows, what: &str) -> Result<Hermitian> {
    let m = complex_rows_to_matrix(rows, what)?;
    if !m.is_square() {
        return Err(Error::InvalidConfig(format!("`{what}` must be square")));
    }
    Hermitian::new(m).map_err(|e| Error::InvalidConfig(format!("`{what}`: {e}")))
}

fn inequality_cone(cone: Option<Cone>, what: &str) -> Result<()> {
    match cone {
        None | Some(Cone::Nonneg) => Ok(()),
        Some(other) => Err(Error::InvalidConfig(format!(
            "`{what}.cone` must be `nonneg` for an inequality constraint, got `{}`",
            serde_json_name(other)
        ))),
    }
}

fn serde_json_name(c: Cone) -> &'static str {
    match c {
        Cone::Nonneg => "nonneg",
        Cone::Psd => "psd",
        Cone::Zero => "zero",
    }
}

/// `A p <= b` with `A` given row by row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergySpec {
    pub matrix: Vec<Vec<f64>>,
    pub bounds: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone: Option<Cone>,
}

impl EnergySpec {
    fn build(&self) -> Result<EnergyConstraints> {
        inequality_cone(self.cone, "energy")?;
        EnergyConstraints::new(
            real_rows_to_matrix(&self.matrix, "energy.matrix")?,
            DVector::from_vec(self.bounds.clone()),
        )
    }
}

/// `tr(A_i rho) <= b_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableSpec {
    pub observables: Vec<ComplexRows>,
    pub bounds: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone: Option<Cone>,
}

impl ObservableSpec {
    fn build(&self) -> Result<ObservableConstraints> {
        inequality_cone(self.cone, "energy")?;
        let obs = self
            .observables
            .iter()
            .enumerate()
            .map(|(i, a)| hermitian_from_rows(a, &format!("energy.observables[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        ObservableConstraints::new(obs, DVector::from_vec(self.bounds.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum ChannelSpec {
    /// Isometry `U` of shape `(dim_b * dim_e) x dim_a`, output index `b * dim_e + e`.
    Isometry {
        matrix: ComplexRows,
        dim_b: usize,
        dim_e: usize,
    },
    Kraus(Vec<ComplexRows>),
    /// Identity channel on `n` levels.
    Identity(usize),
}

impl ChannelSpec {
    pub fn build(&self) -> Result<StinespringChannel> {
        match self {
            ChannelSpec::Isometry {
                matrix,
                dim_b,
                dim_e,
            } => StinespringChannel::new(
                complex_rows_to_matrix(matrix, "channel.isometry.matrix")?,
                *dim_b,
                *dim_e,
            ),
            ChannelSpec::Kraus(ops) => {
                let ops = ops
                    .iter()
                    .enumerate()
                    .map(|(k, op)| complex_rows_to_matrix(op, &format!("channel.kraus[{k}]")))
                    .collect::<Result<Vec<_>>>()?;
                StinespringChannel::from_kraus(&ops)
            }
            ChannelSpec::Identity(n) if *n > 0 => Ok(StinespringChannel::identity(*n)),
            ChannelSpec::Identity(_) => Err(Error::InvalidConfig(
                "`channel.identity` must be positive".into(),
            )),
        }
    }

    pub fn from_channel(ch: &StinespringChannel) -> Self {
        let (_, dim_b, dim_e) = ch.dims();
        ChannelSpec::Isometry {
            matrix: matrix_to_complex_rows(ch.isometry()),
            dim_b,
            dim_e,
        }
    }
}

/// Problem payload keyed by kind: `{"problem": "cc", "data": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "problem", content = "data", rename_all = "lowercase")]
pub enum InstanceData {
    Cc {
        /// Column-stochastic channel, rows are outputs.
        channel: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        energy: Option<EnergySpec>,
    },
    Cq {
        /// Channel outputs for each input letter.
        states: Vec<ComplexRows>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        energy: Option<EnergySpec>,
    },
    Ea {
        channel: ChannelSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        energy: Option<ObservableSpec>,
    },
    Crd {
        source: Vec<f64>,
        /// Defaults to Hamming distortion.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        distortion: Option<Vec<Vec<f64>>>,
        max_distortion: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cone: Option<Cone>,
    },
    Qrd {
        state: ComplexRows,
        max_distortion: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cone: Option<Cone>,
    },
    Ree {
        state: ComplexRows,
        dim_a: usize,
        dim_b: usize,
    },
}

/// A problem instance plus the seed it was drawn from, when random.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    #[serde(flatten)]
    pub data: InstanceData,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl InstanceSpec {
    pub fn new(data: InstanceData) -> Self {
        Self { data, seed: None }
    }

    pub fn kind(&self) -> ProblemKind {
        match self.data {
            InstanceData::Cc { .. } => ProblemKind::Cc,
            InstanceData::Cq { .. } => ProblemKind::Cq,
            InstanceData::Ea { .. } => ProblemKind::Ea,
            InstanceData::Crd { .. } => ProblemKind::Crd,
            InstanceData::Qrd { .. } => ProblemKind::Qrd,
            InstanceData::Ree { .. } => ProblemKind::Ree,
        }
    }

    /// Primary dimensions `(n, m, l)` as used in sweep tables.
    pub fn dims(&self) -> (usize, usize, usize) {
        match &self.data {
            InstanceData::Cc { channel, energy } => (
                channel.len(),
                channel.first().map_or(0, Vec::len),
                energy.as_ref().map_or(0, |e| e.bounds.len()),
            ),
            InstanceData::Cq { states, energy } => (
                states.first().map_or(0, Vec::len),
                states.len(),
                energy.as_ref().map_or(0, |e| e.bounds.len()),
            ),
            InstanceData::Ea { channel, energy } => {
                let n = match channel {
                    ChannelSpec::Isometry { matrix, .. } => matrix.first().map_or(0, Vec::len),
                    ChannelSpec::Kraus(ops) => {
                        ops.first().and_then(|k| k.first()).map_or(0, Vec::len)
                    }
                    ChannelSpec::Identity(n) => *n,
                };
                (n, n, energy.as_ref().map_or(0, |e| e.bounds.len()))
            }
            InstanceData::Crd {
                source, distortion, ..
            } => (
                distortion.as_ref().map_or(source.len(), Vec::len),
                source.len(),
                1,
            ),
            InstanceData::Qrd { state, .. } => (state.len(), state.len(), 2),
            InstanceData::Ree { dim_a, dim_b, .. } => (*dim_a, *dim_b, 1),
        }
    }

    pub fn build(&self) -> Result<SaddleProblem> {
        match &self.data {
            InstanceData::Cc { channel, energy } => {
                let ch = ClassicalChannel::new(real_rows_to_matrix(channel, "channel")?)
                    .map_err(|e| Error::InvalidConfig(format!("`channel`: {e}")))?;
                let energy = energy.as_ref().map(EnergySpec::build).transpose()?;
                make_classical_capacity(ch, energy.as_ref())
            }
            InstanceData::Cq { states, energy } => {
                let states = states
                    .iter()
                    .enumerate()
                    .map(|(j, s)| hermitian_from_rows(s, &format!("states[{j}]")))
                    .collect::<Result<Vec<_>>>()?;
                let ensemble = CqEnsemble::new(states)
                    .map_err(|e| Error::InvalidConfig(format!("`states`: {e}")))?;
                let energy = energy.as_ref().map(EnergySpec::build).transpose()?;
                make_cq_capacity(ensemble, energy.as_ref())
            }
            InstanceData::Ea { channel, energy } => {
                let ch = channel
                    .build()
                    .map_err(|e| Error::InvalidConfig(format!("`channel`: {e}")))?;
                let energy = energy.as_ref().map(ObservableSpec::build).transpose()?;
                make_ea_capacity(ch, energy.as_ref())
            }
            InstanceData::Crd {
                source,
                distortion,
                max_distortion,
                cone,
            } => {
                inequality_cone(*cone, "data")?;
                let delta = distortion
                    .as_ref()
                    .map(|d| real_rows_to_matrix(d, "distortion"))
                    .transpose()?;
                make_classical_rd(
                    &DVector::from_vec(source.clone()),
                    delta.as_ref(),
                    *max_distortion,
                )
            }
            InstanceData::Qrd {
                state,
                max_distortion,
                cone,
            } => {
                inequality_cone(*cone, "data")?;
                make_quantum_rd(&hermitian_from_rows(state, "state")?, *max_distortion)
            }
            InstanceData::Ree {
                state,
                dim_a,
                dim_b,
            } => make_ree_ppt(&hermitian_from_rows(state, "state")?, *dim_a, *dim_b),
        }
    }
}

pub(crate) fn hermitian_to_rows(h: &Hermitian) -> ComplexRows {
    matrix_to_complex_rows(h.matrix())
}

pub(crate) fn real_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    matrix_to_real_rows(m)
}
