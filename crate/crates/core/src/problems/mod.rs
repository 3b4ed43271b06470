//! Objectives, channels and linear constraints assembled into saddle problems.

mod channel;
mod constraints;
mod objectives;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use channel::{
    channel_apply, complementary_apply, ClassicalChannel, CqEnsemble, StinespringChannel,
    ISOMETRY_TOL, STOCHASTIC_TOL,
};
pub use constraints::{Cone, ConstraintBlock, LinearConstraintSet, LinearOp};
pub use objectives::{
    bipartite_mutual_information, classical_mutual_information, holevo_information,
    joint_mutual_information, qre_linear_objective, quantum_mutual_information,
    ClassicalCapacityObjective, ClassicalRateObjective, EntanglementAssistedObjective,
    HolevoObjective, Objective, QuantumRateObjective, RelativeEntropyObjective,
};

pub(crate) use channel::check_density;

use crate::error::Result;
use crate::kernels::{Domain, KernelKind};
use crate::point::{Dual, Point};

/// The six applications.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    /// Energy-constrained classical capacity.
    Cc,
    /// Classical-quantum capacity.
    Cq,
    /// Entanglement-assisted capacity.
    Ea,
    /// Classical rate-distortion.
    Crd,
    /// Entanglement-assisted rate-distortion.
    Qrd,
    /// Relative entropy of entanglement over PPT states.
    Ree,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 6] = [
        Self::Cc,
        Self::Cq,
        Self::Ea,
        Self::Crd,
        Self::Qrd,
        Self::Ree,
    ];

    /// Default primal-to-dual step ratio.
    pub fn default_kappa(self) -> f64 {
        match self {
            Self::Cc | Self::Cq | Self::Ree => 1.0,
            Self::Ea | Self::Crd | Self::Qrd => 10.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Cc => "cc",
            Self::Cq => "cq",
            Self::Ea => "ea",
            Self::Crd => "crd",
            Self::Qrd => "qrd",
            Self::Ree => "ree",
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ProblemKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| crate::Error::InvalidConfig(format!("unknown problem kind `{s}`")))
    }
}

/// Whether the natural objective is maximized or minimized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

impl Sense {
    fn sign(self) -> f64 {
        match self {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        }
    }
}

/// `min_x max_{z in K*} f(x) + <z, A(x) - b>` over a kernel domain.
///
/// `f` is always the minimization form; [`SaddleProblem::report`] maps it back
/// to the natural quantity.
#[derive(Clone)]
pub struct SaddleProblem {
    pub kind: ProblemKind,
    pub objective: Arc<dyn Objective>,
    pub sense: Sense,
    pub domain: Domain,
    pub kernel: KernelKind,
    pub constraints: LinearConstraintSet,
    /// Relative smoothness constant of `f` with respect to the kernel.
    pub smoothness: f64,
    /// Relative strong convexity constant, when known.
    pub strong_convexity: Option<f64>,
    /// Added to the natural objective when reporting.
    pub report_offset: f64,
}

impl fmt::Debug for SaddleProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SaddleProblem")
            .field("kind", &self.kind)
            .field("sense", &self.sense)
            .field("domain", &self.domain)
            .field("kernel", &self.kernel)
            .field("blocks", &self.constraints.blocks.len())
            .field("smoothness", &self.smoothness)
            .finish()
    }
}

impl SaddleProblem {
    pub fn f(&self, x: &Point) -> Result<f64> {
        Ok(self.sense.sign() * self.objective.value(x)?)
    }

    pub fn f_and_grad(&self, x: &Point) -> Result<(f64, Point)> {
        let s = self.sense.sign();
        let (v, g) = self.objective.value_and_gradient(x)?;
        Ok((s * v, g.scale(s)))
    }

    /// Natural value (capacity, rate or relative entropy) from `f`.
    pub fn report(&self, f: f64) -> f64 {
        self.sense.sign() * f + self.report_offset
    }

    /// Natural value at `x`.
    pub fn value(&self, x: &Point) -> Result<f64> {
        Ok(self.objective.value(x)? + self.report_offset)
    }

    /// `f(x) + <z, A(x) - b>`.
    pub fn lagrangian(&self, x: &Point, z: &Dual) -> Result<f64> {
        let fx = self.f(x)?;
        if self.constraints.is_empty() {
            return Ok(fx);
        }
        Ok(fx + z.inner(&self.constraints.residual(x)?))
    }

    pub fn initial_point(&self) -> Point {
        self.domain.initial_point()
    }

    /// Problem with the constraints dropped.
    pub fn unconstrained(&self) -> SaddleProblem {
        SaddleProblem {
            constraints: LinearConstraintSet::empty(),
            ..self.clone()
        }
    }
}
