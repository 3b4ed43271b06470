//! JSON run reports and the on-disk run configuration.

use serde::{Deserialize, Serialize};

use infoprox::factories::InstanceSpec;
use infoprox::problems::ProblemKind;
use infoprox::solvers::{Solution, SolverConfig, Termination};

/// `{"problem": ..., "data": {...}, "solver": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub instance: InstanceSpec,
    #[serde(default)]
    pub solver: SolverConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    Nats,
    Bits,
}

impl Units {
    pub fn scale(self) -> f64 {
        match self {
            Units::Nats => 1.0,
            Units::Bits => std::f64::consts::LOG2_E,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub problem: ProblemKind,
    pub n: usize,
    pub m: usize,
    pub l: usize,
    /// Value at the last iterate.
    pub value: f64,
    /// Value at the ergodic average.
    pub value_avg: f64,
    pub units: Units,
    pub iterations: usize,
    pub termination: Termination,
    /// Absent when no iteration ran.
    pub stop_metric: Option<f64>,
    pub violations: Vec<f64>,
    pub seconds: f64,
    pub seed: Option<u64>,
    pub config: SolverConfig,
}

impl RunReport {
    pub fn new(config: &RunConfig, solution: &Solution, seconds: f64, units: Units) -> Self {
        let (n, m, l) = config.instance.dims();
        Self {
            problem: config.instance.kind(),
            n,
            m,
            l,
            value: solution.objective * units.scale(),
            value_avg: solution.objective_avg * units.scale(),
            units,
            iterations: solution.iterations,
            termination: solution.termination,
            stop_metric: solution
                .stop_metric
                .is_finite()
                .then_some(solution.stop_metric),
            violations: solution.violations.clone(),
            seconds,
            seed: config.instance.seed,
            config: config.solver.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use infoprox::factories::{random_instance, Dims};
    use infoprox::solvers::solve;

    #[test]
    fn report_and_config_round_trip() {
        for kind in ProblemKind::ALL {
            let dims = match kind {
                ProblemKind::Ree | ProblemKind::Qrd => Dims::new(2, 2, 0),
                _ => Dims::new(3, 3, 1),
            };
            let config = RunConfig {
                instance: random_instance(kind, dims, 9).unwrap(),
                solver: Default::default(),
            };
            let json = serde_json::to_string(&config).unwrap();
            assert_eq!(serde_json::from_str::<RunConfig>(&json).unwrap(), config);

            let (solution, _) = solve(&config.instance.build().unwrap(), &config.solver).unwrap();
            let report = RunReport::new(&config, &solution, 0.25, Units::Nats);
            let json = serde_json::to_string(&report).unwrap();
            assert_eq!(serde_json::from_str::<RunReport>(&json).unwrap(), report);
        }
    }
}
