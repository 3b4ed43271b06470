//! Per-iteration run logs.

use std::fmt::Write as _;
use std::io;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::point::{Dual, Point};

use super::steps::ergodic_averages;

pub const CSV_HEADER: &str = "iter,objective,stop_metric,tau,gamma,theta,backtracks,violation";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iter: usize,
    /// Natural objective at the new iterate.
    pub objective: f64,
    /// Minimization-form objective at the new iterate.
    #[serde(skip)]
    pub f: f64,
    pub stop_metric: f64,
    pub tau: f64,
    pub gamma: f64,
    pub theta: f64,
    pub backtracks: usize,
    pub violation: f64,
}

/// Iterates kept when `record_iterates` is set.
#[derive(Debug, Clone, Default)]
pub struct IterateLog {
    /// `x^0, x^1, ...`
    pub primal: Vec<Point>,
    /// `z^0, z^1, ...`
    pub dual: Vec<Dual>,
    /// `zbar^1, zbar^2, ...`
    pub extrapolated: Vec<Dual>,
}

#[derive(Debug, Clone, Default)]
pub struct RunTrace {
    pub records: Vec<IterationRecord>,
    pub iterates: Option<IterateLog>,
}

impl RunTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last(&self) -> Option<&IterationRecord> {
        self.records.last()
    }

    /// Smallest primal step used.
    pub fn min_tau(&self) -> f64 {
        self.records
            .iter()
            .map(|r| r.tau)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn total_backtracks(&self) -> usize {
        self.records.iter().map(|r| r.backtracks).sum()
    }

    /// Step-weighted averages of the first `k` new iterates `x^1..x^k` and `zbar^1..zbar^k`.
    pub fn ergodic_averages_upto(&self, k: usize) -> Option<Result<(Point, Dual)>> {
        let log = self.iterates.as_ref()?;
        let k = k.min(self.records.len());
        let weights: Vec<f64> = self.records[..k].iter().map(|r| r.tau).collect();
        Some(ergodic_averages(
            &log.primal[1..=k],
            &log.extrapolated[..k],
            &weights,
        ))
    }

    pub fn ergodic_averages(&self) -> Option<Result<(Point, Dual)>> {
        self.ergodic_averages_upto(self.records.len())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.records.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{:.16e}",
                r.iter,
                r.objective,
                r.stop_metric,
                r.tau,
                r.gamma,
                r.theta,
                r.backtracks,
                r.violation
            );
        }
        out
    }

    pub fn write_csv(&self, mut w: impl io::Write) -> io::Result<()> {
        w.write_all(self.to_csv().as_bytes())
    }
}
