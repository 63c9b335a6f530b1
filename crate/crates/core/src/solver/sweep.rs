use serde::{Deserialize, Serialize};

use super::anchoring::Anchoring;
use super::minimize::{minimize, IterRecord, MinimizeConfig};
use crate::elastic::ElasticModel;
use crate::field::{energy, h1_distance, EnergyBreakdown, Field, H1Distance, Mask};
use crate::manifold::Potential;
use crate::{reduce, Error, Result};

/// Geometric schedule `ε_j = epsilon0 · ratio^j`, `j < count`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub epsilon0: f64,
    pub ratio: f64,
    pub count: usize,
    #[serde(default = "yes")]
    pub warm_start: bool,
}

fn yes() -> bool {
    true
}

impl SweepConfig {
    pub fn schedule(&self) -> Result<Vec<f64>> {
        if !(self.epsilon0 > 0.0 && self.epsilon0.is_finite()) {
            return Err(Error::domain(format!("epsilon0 = {} must be positive", self.epsilon0)));
        }
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return Err(Error::domain(format!("sweep ratio {} outside (0, 1)", self.ratio)));
        }
        if self.count == 0 {
            return Err(Error::domain("sweep needs at least one stage"));
        }
        Ok((0..self.count)
            .map(|j| self.epsilon0 * self.ratio.powi(j as i32))
            .collect())
    }
}

#[derive(Clone, Debug)]
pub struct StageRecord {
    pub stage: usize,
    pub epsilon: f64,
    pub field: Field,
    /// Energy over the physical domain.
    pub energy: EnergyBreakdown,
    pub max_dist_to_n: f64,
    /// H¹ distance to the previous stage over the domain.
    pub h1_increment: Option<H1Distance>,
    pub converged: bool,
    pub grad_tol: f64,
    pub log: Vec<IterRecord>,
}

/// Runs [`minimize`] along the schedule, warm-starting each stage from the
/// previous minimizer when enabled.
pub fn epsilon_sweep(
    init: &Field,
    sweep: &SweepConfig,
    base: &MinimizeConfig,
    elastic: &ElasticModel,
    potential: &Potential,
    anchoring: &Anchoring,
) -> Result<Vec<StageRecord>> {
    let schedule = sweep.schedule()?;
    let mask = Mask::domain(init.grid())?;
    let mut out: Vec<StageRecord> = Vec::with_capacity(schedule.len());
    for (stage, &eps) in schedule.iter().enumerate() {
        let wrap = |e: Error| Error::Stage {
            stage,
            epsilon: eps,
            source: Box::new(e),
        };
        let start = match (sweep.warm_start, out.last()) {
            (true, Some(prev)) => &prev.field,
            _ => init,
        };
        let config = MinimizeConfig {
            epsilon: eps,
            ..base.clone()
        };
        let res = minimize(start, &config, elastic, potential, anchoring).map_err(wrap)?;
        let e = energy(&res.field, eps, elastic, potential, &mask).map_err(wrap)?;
        let entries = mask.entries();
        let max_dist = reduce::max(entries.len(), |i| {
            potential.dist_to_n(&res.field.point(entries[i].0))
        });
        let h1_increment = match out.last() {
            Some(prev) => Some(h1_distance(&res.field, &prev.field, &mask).map_err(wrap)?),
            None => None,
        };
        out.push(StageRecord {
            stage,
            epsilon: eps,
            field: res.field,
            energy: e,
            max_dist_to_n: max_dist,
            h1_increment,
            converged: res.converged,
            grad_tol: res.grad_tol,
            log: res.log,
        });
    }
    Ok(out)
}
