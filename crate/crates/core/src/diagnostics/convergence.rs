use serde::Serialize;

use super::defects::detect_defects;
use crate::field::{linf_distance, Mask};
use crate::manifold::Potential;
use crate::solver::StageRecord;
use crate::{reduce, Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub stage: usize,
    pub epsilon: f64,
    /// H¹ distance to the previous stage over the domain.
    pub h1_increment: Option<f64>,
    /// L∞ distance to the previous stage outside the exclusion balls.
    pub linf_increment: Option<f64>,
    /// L∞ distance to the final stage outside the exclusion balls.
    pub linf_to_final: f64,
    /// `max |u|` over the domain.
    pub sup_norm: f64,
    pub max_dist_to_n: f64,
    pub energy_total: f64,
    /// `ε^-2 ∫ f(u)`
    pub energy_potential: f64,
    pub defect_components: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    pub exclusion_radius: f64,
    /// Defect centres from every stage; balls around them are excluded.
    pub exclusion_centers: Vec<[f64; 3]>,
    pub tau: f64,
    /// User bound `M` on `‖u_ε‖_∞`.
    pub sup_bound: Option<f64>,
    pub sup_bound_holds: Option<bool>,
}

/// Convergence table of an ε-sweep: increments, distances to the final stage
/// away from defects, and the sup-norm column.
pub fn convergence_report(
    stages: &[StageRecord],
    potential: &Potential,
    exclusion_radius: f64,
    tau: Option<f64>,
    sup_bound: Option<f64>,
) -> Result<ConvergenceReport> {
    if stages.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "convergence needs at least 2 stages, got {}",
            stages.len()
        )));
    }
    if !(exclusion_radius >= 0.0) {
        return Err(Error::domain(format!("exclusion radius {exclusion_radius} must be >= 0")));
    }
    let grid = stages[0].field.grid();
    let defects = stages
        .iter()
        .map(|s| detect_defects(&s.field, potential, tau))
        .collect::<Result<Vec<_>>>()?;
    let tau = defects[0].tau;
    let centers: Vec<[f64; 3]> = defects.iter().flat_map(|d| d.centers()).collect();
    let domain = Mask::domain(grid)?;
    let away = domain.excluding_balls(grid, &centers, exclusion_radius);
    let last = &stages[stages.len() - 1].field;
    let entries = domain.entries();
    let mut rows = Vec::with_capacity(stages.len());
    for (j, s) in stages.iter().enumerate() {
        let linf_increment = match j {
            0 => None,
            _ => Some(linf_distance(&s.field, &stages[j - 1].field, &away)?),
        };
        rows.push(ConvergenceRow {
            stage: s.stage,
            epsilon: s.epsilon,
            h1_increment: s.h1_increment.map(|d| d.total),
            linf_increment,
            linf_to_final: linf_distance(&s.field, last, &away)?,
            sup_norm: reduce::max(entries.len(), |e| s.field.point(entries[e].0).norm()),
            max_dist_to_n: s.max_dist_to_n,
            energy_total: s.energy.total,
            energy_potential: s.energy.potential / (s.epsilon * s.epsilon),
            defect_components: defects[j].components.len(),
        });
    }
    let sup_bound_holds = sup_bound.map(|m| rows.iter().all(|r| r.sup_norm <= m));
    Ok(ConvergenceReport {
        rows,
        exclusion_radius,
        exclusion_centers: centers,
        tau,
        sup_bound,
        sup_bound_holds,
    })
}
