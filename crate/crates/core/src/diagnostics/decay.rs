use serde::Serialize;

use super::boundary::{boundary_data_norm, BoundaryDataNorm};
use crate::elastic::ElasticModel;
use crate::field::{check_resolvable, energy, Field, Mask};
use crate::manifold::Potential;
use crate::{Error, Result};

/// Least-squares fit of `log y = intercept + alpha log x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PowerFit {
    pub alpha: f64,
    pub intercept: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
}

/// `None` with fewer than two points or when some `y` is not positive.
pub fn fit_power_law(x: &[f64], y: &[f64]) -> Option<PowerFit> {
    if x.len() != y.len() || x.len() < 2 || y.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
        return None;
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let alpha = sxy / sxx;
    let intercept = my - alpha * mx;
    let ss: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(a, b)| (b - intercept - alpha * a).powi(2))
        .sum();
    Some(PowerFit {
        alpha,
        intercept,
        residual: (ss / n).sqrt(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DecayRow {
    pub radius: f64,
    /// `r^-1 E_ε(B_r)`
    pub energy: f64,
    /// `r^-1 ∫_{B_r} |∇u|^2`
    pub dirichlet: f64,
    /// `r^-1 E_ε(B_r) <= δ^2`
    pub below_delta: bool,
}

/// Renormalized energies on concentric balls (or half-balls) about one centre.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayReport {
    pub center: [f64; 3],
    pub half_balls: bool,
    pub delta: f64,
    pub rows: Vec<DecayRow>,
    /// Requested radii that were unresolvable or left the domain.
    pub skipped: Vec<f64>,
    /// Exponent of the Dirichlet part; `None` when it vanishes somewhere.
    pub fit: Option<PowerFit>,
    /// `N(u_b; B'_r)` per row, for boundary profiles.
    pub data_norms: Option<Vec<BoundaryDataNorm>>,
}

impl DecayReport {
    pub fn radii(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.radius).collect()
    }

    pub fn energies(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.energy).collect()
    }

    pub fn dirichlet(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.dirichlet).collect()
    }

    pub fn alpha(&self) -> Option<f64> {
        self.fit.map(|f| f.alpha)
    }
}

/// Decay of `r^-1 E_ε(B_r(center))` over `radii`. Radii below `4h` or whose
/// ball leaves the domain are skipped; `α` is fitted to the Dirichlet part.
pub fn decay_profile(
    field: &Field,
    eps: f64,
    elastic: &ElasticModel,
    potential: &Potential,
    center: [f64; 3],
    radii: &[f64],
    delta: f64,
) -> Result<DecayReport> {
    profile(field, eps, elastic, potential, center, radii, delta, false)
}

/// [`decay_profile`] on half-balls `B_r^+(x0)` about a point of the flat
/// boundary face, together with `N(u_b; B'_r)` for the boundary trace.
pub fn boundary_decay_profile(
    field: &Field,
    eps: f64,
    elastic: &ElasticModel,
    potential: &Potential,
    x0: [f64; 3],
    radii: &[f64],
    delta: f64,
) -> Result<DecayReport> {
    let mut report = profile(field, eps, elastic, potential, x0, radii, delta, true)?;
    report.data_norms = Some(boundary_data_norm(field, x0, &report.radii())?);
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn profile(
    field: &Field,
    eps: f64,
    elastic: &ElasticModel,
    potential: &Potential,
    center: [f64; 3],
    radii: &[f64],
    delta: f64,
    half: bool,
) -> Result<DecayReport> {
    if radii.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::domain("radii must be strictly increasing"));
    }
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::domain(format!("smallness threshold {delta} must be >= 0")));
    }
    let grid = field.grid();
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for &r in radii {
        if check_resolvable(field, r).is_err() || !grid.ball_fits(center, r, half) {
            skipped.push(r);
            continue;
        }
        let mask = if half {
            Mask::half_ball(grid, center, r)?
        } else {
            Mask::ball(grid, center, r)?
        };
        let e = energy(field, eps, elastic, potential, &mask)?;
        rows.push(DecayRow {
            radius: r,
            energy: e.total / r,
            dirichlet: e.dirichlet / r,
            below_delta: e.total / r <= delta * delta,
        });
    }
    if rows.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "{} of {} radii are resolvable inside the domain; need 2",
            rows.len(),
            radii.len()
        )));
    }
    let x: Vec<f64> = rows.iter().map(|r| r.radius).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.dirichlet).collect();
    Ok(DecayReport {
        center,
        half_balls: half,
        delta,
        fit: fit_power_law(&x, &y),
        rows,
        skipped,
        data_norms: None,
    })
}

/// `θ^{-1} E_ε(B_{θ r0}) / E_ε(B_{r0})`, the scale-invariant large-scale
/// decay ratio.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LargeScaleRatio {
    pub theta: f64,
    pub r0: f64,
    pub inner_energy: f64,
    pub outer_energy: f64,
    /// `None` when the outer energy is below `1e-14` (vacuum region).
    pub ratio: Option<f64>,
}

/// Outer energies below this are treated as vacuum and leave the ratio undefined.
pub const VACUUM_ENERGY: f64 = 1e-14;

#[allow(clippy::too_many_arguments)]
pub fn large_scale_ratio(
    field: &Field,
    eps: f64,
    elastic: &ElasticModel,
    potential: &Potential,
    center: [f64; 3],
    r0: f64,
    theta: f64,
) -> Result<LargeScaleRatio> {
    if !(theta > 0.0 && theta <= 0.5) {
        return Err(Error::domain(format!("theta = {theta} outside (0, 1/2]")));
    }
    let grid = field.grid();
    let inner_r = theta * r0;
    check_resolvable(field, inner_r)?;
    if !grid.ball_fits(center, r0, false) {
        return Err(Error::geometry(format!(
            "ball of radius {r0} at {center:?} leaves the domain"
        )));
    }
    let outer = energy(field, eps, elastic, potential, &Mask::ball(grid, center, r0)?)?.total;
    let inner = energy(field, eps, elastic, potential, &Mask::ball(grid, center, inner_r)?)?.total;
    Ok(LargeScaleRatio {
        theta,
        r0,
        inner_energy: inner,
        outer_energy: outer,
        ratio: (outer >= VACUUM_ENERGY).then(|| inner / (theta * outer)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_fit_recovers_exponent() {
        let x = [1.0, 2.0, 4.0, 8.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(0.7)).collect();
        let f = fit_power_law(&x, &y).unwrap();
        assert!((f.alpha - 0.7).abs() < 1e-12);
        assert!((f.intercept - 3f64.ln()).abs() < 1e-12);
        assert!(f.residual < 1e-12);
    }

    #[test]
    fn power_fit_needs_positive_data() {
        assert!(fit_power_law(&[1.0, 2.0], &[0.0, 1.0]).is_none());
        assert!(fit_power_law(&[1.0], &[1.0]).is_none());
    }
}
