use std::io::Write;

use serde::{Deserialize, Serialize};

use super::extension::{luckhaus_interpolant, project_mesh_field, InterpolantOptions, InterpolantReport};
use super::mesh::MeshQuality;
use super::modify::{modify_boundary, ModifyOptions, ModifyReport};
use super::sampling::{MeshField, MeshSampling};
use crate::manifold::{q_from_director, Potential, PotentialKind, TargetPoint};
use crate::{Error, Result};

/// Dyadic scaling study of both annulus constructions on smooth data near a
/// constant `z⋆ ∈ N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScalingConfig {
    /// Mesh levels ν; `λ = 2^-ν`.
    pub levels: Vec<u32>,
    pub samples_per_cell: usize,
    pub layers: usize,
    /// Defaults to the smallest `λ`, so that `ε ≤ λ` at every level.
    pub epsilon: Option<f64>,
    /// Size `δ` of the tangential perturbation of `z⋆`.
    pub amplitude: f64,
    /// Size of the normal offset of `u` from `v⋆` in the interpolant data.
    pub offset: f64,
    pub delta1: f64,
    pub eta: f64,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        ScalingConfig {
            levels: vec![2, 3, 4],
            samples_per_cell: 7,
            layers: 7,
            epsilon: None,
            amplitude: 1e-2,
            offset: 5e-5,
            delta1: 0.1,
            eta: 1e-2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingRow {
    pub nu: u32,
    pub lambda: f64,
    pub quality: MeshQuality,
    pub modify: ModifyReport,
    pub interpolant: InterpolantReport,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingStudy {
    pub rows: Vec<ScalingRow>,
    /// Largest over smallest value of each measured constant across rows.
    pub annulus_spread: Option<f64>,
    pub w_spread: Option<f64>,
    pub gradient_spread: Option<f64>,
    pub potential_spread: Option<f64>,
    /// Worst `dist(w, N)` and worst `f(φ)` on geodesic half-layers.
    pub w_max_dist: f64,
    pub inner_half_max_f: f64,
}

/// `z⋆` and an orthonormal pair of tangent vectors of `N` there.
fn base_point(potential: &Potential) -> Result<(TargetPoint, TargetPoint, TargetPoint)> {
    match potential.kind() {
        PotentialKind::GinzburgLandau => Ok((
            TargetPoint::new(&[0.0, 0.0, 1.0]),
            TargetPoint::new(&[1.0, 0.0, 0.0]),
            TargetPoint::new(&[0.0, 1.0, 0.0]),
        )),
        PotentialKind::LandauDeGennes { .. } => {
            let z = q_from_director([0.0, 0.0, 1.0], potential.s_star())?;
            let sym = |i: usize, j: usize| {
                let mut m = nalgebra::Matrix3::zeros();
                m[(i, j)] = 1.0;
                m[(j, i)] = 1.0;
                let t = TargetPoint::from_matrix(&m);
                (1.0 / t.norm()) * t
            };
            Ok((z, sym(0, 2), sym(1, 2)))
        }
    }
}

/// `z⋆ + δ (a(x) T₁ + b(x) T₂)` with `a = x₁x₂ + x₃`, `b = x₂ - x₁x₃`.
pub fn perturbed_trace(sampling: &MeshSampling, potential: &Potential, amplitude: f64) -> Result<MeshField> {
    let (z, t1, t2) = base_point(potential)?;
    MeshField::from_fn(sampling, potential.k(), |x| {
        let a = x[0] * x[1] + x[2];
        let b = x[1] - x[0] * x[2];
        z + amplitude * (a * t1 + b * t2)
    })
}

/// `v⋆ = π_N(perturbed trace)` and `u = (1 + δ₂ (x₁ + x₂x₃)) v⋆`.
pub fn perturbed_pair(
    sampling: &MeshSampling,
    potential: &Potential,
    amplitude: f64,
    offset: f64,
) -> Result<(MeshField, MeshField)> {
    let v = project_mesh_field(sampling, &perturbed_trace(sampling, potential, amplitude)?, potential)?;
    let k = potential.k();
    let mut vals = Vec::with_capacity(v.values().len());
    for (i, x) in sampling.points().iter().enumerate() {
        let g = 1.0 + offset * (x[0] + x[1] * x[2]);
        vals.extend(v.at(i).iter().map(|c| g * c));
    }
    Ok((MeshField::from_values(sampling, k, vals)?, v))
}

fn spread(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let v: Option<Vec<f64>> = values.collect();
    let v = v?;
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(0.0, f64::max);
    (lo > 0.0).then(|| hi / lo)
}

pub fn scaling_study(potential: &Potential, config: &ScalingConfig) -> Result<ScalingStudy> {
    if config.levels.is_empty() {
        return Err(Error::domain("scaling study needs at least one level"));
    }
    let finest = *config.levels.iter().max().expect("nonempty");
    let epsilon = config.epsilon.unwrap_or((-(finest as f64)).exp2());
    let mut rows = Vec::with_capacity(config.levels.len());
    for &nu in &config.levels {
        let sampling = MeshSampling::new(nu, config.samples_per_cell)?;
        let u = perturbed_trace(&sampling, potential, config.amplitude)?;
        let modify = modify_boundary(
            &sampling,
            &u,
            epsilon,
            potential,
            &ModifyOptions {
                delta1: config.delta1,
                layers: config.layers,
            },
        )?;
        let (u2, v) = perturbed_pair(&sampling, potential, config.amplitude, config.offset)?;
        let interp = luckhaus_interpolant(
            &sampling,
            &u2,
            &v,
            epsilon,
            potential,
            &InterpolantOptions {
                eta: config.eta,
                layers: config.layers,
            },
        )?;
        rows.push(ScalingRow {
            nu,
            lambda: sampling.lambda(),
            quality: sampling.mesh().quality(),
            modify: modify.report,
            interpolant: interp.report,
        });
    }
    Ok(ScalingStudy {
        annulus_spread: spread(rows.iter().map(|r| r.modify.annulus_constant)),
        w_spread: spread(rows.iter().map(|r| r.modify.w_constant)),
        gradient_spread: spread(rows.iter().map(|r| r.interpolant.gradient_constant)),
        potential_spread: spread(rows.iter().map(|r| r.interpolant.potential_constant)),
        w_max_dist: rows.iter().map(|r| r.modify.w_max_dist).fold(0.0, f64::max),
        inner_half_max_f: rows.iter().map(|r| r.interpolant.inner_half_max_f).fold(0.0, f64::max),
        rows,
    })
}

pub const SCALING_COLUMNS: &str = "nu,lambda,epsilon,min_area_ratio,max_area_ratio,\
boundary_energy,annulus_energy,w_dirichlet,w_max_dist,annulus_constant,w_constant,\
edge_potential_ratio,u_dirichlet,u_potential,v_dirichlet,l2_distance_sq,\
interpolant_dirichlet,interpolant_potential,inner_half_max_f,gradient_constant,potential_constant";

pub fn write_scaling_csv(study: &ScalingStudy, mut w: impl Write) -> std::io::Result<()> {
    let opt = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
    writeln!(w, "{SCALING_COLUMNS}")?;
    for r in &study.rows {
        let (m, i) = (&r.modify, &r.interpolant);
        writeln!(
            w,
            "{},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{},{},{},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{},{}",
            r.nu,
            r.lambda,
            m.epsilon,
            r.quality.min_area_ratio,
            r.quality.max_area_ratio,
            m.boundary_energy,
            m.annulus_energy,
            m.w_dirichlet,
            m.w_max_dist,
            opt(m.annulus_constant),
            opt(m.w_constant),
            opt(m.edge_potential_ratio),
            i.boundary_u.dirichlet,
            i.boundary_u.potential,
            i.v_dirichlet,
            i.l2_distance_sq,
            i.annulus.dirichlet,
            i.annulus.potential,
            i.inner_half_max_f,
            opt(i.gradient_constant),
            opt(i.potential_constant),
        )?;
    }
    Ok(())
}
