use rayon::prelude::*;
use serde::Serialize;

use super::prism::{Prisms, Rule};
use super::quadrature::{annulus_energy, sphere_energy, sphere_l2_distance_sq, LayerEnergy};
use super::sampling::{AnnulusField, MeshField, MeshSampling};
use crate::manifold::{Potential, TargetPoint};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InterpolantOptions {
    /// Closeness threshold: `∫ |u - v⋆|² ≤ η² λ²` is required.
    pub eta: f64,
    pub layers: usize,
}

impl Default for InterpolantOptions {
    fn default() -> Self {
        InterpolantOptions {
            eta: 1e-2,
            layers: 7,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InterpolantReport {
    pub lambda: f64,
    pub epsilon: f64,
    /// `∫_{∂B_1} |∇u|²` and `∫_{∂B_1} f(u)`.
    pub boundary_u: LayerEnergy,
    /// `∫_{∂B_1} |∇v⋆|²`
    pub v_dirichlet: f64,
    /// `∫_{∂B_1} |u - v⋆|²`
    pub l2_distance_sq: f64,
    pub annulus: LayerEnergy,
    /// Cells at depth below `1/2` and the rest.
    pub outer_half: LayerEnergy,
    pub inner_half: LayerEnergy,
    /// `max f(φ)` over samples strictly inside the geodesic half-layer.
    pub inner_half_max_f: f64,
    pub annulus_energy: f64,
    /// `∫|∇φ|² / (λ (∫|∇u|² + ∫|∇v⋆|² + λ⁻² ∫|u - v⋆|²))`
    pub gradient_constant: Option<f64>,
    /// `∫ f(φ) / (λ ∫ f(u))`
    pub potential_constant: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct LuckhausInterpolant {
    pub phi: AnnulusField,
    pub report: InterpolantReport,
}

/// Annulus map from a trace `u` on `∂B_1` to an `N`-valued `v⋆` on
/// `∂B_{1-λ}`: straight to `π_N(u)` over the outer half-layer, then along
/// geodesics of `N` to `v⋆`, extended 0-homogeneously over face prisms.
pub fn luckhaus_interpolant(
    sampling: &MeshSampling,
    u: &MeshField,
    v_star: &MeshField,
    epsilon: f64,
    potential: &Potential,
    options: &InterpolantOptions,
) -> Result<LuckhausInterpolant> {
    u.check(sampling)?;
    v_star.check(sampling)?;
    let k = potential.k();
    if u.k() != k || v_star.k() != k {
        return Err(Error::domain(format!("fields must have {k} components")));
    }
    if !(epsilon > 0.0) {
        return Err(Error::domain(format!("eps = {epsilon} must be positive")));
    }
    if !(options.eta > 0.0) || options.layers == 0 {
        return Err(Error::domain("eta must be positive and layers at least 1"));
    }
    let n = sampling.len();
    if let Some(i) = (0..n).find(|&i| potential.dist_to_n(&v_star.point(i)) > 1e-8) {
        return Err(Error::domain(format!("v_star is off the vacuum manifold at sample {i}")));
    }
    let lambda = sampling.lambda();
    let boundary_u = sphere_energy(sampling, u.values(), k, Some(potential));
    let v_dirichlet = sphere_energy(sampling, v_star.values(), k, None).dirichlet;
    if boundary_u.dirichlet + v_dirichlet > 1.0 {
        return Err(Error::Precondition(format!(
            "boundary Dirichlet energies sum to {:.4e} > 1",
            boundary_u.dirichlet + v_dirichlet
        )));
    }
    let l2 = sphere_l2_distance_sq(sampling, u.values(), v_star.values(), k);
    let bound = (options.eta * lambda).powi(2);
    if l2 > bound {
        return Err(Error::Precondition(format!(
            "∫|u - v_star|^2 = {l2:.4e} exceeds (eta lambda)^2 = {bound:.4e}"
        )));
    }

    let projected: Vec<Result<Vec<f64>>> = (0..n)
        .into_par_iter()
        .map(|i| {
            if !sampling.on_skeleton(i) {
                return Ok(vec![0.0; k]);
            }
            potential
                .project_to_n(&u.point(i))
                .map(|p| p.as_slice().to_vec())
                .map_err(|e| Error::Precondition(format!("trace not projectable at sample {i}: {e}")))
        })
        .collect();
    let mut pv = Vec::with_capacity(n * k);
    for r in projected {
        pv.extend(r?);
    }
    let prisms = Prisms {
        sampling,
        potential,
        k,
        outer: u.values(),
        projected: &pv,
        inner: v_star.values(),
        rule: Rule::TwoStage,
    };
    let layers = options.layers;
    let values = prisms.fill(layers, |i, e| Error::Construction {
        sample: i,
        reason: e.to_string(),
    })?;
    let split = layers.div_ceil(2);
    let (outer_half, inner_half) = annulus_energy(sampling, &values, k, layers, lambda, potential, split);
    let annulus = LayerEnergy {
        dirichlet: outer_half.dirichlet + inner_half.dirichlet,
        potential: outer_half.potential + inner_half.potential,
    };
    let inner_half_max_f = (0..=layers)
        .filter(|&t| 2 * t > layers)
        .flat_map(|t| (0..n).map(move |i| (t * n + i) * k))
        .map(|o| potential.value(&values[o..o + k]))
        .fold(0.0, f64::max);
    let over = |num: f64, den: f64| (den > 0.0).then(|| num / den);
    let report = InterpolantReport {
        lambda,
        epsilon,
        boundary_u,
        v_dirichlet,
        l2_distance_sq: l2,
        annulus,
        outer_half,
        inner_half,
        inner_half_max_f,
        annulus_energy: annulus.total(epsilon),
        gradient_constant: over(
            annulus.dirichlet,
            lambda * (boundary_u.dirichlet + v_dirichlet + l2 / (lambda * lambda)),
        ),
        potential_constant: over(annulus.potential, lambda * boundary_u.potential),
    };
    Ok(LuckhausInterpolant {
        phi: AnnulusField::raw(sampling.mesh().nu(), sampling.samples_per_cell(), layers, k, values),
        report,
    })
}

/// `π_N` of a mesh field, sample by sample.
pub fn project_mesh_field(sampling: &MeshSampling, u: &MeshField, potential: &Potential) -> Result<MeshField> {
    u.check(sampling)?;
    let mut out = Vec::with_capacity(u.values().len());
    for i in 0..u.len() {
        let p: TargetPoint = potential.project_to_n(&u.point(i))?;
        out.extend_from_slice(p.as_slice());
    }
    MeshField::from_values(sampling, u.k(), out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_constant_endpoints_give_a_constant_map() {
        let samp = MeshSampling::new(1, 3).unwrap();
        let pot = Potential::ginzburg_landau();
        let z = TargetPoint::new(&[0.6, 0.0, 0.8]);
        let u = MeshField::from_fn(&samp, 3, |_| z).unwrap();
        let out = luckhaus_interpolant(&samp, &u, &u, 0.1, &pot, &InterpolantOptions::default()).unwrap();
        assert!(out.report.annulus.potential < 1e-28);
        assert!(out.report.annulus.dirichlet < 1e-24);
        for v in out.phi.values().chunks(3) {
            assert!(TargetPoint::new(v).distance(&z) < 1e-14);
        }
    }

    #[test]
    fn far_data_is_rejected() {
        let samp = MeshSampling::new(2, 3).unwrap();
        let pot = Potential::ginzburg_landau();
        let u = MeshField::from_fn(&samp, 3, |_| TargetPoint::new(&[0.0, 0.0, 1.1])).unwrap();
        let v = MeshField::from_fn(&samp, 3, |_| TargetPoint::new(&[0.0, 0.0, 1.0])).unwrap();
        let err = luckhaus_interpolant(&samp, &u, &v, 0.1, &pot, &InterpolantOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }
}
