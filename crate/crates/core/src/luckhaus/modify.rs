use nalgebra::{DMatrix, Dyn, LU};
use rayon::prelude::*;
use serde::Serialize;

use super::prism::{Prisms, Rule};
use super::quadrature::{annulus_energy, sphere_energy, LayerEnergy};
use super::sampling::{AnnulusField, MeshField, MeshSampling};
use crate::manifold::Potential;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModifyOptions {
    /// Smallness threshold: `E_ε(u; ∂B_1) ≤ δ₁²` is required.
    pub delta1: f64,
    /// Radial intervals across the annulus.
    pub layers: usize,
}

impl Default for ModifyOptions {
    fn default() -> Self {
        ModifyOptions {
            delta1: 1e-2,
            layers: 7,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModifyReport {
    pub lambda: f64,
    pub epsilon: f64,
    /// Parts of `E_ε(u; ∂B_1)`.
    pub boundary: LayerEnergy,
    pub boundary_energy: f64,
    /// Parts of `E_ε(φ; B_1 \ B_{1-λ})`.
    pub annulus: LayerEnergy,
    pub annulus_energy: f64,
    /// `∫_{∂B_1} |∇w|²`
    pub w_dirichlet: f64,
    pub w_max_dist: f64,
    /// `max f(φ) / f(u(x/|x|))` over edge prisms, where `f(u) > 1e-12`.
    pub edge_potential_ratio: Option<f64>,
    /// `E_ε(φ; annulus) / (λ E_ε(u; ∂B_1))`
    pub annulus_constant: Option<f64>,
    /// `∫ |∇w|² / E_ε(u; ∂B_1)`
    pub w_constant: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct BoundaryModification {
    pub w: MeshField,
    pub phi: AnnulusField,
    pub report: ModifyReport,
}

/// LU factors of the 5-point Laplacian on the `(s - 1)²` interior nodes of
/// a chart square.
fn laplacian(s: usize) -> LU<f64, Dyn, Dyn> {
    let m = s - 1;
    let mut a = DMatrix::zeros(m * m, m * m);
    for i in 0..m {
        for j in 0..m {
            let r = i * m + j;
            a[(r, r)] = 4.0;
            if i > 0 {
                a[(r, r - m)] = -1.0;
            }
            if i + 1 < m {
                a[(r, r + m)] = -1.0;
            }
            if j > 0 {
                a[(r, r - 1)] = -1.0;
            }
            if j + 1 < m {
                a[(r, r + 1)] = -1.0;
            }
        }
    }
    a.lu()
}

/// Discrete harmonic extension of the edge trace into every face; samples
/// on the skeleton keep their values.
fn harmonic_extension(sampling: &MeshSampling, u: &MeshField) -> Vec<f64> {
    let s = sampling.samples_per_cell();
    let k = u.k();
    let mut out = u.values().to_vec();
    if s < 2 {
        return out;
    }
    let lu = laplacian(s);
    let m = s - 1;
    let faces = sampling.mesh().faces().len();
    let solved: Vec<Vec<(usize, Vec<f64>)>> = (0..faces)
        .into_par_iter()
        .map(|f| {
            let mut rhs = DMatrix::zeros(m * m, k);
            for i in 1..s {
                for j in 1..s {
                    let r = (i - 1) * m + (j - 1);
                    for (di, dj) in [(0, 1), (2, 1), (1, 0), (1, 2)] {
                        let (a, b) = (i + di - 1, j + dj - 1);
                        if a == 0 || a == s || b == 0 || b == s {
                            let v = u.at(sampling.sample(f, a, b));
                            for c in 0..k {
                                rhs[(r, c)] += v[c];
                            }
                        }
                    }
                }
            }
            let x = lu.solve(&rhs).expect("the Dirichlet Laplacian is nonsingular");
            (1..s)
                .flat_map(|i| (1..s).map(move |j| (i, j)))
                .map(|(i, j)| {
                    let r = (i - 1) * m + (j - 1);
                    (sampling.sample(f, i, j), (0..k).map(|c| x[(r, c)]).collect())
                })
                .collect()
        })
        .collect();
    for face in solved {
        for (i, v) in face {
            out[i * k..(i + 1) * k].copy_from_slice(&v);
        }
    }
    out
}

/// Replaces the trace `u` on `∂B_1` by an `N`-valued `w` and builds the
/// annulus map `φ` from `u` (outside) to `w` (inside): harmonic extension of
/// the edge trace into each face, projection onto `N`, radial interpolation
/// over the edges and 0-homogeneous extension over the faces.
pub fn modify_boundary(
    sampling: &MeshSampling,
    u: &MeshField,
    epsilon: f64,
    potential: &Potential,
    options: &ModifyOptions,
) -> Result<BoundaryModification> {
    u.check(sampling)?;
    let k = u.k();
    if k != potential.k() {
        return Err(Error::domain(format!(
            "field has {k} components, potential expects {}",
            potential.k()
        )));
    }
    if options.layers == 0 {
        return Err(Error::domain("need at least one radial interval"));
    }
    let lambda = sampling.lambda();
    if !(epsilon > 0.0 && epsilon <= lambda) {
        return Err(Error::Precondition(format!("need 0 < eps <= lambda, got eps = {epsilon}, lambda = {lambda}")));
    }
    if !(options.delta1 > 0.0) {
        return Err(Error::domain(format!("delta1 = {} must be positive", options.delta1)));
    }
    let boundary = sphere_energy(sampling, u.values(), k, Some(potential));
    let boundary_energy = boundary.total(epsilon);
    if boundary_energy > options.delta1 * options.delta1 {
        return Err(Error::Precondition(format!(
            "boundary energy {boundary_energy:.4e} exceeds delta1^2 = {:.4e}",
            options.delta1 * options.delta1
        )));
    }

    let ubar = harmonic_extension(sampling, u);
    let tube = potential.tube_radius();
    let projected: Vec<Result<Vec<f64>>> = (0..sampling.len())
        .into_par_iter()
        .map(|i| {
            let z = crate::manifold::TargetPoint::new(&ubar[i * k..(i + 1) * k]);
            let face = sampling.owner(i).0;
            let d = potential.dist_to_n(&z);
            if d >= tube {
                return Err(Error::SmallnessViolation {
                    face,
                    reason: format!("harmonic extension leaves the tube (dist {d:.3e} >= {tube:.3e})"),
                });
            }
            potential
                .project_to_n(&z)
                .map(|p| p.as_slice().to_vec())
                .map_err(|e| Error::SmallnessViolation {
                    face,
                    reason: e.to_string(),
                })
        })
        .collect();
    let mut wv = Vec::with_capacity(sampling.len() * k);
    for r in projected {
        wv.extend(r?);
    }
    let w = MeshField::raw(sampling.mesh().nu(), sampling.samples_per_cell(), k, wv);

    let prisms = Prisms {
        sampling,
        potential,
        k,
        outer: u.values(),
        projected: w.values(),
        inner: w.values(),
        rule: Rule::Linear,
    };
    let layers = options.layers;
    let values = prisms.fill(layers, |i, e| Error::SmallnessViolation {
        face: sampling.owner(i).0,
        reason: e.to_string(),
    })?;
    let (annulus, _) = annulus_energy(sampling, &values, k, layers, lambda, potential, layers);
    let annulus_total = annulus.total(epsilon);
    let w_dirichlet = sphere_energy(sampling, w.values(), k, None).dirichlet;
    let w_max_dist = (0..sampling.len())
        .map(|i| potential.dist_to_n(&w.point(i)))
        .fold(0.0, f64::max);

    let n = sampling.len();
    let mut ratio: Option<f64> = None;
    for i in (0..n).filter(|&i| sampling.on_skeleton(i)) {
        let fu = potential.value(u.at(i));
        // below this, f is rounding noise of the normalization constant
        if fu > 1e-12 {
            for t in 0..=layers {
                let o = (t * n + i) * k;
                let r = potential.value(&values[o..o + k]) / fu;
                ratio = Some(ratio.map_or(r, |x| x.max(r)));
            }
        }
    }
    let over = |num: f64, den: f64| (den > 0.0).then(|| num / den);
    let report = ModifyReport {
        lambda,
        epsilon,
        boundary,
        boundary_energy,
        annulus,
        annulus_energy: annulus_total,
        w_dirichlet,
        w_max_dist,
        edge_potential_ratio: ratio,
        annulus_constant: over(annulus_total, lambda * boundary_energy),
        w_constant: over(w_dirichlet, boundary_energy),
    };
    Ok(BoundaryModification {
        phi: AnnulusField::raw(sampling.mesh().nu(), sampling.samples_per_cell(), layers, k, values),
        w,
        report,
    })
}
