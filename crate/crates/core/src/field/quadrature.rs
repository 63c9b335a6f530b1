use serde::Serialize;

use super::mask::Mask;
use super::grid::Grid;
use super::sampled::{node_gradient, Field};
use crate::elastic::{check_model, ElasticModel};
use crate::manifold::{Potential, MAX_K};
use crate::{reduce, Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct EnergyBreakdown {
    /// `∫ W(x, ∇u)`
    pub elastic: f64,
    /// `∫ f(u)`, without the `ε^-2` factor.
    pub potential: f64,
    /// `∫ |∇u|^2`
    pub dirichlet: f64,
    /// `elastic + ε^-2 potential`
    pub total: f64,
}

impl EnergyBreakdown {
    pub fn scaled(self, c: f64) -> Self {
        EnergyBreakdown {
            elastic: c * self.elastic,
            potential: c * self.potential,
            dirichlet: c * self.dirichlet,
            total: c * self.total,
        }
    }
}

pub(crate) fn check_inputs(
    field: &Field,
    eps: f64,
    elastic: &ElasticModel,
    potential: &Potential,
) -> Result<()> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::domain(format!("epsilon = {eps} must be positive")));
    }
    check_model(field.grid(), field.k(), elastic)?;
    if potential.k() != field.k() {
        return Err(Error::GridMismatch(format!(
            "potential acts on k = {}, field has k = {}",
            potential.k(),
            field.k()
        )));
    }
    Ok(())
}

/// Nodal energy densities. Same-direction terms average the squared one-sided
/// differences over the grid edges meeting at the node (one on a grid face,
/// two inside), which is the node's share of the edge-based discrete energy;
/// mixed-direction terms use central differences.
pub(crate) struct Densities<'a> {
    grid: &'a Grid,
    k: usize,
    model: Option<&'a ElasticModel>,
    diag: [Vec<f64>; 3],
    mixed: Option<Vec<f64>>,
}

impl<'a> Densities<'a> {
    pub fn new(grid: &'a Grid, k: usize, model: Option<&'a ElasticModel>) -> Self {
        let general = model.filter(|m| m.isotropic_scale().is_none());
        Densities {
            grid,
            k,
            model,
            diag: std::array::from_fn(|i| general.map(|m| m.block(i, i)).unwrap_or_default()),
            mixed: general.filter(|m| m.has_mixed()).map(|m| m.mixed_form()),
        }
    }

    /// `(W(x, ∇u), |∇u|^2)` at node `p`, the former including the weight.
    pub fn at(&self, values: &[f64], p: usize) -> (f64, f64) {
        let (grid, k) = (self.grid, self.k);
        let c = grid.coords(p);
        let dims = grid.dims();
        let h = grid.spacing();
        let mut dir = 0.0;
        let mut el = 0.0;
        let mut d = [0.0; MAX_K];
        for i in 0..3 {
            let s = grid.stride(i);
            let mut edges = [None; 2];
            if c[i] > 0 {
                edges[0] = Some((p - s, p));
            }
            if c[i] + 1 < dims[i] {
                edges[1] = Some((p, p + s));
            }
            let count = edges.iter().flatten().count() as f64;
            for &(lo, hi) in edges.iter().flatten() {
                for a in 0..k {
                    d[a] = (values[hi * k + a] - values[lo * k + a]) / h;
                }
                let sq: f64 = d[..k].iter().map(|x| x * x).sum();
                dir += sq / count;
                if let Some(m) = self.model {
                    let quad = match m.isotropic_scale() {
                        Some(sc) => sc * sq,
                        None => {
                            let b = &self.diag[i];
                            (0..k)
                                .map(|a| d[a] * (0..k).map(|bb| b[a * k + bb] * d[bb]).sum::<f64>())
                                .sum()
                        }
                    };
                    el += quad / count;
                }
            }
        }
        if let Some(mf) = &self.mixed {
            let nk = 3 * k;
            let mut xi = [0.0; 3 * MAX_K];
            node_gradient(grid, k, values, p, &mut xi[..nk]);
            for r in 0..nk {
                let row = &mf[r * nk..(r + 1) * nk];
                el += xi[r] * row.iter().zip(&xi[..nk]).map(|(a, x)| a * x).sum::<f64>();
            }
        }
        let weight = self.model.map_or(1.0, |m| m.weight_at(p));
        (weight * el, dir)
    }
}

/// `E_ε(u; mask)` by nodal quadrature with partial-volume weights (see
/// [`Densities`] for the gradient terms).
pub fn energy(
    field: &Field,
    eps: f64,
    elastic: &ElasticModel,
    potential: &Potential,
    mask: &Mask,
) -> Result<EnergyBreakdown> {
    check_inputs(field, eps, elastic, potential)?;
    let grid = field.grid();
    mask.check_grid(grid)?;
    let dens = Densities::new(grid, field.k(), Some(elastic));
    let entries = mask.entries();
    let [el, pot, dir] = reduce::sum_n::<3, _>(entries.len(), |e| {
        let (p, w) = entries[e];
        let (we, d) = dens.at(field.values(), p);
        [w * we, w * potential.value(field.at(p)), w * d]
    });
    let h3 = grid.spacing().powi(3);
    let (elastic_part, potential_part) = (h3 * el, h3 * pot);
    Ok(EnergyBreakdown {
        elastic: elastic_part,
        potential: potential_part,
        dirichlet: h3 * dir,
        total: elastic_part + potential_part / (eps * eps),
    })
}

/// `r^-1 E_ε(u; B_r(center))`.
pub fn renormalized_energy(
    field: &Field,
    eps: f64,
    elastic: &ElasticModel,
    potential: &Potential,
    center: [f64; 3],
    r: f64,
) -> Result<f64> {
    check_resolvable(field, r)?;
    let mask = Mask::ball(field.grid(), center, r)?;
    Ok(energy(field, eps, elastic, potential, &mask)?.total / r)
}

pub(crate) fn check_resolvable(field: &Field, r: f64) -> Result<()> {
    let h = field.grid().spacing();
    if r < 4.0 * h * (1.0 - 1e-12) {
        return Err(Error::geometry(format!(
            "radius {r} below the resolution limit 4h = {}",
            4.0 * h
        )));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct H1Distance {
    /// `‖∇(u1 - u2)‖_{L^2}` over the mask.
    pub gradient: f64,
    /// `‖u1 - u2‖_{L^2}` over the mask.
    pub value: f64,
    /// `sqrt(gradient^2 + value^2)`
    pub total: f64,
}

pub fn h1_distance(f1: &Field, f2: &Field, mask: &Mask) -> Result<H1Distance> {
    f1.same_shape(f2)?;
    let grid = f1.grid();
    mask.check_grid(grid)?;
    let k = f1.k();
    let diff: Vec<f64> = f1.values().iter().zip(f2.values()).map(|(a, b)| a - b).collect();
    let dens = Densities::new(grid, k, None);
    let entries = mask.entries();
    let [g2, v2] = reduce::sum_n::<2, _>(entries.len(), |e| {
        let (p, w) = entries[e];
        [
            w * dens.at(&diff, p).1,
            w * diff[p * k..(p + 1) * k].iter().map(|x| x * x).sum::<f64>(),
        ]
    });
    let h3 = grid.spacing().powi(3);
    let (gradient, value) = ((h3 * g2).sqrt(), (h3 * v2).sqrt());
    Ok(H1Distance {
        gradient,
        value,
        total: gradient.hypot(value),
    })
}

/// Largest pointwise distance over the masked nodes.
pub fn linf_distance(f1: &Field, f2: &Field, mask: &Mask) -> Result<f64> {
    f1.same_shape(f2)?;
    mask.check_grid(f1.grid())?;
    let entries = mask.entries();
    Ok(reduce::max(entries.len(), |e| {
        let p = entries[e].0;
        f1.point(p).distance(&f2.point(p))
    }))
}
