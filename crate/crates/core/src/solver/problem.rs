use rayon::prelude::*;
use serde::Serialize;

use super::anchoring::Anchoring;
use crate::elastic::{energy_gradient, ElasticModel};
use crate::field::{Field, Grid};
use crate::manifold::{Potential, MAX_K};
use crate::{reduce, Result};

/// Parts of the discrete total energy minimized by the solver.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct DiscreteEnergy {
    pub elastic: f64,
    /// `ε^-2 Σ ω_p f(u_p)`
    pub potential: f64,
    /// Weak-anchoring surface term (0 otherwise).
    pub surface: f64,
    pub total: f64,
}

/// Elastic part of the energy along a line: `E_el(x + αd) - E_el(x) =
/// α linear + α² quadratic`.
pub(crate) struct Line {
    linear: f64,
    quadratic: f64,
}

/// A fully specified discrete problem on one grid.
pub(crate) struct Problem<'a> {
    pub grid: &'a Grid,
    pub k: usize,
    pub eps: f64,
    pub elastic: &'a ElasticModel,
    pub potential: &'a Potential,
    pub omega: Vec<f64>,
    pub constrained: Vec<bool>,
    surface: Option<(f64, Vec<f64>, &'a [f64])>,
}

impl<'a> Problem<'a> {
    pub fn new(
        field: &'a Field,
        eps: f64,
        elastic: &'a ElasticModel,
        potential: &'a Potential,
        anchoring: &'a Anchoring,
    ) -> Result<Self> {
        crate::field::check_energy_inputs(field, eps, elastic, potential)?;
        anchoring.check_compatible(field)?;
        let grid = field.grid();
        let surface = match anchoring {
            Anchoring::Weak {
                strength,
                preferred,
            } => Some((
                *strength,
                (0..grid.len()).map(|p| grid.surface_weight(p)).collect(),
                preferred.values(),
            )),
            _ => None,
        };
        Ok(Problem {
            grid,
            k: field.k(),
            eps,
            elastic,
            potential,
            omega: (0..grid.len()).map(|p| grid.node_weight(p)).collect(),
            constrained: anchoring.constrained(field),
            surface,
        })
    }

    /// Energy and, optionally, the residual `∂E/∂u_p / ω_p` (zero at
    /// constrained nodes) and the raw elastic gradient `∂E_el/∂u`.
    pub fn eval(
        &self,
        values: &[f64],
        mut residual: Option<&mut [f64]>,
        el_grad: Option<&mut [f64]>,
    ) -> DiscreteEnergy {
        let k = self.k;
        let inv_eps2 = 1.0 / (self.eps * self.eps);
        let n = self.grid.len();
        let elastic = energy_gradient(self.grid, self.elastic, values, residual.as_deref_mut());
        if let (Some(r), Some(g)) = (residual.as_deref(), el_grad) {
            g.copy_from_slice(r);
        }
        let [pot, surf] = reduce::sum_n::<2, _>(n, |p| {
            let z = &values[p * k..(p + 1) * k];
            let s = match &self.surface {
                Some((w0, sigma, qb)) if sigma[p] > 0.0 => {
                    let q = &qb[p * k..(p + 1) * k];
                    sigma[p] * w0 * z.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()
                }
                _ => 0.0,
            };
            [self.omega[p] * self.potential.value(z), s]
        });
        if let Some(r) = residual {
            r.par_chunks_mut(k).enumerate().for_each(|(p, g)| {
                if self.constrained[p] {
                    g.fill(0.0);
                    return;
                }
                let z = &values[p * k..(p + 1) * k];
                let w = self.omega[p];
                let mut gf = [0.0; MAX_K];
                self.potential.gradient_into(z, &mut gf[..k]);
                for a in 0..k {
                    g[a] = g[a] / w + inv_eps2 * gf[a];
                }
                if let Some((w0, sigma, qb)) = &self.surface {
                    if sigma[p] > 0.0 {
                        for a in 0..k {
                            g[a] += 2.0 * sigma[p] * w0 * (z[a] - qb[p * k + a]) / w;
                        }
                    }
                }
            });
        }
        let potential = inv_eps2 * pot;
        DiscreteEnergy {
            elastic,
            potential,
            surface: surf,
            total: elastic + potential + surf,
        }
    }

    /// Precomputes the quadratic elastic part of `E(x + αd) - E(x)`.
    pub fn line(&self, el_grad: &[f64], d: &[f64]) -> Line {
        let k = self.k;
        Line {
            linear: reduce::sum(self.grid.len(), |p| {
                (p * k..(p + 1) * k).map(|i| el_grad[i] * d[i]).sum::<f64>()
            }),
            quadratic: energy_gradient(self.grid, self.elastic, d, None),
        }
    }

    /// `E(x + αd) - E(x)`, evaluated without forming either energy.
    pub fn increment(&self, x: &[f64], d: &[f64], alpha: f64, line: &Line) -> f64 {
        let k = self.k;
        let inv_eps2 = 1.0 / (self.eps * self.eps);
        let [pot, surf] = reduce::sum_n::<2, _>(self.grid.len(), |p| {
            let dp = &d[p * k..(p + 1) * k];
            if dp.iter().all(|&v| v == 0.0) {
                return [0.0, 0.0];
            }
            let z = &x[p * k..(p + 1) * k];
            let mut dz = [0.0; MAX_K];
            for a in 0..k {
                dz[a] = alpha * dp[a];
            }
            let s = match &self.surface {
                Some((w0, sigma, qb)) if sigma[p] > 0.0 => {
                    let q = &qb[p * k..(p + 1) * k];
                    let lin: f64 = (0..k).map(|a| 2.0 * (z[a] - q[a]) * dz[a]).sum();
                    let quad: f64 = dz[..k].iter().map(|v| v * v).sum();
                    sigma[p] * w0 * (lin + quad)
                }
                _ => 0.0,
            };
            [self.omega[p] * self.potential.value_difference(z, &dz[..k]), s]
        });
        alpha * line.linear + alpha * alpha * line.quadratic + inv_eps2 * pot + surf
    }

    /// `⟨a, b⟩_ω = Σ_p ω_p a_p · b_p`
    pub fn dot(&self, a: &[f64], b: &[f64]) -> f64 {
        let k = self.k;
        reduce::sum(self.grid.len(), |p| {
            let s: f64 = (p * k..(p + 1) * k).map(|i| a[i] * b[i]).sum();
            self.omega[p] * s
        })
    }

    /// Largest nodal Euclidean norm of a residual.
    pub fn max_norm(&self, r: &[f64]) -> f64 {
        let k = self.k;
        reduce::max(self.grid.len(), |p| {
            r[p * k..(p + 1) * k].iter().map(|x| x * x).sum::<f64>().sqrt()
        })
    }

    pub fn volume(&self) -> f64 {
        reduce::sum(self.grid.len(), |p| self.omega[p])
    }
}

/// The residual field `𝓛u + ε^-2 ∇f(u)` (plus the weak-anchoring surface
/// term on boundary faces), i.e. the gradient of the discrete energy in the
/// node-weighted inner product. `-residual` is the steepest-descent direction;
/// constrained nodes report 0.
pub fn el_residual(
    field: &Field,
    eps: f64,
    elastic: &ElasticModel,
    potential: &Potential,
    anchoring: &Anchoring,
) -> Result<Field> {
    let problem = Problem::new(field, eps, elastic, potential, anchoring)?;
    let mut r = vec![0.0; field.values().len()];
    problem.eval(field.values(), Some(&mut r), None);
    let mut out = Field::from_values(field.grid().clone(), field.k(), r)?;
    out.set_boundary_mask(field.boundary_mask().to_vec())?;
    Ok(out)
}

/// The discrete energy minimized by the solver, over the whole grid.
pub fn discrete_energy(
    field: &Field,
    eps: f64,
    elastic: &ElasticModel,
    potential: &Potential,
    anchoring: &Anchoring,
) -> Result<DiscreteEnergy> {
    let problem = Problem::new(field, eps, elastic, potential, anchoring)?;
    Ok(problem.eval(field.values(), None, None))
}
