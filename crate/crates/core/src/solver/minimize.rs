use std::collections::VecDeque;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::anchoring::Anchoring;
use super::problem::{DiscreteEnergy, Problem};
use crate::elastic::ElasticModel;
use crate::field::Field;
use crate::manifold::Potential;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Method {
    SteepestDescent,
    /// Limited-memory BFGS directions in the node-weighted inner product,
    /// falling back to steepest descent whenever a direction fails.
    Lbfgs { memory: usize },
}

impl Default for Method {
    fn default() -> Self {
        Method::Lbfgs { memory: 8 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinimizeConfig {
    pub epsilon: f64,
    pub max_iters: usize,
    /// Stationarity threshold on the largest nodal residual. `None` uses
    /// `grad_tol_factor * max(E_init / |Ω|, f(0))`: the initial energy
    /// density, floored by the condensation energy of the potential.
    pub grad_tol: Option<f64>,
    pub grad_tol_factor: f64,
    /// First trial step of steepest descent.
    pub initial_step: f64,
    pub armijo: f64,
    pub shrink: f64,
    pub max_halvings: usize,
    pub method: Method,
}

impl MinimizeConfig {
    pub fn new(epsilon: f64) -> Self {
        MinimizeConfig {
            epsilon,
            max_iters: 20_000,
            grad_tol: None,
            grad_tol_factor: 1e-6,
            initial_step: 1.0,
            armijo: 1e-4,
            shrink: 0.5,
            max_halvings: 60,
            method: Method::default(),
        }
    }

    pub fn validate(&self, diameter: f64) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon <= diameter) {
            return Err(Error::domain(format!(
                "epsilon = {} must lie in (0, {diameter}]",
                self.epsilon
            )));
        }
        let positive = [
            ("grad_tol_factor", self.grad_tol_factor),
            ("initial_step", self.initial_step),
            ("armijo", self.armijo),
            ("shrink", self.shrink),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!("{name} = {v} must be positive")));
            }
        }
        if let Some(t) = self.grad_tol {
            if !(t > 0.0) {
                return Err(Error::domain(format!("grad_tol = {t} must be positive")));
            }
        }
        if !(self.armijo < 1.0 && self.shrink < 1.0) {
            return Err(Error::domain("armijo constant and shrink factor must be < 1"));
        }
        if self.max_iters == 0 || self.max_halvings == 0 {
            return Err(Error::domain("iteration limits must be positive"));
        }
        if let Method::Lbfgs { memory: 0 } = self.method {
            return Err(Error::domain("L-BFGS memory must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IterRecord {
    pub iter: usize,
    pub energy_total: f64,
    pub energy_elastic: f64,
    /// The `ε^-2`-weighted bulk term.
    pub energy_potential: f64,
    pub max_residual: f64,
    /// Accepted step length (0 for the initial record).
    pub step_size: f64,
}

#[derive(Clone, Debug)]
pub struct MinimizeOutput {
    pub field: Field,
    pub log: Vec<IterRecord>,
    pub converged: bool,
    pub grad_tol: f64,
    pub energy: DiscreteEnergy,
}

pub fn write_log_csv(log: &[IterRecord], mut w: impl Write) -> std::io::Result<()> {
    writeln!(
        w,
        "iter,energy_total,energy_elastic,energy_potential,max_residual,step_size"
    )?;
    for r in log {
        writeln!(
            w,
            "{},{:e},{:e},{:e},{:e},{:e}",
            r.iter, r.energy_total, r.energy_elastic, r.energy_potential, r.max_residual, r.step_size
        )?;
    }
    Ok(())
}

struct Pair {
    s: Vec<f64>,
    y: Vec<f64>,
    rho: f64,
}

/// Monotone descent with Armijo backtracking. The returned field agrees with
/// the Dirichlet data bit for bit; every accepted step strictly decreases the
/// discrete energy.
pub fn minimize(
    init: &Field,
    config: &MinimizeConfig,
    elastic: &ElasticModel,
    potential: &Potential,
    anchoring: &Anchoring,
) -> Result<MinimizeOutput> {
    config.validate(init.grid().diameter())?;
    let problem = Problem::new(init, config.epsilon, elastic, potential, anchoring)?;
    let len = init.values().len();
    let mut x = init.values().to_vec();
    let mut r = vec![0.0; len];
    let mut g_el = vec![0.0; len];
    let mut energy = problem.eval(&x, Some(&mut r), Some(&mut g_el));
    let grad_tol = config.grad_tol.unwrap_or_else(|| {
        let f0 = potential.value(&vec![0.0; init.k()]);
        config.grad_tol_factor * (energy.total / problem.volume()).max(f0)
    });
    let mut max_res = problem.max_norm(&r);
    let record = |iter, e: &DiscreteEnergy, m, step| IterRecord {
        iter,
        energy_total: e.total,
        energy_elastic: e.elastic,
        energy_potential: e.potential,
        max_residual: m,
        step_size: step,
    };
    let mut log = vec![record(0, &energy, max_res, 0.0)];
    let memory = match config.method {
        Method::Lbfgs { memory } => memory,
        Method::SteepestDescent => 0,
    };
    let mut pairs: VecDeque<Pair> = VecDeque::with_capacity(memory);
    let mut sd_step = config.initial_step;
    let mut x_new = vec![0.0; len];
    let mut r_new = vec![0.0; len];
    let mut g_el_new = vec![0.0; len];
    // Tracked through accurate increments; direct evaluation of the LdG
    // potential near N carries more round-off than late increments are large.
    let mut tracked = energy.total;
    let mut d = vec![0.0; len];
    let mut iter = 0;

    while max_res >= grad_tol && iter < config.max_iters {
        iter += 1;
        let mut accepted = None;
        // first try the quasi-Newton direction, then plain steepest descent
        for use_memory in [true, false] {
            if use_memory && pairs.is_empty() {
                continue;
            }
            let quasi = use_memory;
            if quasi {
                two_loop(&problem, &pairs, &r, &mut d);
            } else {
                for (di, ri) in d.iter_mut().zip(&r) {
                    *di = -ri;
                }
            }
            let slope = problem.dot(&r, &d);
            if !(slope < 0.0) {
                continue;
            }
            let line = problem.line(&g_el, &d);
            let mut alpha = if quasi { 1.0 } else { sd_step };
            for _ in 0..=config.max_halvings {
                let delta = problem.increment(&x, &d, alpha, &line);
                if delta <= config.armijo * alpha * slope && delta < 0.0 {
                    accepted = Some((alpha, delta, quasi));
                    break;
                }
                alpha *= config.shrink;
            }
            if accepted.is_some() {
                break;
            }
            pairs.clear();
        }
        let Some((alpha, delta, quasi)) = accepted else {
            return Err(Error::Stagnation {
                iteration: iter,
                energy: tracked,
                max_residual: max_res,
                step: sd_step,
            });
        };
        if !quasi {
            sd_step = (alpha / config.shrink).min(1e12);
        }
        for i in 0..len {
            x_new[i] = x[i] + alpha * d[i];
        }
        let e_new = problem.eval(&x_new, Some(&mut r_new), Some(&mut g_el_new));
        tracked += delta;
        if memory > 0 {
            let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
            let y: Vec<f64> = r_new.iter().zip(&r).map(|(a, b)| a - b).collect();
            let sy = problem.dot(&s, &y);
            if sy > 1e-14 * problem.dot(&s, &s).sqrt() * problem.dot(&y, &y).sqrt() {
                if pairs.len() == memory {
                    pairs.pop_front();
                }
                pairs.push_back(Pair { s, y, rho: 1.0 / sy });
            }
        }
        std::mem::swap(&mut x, &mut x_new);
        std::mem::swap(&mut r, &mut r_new);
        std::mem::swap(&mut g_el, &mut g_el_new);
        energy = e_new;
        max_res = problem.max_norm(&r);
        log.push(IterRecord {
            energy_total: tracked,
            ..record(iter, &energy, max_res, alpha)
        });
    }
    let mut field = Field::from_values(init.grid().clone(), init.k(), x)?;
    field.set_boundary_mask(init.boundary_mask().to_vec())?;
    Ok(MinimizeOutput {
        field,
        log,
        converged: max_res < grad_tol,
        grad_tol,
        energy,
    })
}

/// `d = -H r` with the L-BFGS inverse-Hessian approximation.
fn two_loop(problem: &Problem, pairs: &VecDeque<Pair>, r: &[f64], d: &mut [f64]) {
    d.copy_from_slice(r);
    let mut alphas = vec![0.0; pairs.len()];
    for (i, p) in pairs.iter().enumerate().rev() {
        let a = p.rho * problem.dot(&p.s, d);
        alphas[i] = a;
        for (dj, yj) in d.iter_mut().zip(&p.y) {
            *dj -= a * yj;
        }
    }
    let last = pairs.back().expect("nonempty memory");
    let gamma = 1.0 / (last.rho * problem.dot(&last.y, &last.y));
    for dj in d.iter_mut() {
        *dj *= gamma;
    }
    for (i, p) in pairs.iter().enumerate() {
        let b = p.rho * problem.dot(&p.y, d);
        for (dj, sj) in d.iter_mut().zip(&p.s) {
            *dj += (alphas[i] - b) * sj;
        }
    }
    for dj in d.iter_mut() {
        *dj = -*dj;
    }
}
