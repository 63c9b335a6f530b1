use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use serde::Serialize;

use super::point::{fibonacci_sphere, uniaxial, TargetPoint};
use super::potential::Potential;
use crate::{Error, Result};

/// Growth exponents for the large-`|z|` behaviour of `f`:
/// `|∇f| <~ |z|^(6/p)` and `|∇f| <~ f^a`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GrowthParams {
    pub p: f64,
    pub a_exp: f64,
    /// `4/3 - 1/p`, the upper end of the admissible range for `a_exp`.
    pub big_a: f64,
}

impl GrowthParams {
    pub fn new(p: f64, a_exp: f64) -> Result<Self> {
        if !(p > 1.5) {
            return Err(Error::domain(format!("growth exponent p = {p} must exceed 3/2")));
        }
        let big_a = 4.0 / 3.0 - 1.0 / p;
        let upper = big_a.min(0.8);
        if !(0.5..=upper).contains(&a_exp) {
            return Err(Error::domain(format!(
                "exponent a = {a_exp} outside [1/2, {upper}]"
            )));
        }
        Ok(GrowthParams { p, a_exp, big_a })
    }
}

/// Unit directions in `R^k`: a Fibonacci spiral for `k = 3`, seeded Gaussian
/// directions otherwise.
pub fn shell_directions(k: usize, count: usize, seed: u64) -> Vec<TargetPoint> {
    if k == 3 {
        return fibonacci_sphere(count)
            .into_iter()
            .map(|p| TargetPoint::new(&p))
            .collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut z = TargetPoint::zeros(k);
            for c in z.as_mut_slice() {
                *c = StandardNormal.sample(&mut rng);
            }
            (1.0 / z.norm()) * z
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ShellRatios {
    pub radius: f64,
    /// max over the shell of `|∇f| / |z|^(6/p)`
    pub grad_over_power: f64,
    /// max over the shell of `|∇f| / f^a`
    pub grad_over_f: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    pub params: GrowthParams,
    pub shells: Vec<ShellRatios>,
    /// Largest log-log slope of each ratio between consecutive shells.
    pub max_slope_power: f64,
    pub max_slope_f: f64,
    pub pass: bool,
}

/// Ratio trends flatter than this count as bounded.
pub const GROWTH_SLOPE_TOL: f64 = 0.1;

/// Samples `|∇f|/|z|^(6/p)` and `|∇f|/f^a` on spherical shells and checks
/// that neither ratio keeps growing with the radius.
pub fn check_growth(
    pot: &Potential,
    params: GrowthParams,
    radii: &[f64],
    points_per_shell: usize,
) -> Result<GrowthReport> {
    if radii.len() < 2 {
        return Err(Error::InsufficientData("need at least two shells".into()));
    }
    if radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("shell radii must be strictly increasing"));
    }
    if radii[0] < 2.0 * pot.s_star() * (1.0 - 1e-12) {
        return Err(Error::domain(format!(
            "shells must start beyond 2 s* = {}",
            2.0 * pot.s_star()
        )));
    }
    let dirs = shell_directions(pot.k(), points_per_shell.max(1000), 17);
    let mut shells = Vec::with_capacity(radii.len());
    for &r in radii {
        let mut gp: f64 = 0.0;
        let mut gf: f64 = 0.0;
        for d in &dirs {
            let z = r * *d;
            let g = pot.grad_f(&z).norm();
            let f = pot.bulk_f(&z);
            gp = gp.max(g / r.powf(6.0 / params.p));
            gf = gf.max(if f > 0.0 { g / f.powf(params.a_exp) } else { f64::INFINITY });
        }
        shells.push(ShellRatios {
            radius: r,
            grad_over_power: gp,
            grad_over_f: gf,
        });
    }
    let slope = |sel: fn(&ShellRatios) -> f64| {
        shells
            .windows(2)
            .map(|w| (sel(&w[1]) / sel(&w[0])).ln() / (w[1].radius / w[0].radius).ln())
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let max_slope_power = slope(|s| s.grad_over_power);
    let max_slope_f = slope(|s| s.grad_over_f);
    let finite = shells
        .iter()
        .all(|s| s.grad_over_power.is_finite() && s.grad_over_f.is_finite());
    let pass = finite && max_slope_power <= GROWTH_SLOPE_TOL && max_slope_f <= GROWTH_SLOPE_TOL;
    Ok(GrowthReport {
        params,
        shells,
        max_slope_power,
        max_slope_f,
        pass,
    })
}

/// Measured constants `c1 <= f / dist^2 <= c2` on the tube `dist <= s*/4`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TubeConstants {
    pub c1: f64,
    pub c2: f64,
    pub samples: usize,
}

pub fn tube_constants(pot: &Potential, samples: usize, seed: u64) -> TubeConstants {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tube = pot.tube_radius();
    let radial = Uniform::new(0.02 * tube, tube).expect("valid range");
    let k = pot.k();
    let dirs = shell_directions(k, samples, seed ^ 0x5eed);
    let mut c1 = f64::INFINITY;
    let mut c2: f64 = 0.0;
    let mut used = 0;
    for d in dirs {
        let base = match k {
            5 => {
                let n: [f64; 3] = std::array::from_fn(|_| StandardNormal.sample(&mut rng));
                let n = nalgebra::Vector3::from(n).normalize();
                uniaxial(&n, pot.s_star())
            }
            _ => {
                let mut p = TargetPoint::zeros(k);
                for c in p.as_mut_slice() {
                    *c = StandardNormal.sample(&mut rng);
                }
                (1.0 / p.norm()) * p
            }
        };
        let z = base + radial.sample(&mut rng) * d;
        let dist = pot.dist_to_n(&z);
        if dist <= tube && dist > 1e-6 * tube {
            let ratio = pot.bulk_f(&z) / (dist * dist);
            c1 = c1.min(ratio);
            c2 = c2.max(ratio);
            used += 1;
        }
    }
    TubeConstants { c1, c2, samples: used }
}
