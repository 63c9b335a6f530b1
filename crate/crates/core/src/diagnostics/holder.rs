use rayon::prelude::*;
use serde::Serialize;

use crate::field::{check_resolvable, dist, Densities, Domain, Field, Grid, Mask};
use crate::{Error, Result};

/// Ball `B_R(center)`; only balls `B_r(x) ⊂ B_R(center)` enter the supremum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Region {
    pub center: [f64; 3],
    pub radius: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CampanatoRow {
    pub radius: f64,
    /// `sup_x r^{-(1+2α)} ∫_{B_r(x)} |∇u|^2` over admissible centres.
    pub sup: f64,
    pub argmax: [f64; 3],
    pub centers: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CampanatoReport {
    pub alpha: f64,
    pub rows: Vec<CampanatoRow>,
    /// Supremum over all rows.
    pub value: f64,
    pub sqrt_value: f64,
    /// Direct quotient `sup |u(x) - u(y)| / |x - y|^α` over lattice pairs in
    /// the region with separation up to twice the largest radius.
    pub holder_quotient: f64,
    /// The row suprema grow strictly as the radius decreases.
    pub diverging: bool,
}

/// Dyadic radii `4h, 8h, ...` up to `r_max`.
pub fn dyadic_radii(h: f64, r_max: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut r = 4.0 * h;
    while r <= r_max * (1.0 + 1e-12) {
        out.push(r);
        r *= 2.0;
    }
    out
}

/// Offsets and weights of the ball mask about a node, independent of the node.
fn ball_stencil(h: f64, r: f64) -> Result<Vec<([i64; 3], f64)>> {
    let m = (r / h).ceil() as usize + 1;
    let local = Grid::new([2 * m + 1; 3], h, [-(m as f64) * h; 3], Domain::Box)?;
    let mask = Mask::ball(&local, [0.0; 3], r)?;
    Ok(mask
        .entries()
        .iter()
        .map(|&(p, w)| {
            let c = local.coords(p);
            ([c[0] as i64 - m as i64, c[1] as i64 - m as i64, c[2] as i64 - m as i64], w)
        })
        .collect())
}

const DIRECTIONS: [[i64; 3]; 13] = [
    [1, 0, 0],
    [0, 1, 0],
    [0, 0, 1],
    [1, 1, 0],
    [1, -1, 0],
    [1, 0, 1],
    [1, 0, -1],
    [0, 1, 1],
    [0, 1, -1],
    [1, 1, 1],
    [1, 1, -1],
    [1, -1, 1],
    [1, -1, -1],
];

/// Campanato-Morrey quotient of the Dirichlet density over `region`, for
/// every centre node whose balls fit in both the region and the domain.
pub fn campanato_holder(
    field: &Field,
    region: &Region,
    alpha: f64,
    radii: &[f64],
) -> Result<CampanatoReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("Hölder exponent {alpha} outside (0, 1)")));
    }
    if radii.is_empty() || radii.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::domain("radii must be nonempty and strictly increasing"));
    }
    for &r in radii {
        check_resolvable(field, r)?;
    }
    let grid = field.grid();
    let h = grid.spacing();
    let k = field.k();
    let dens = Densities::new(grid, k, None);
    let density: Vec<f64> = (0..grid.len()).map(|p| dens.at(field.values(), p).1).collect();
    let tol = 1e-9 * h;
    let region_nodes: Vec<usize> = (0..grid.len())
        .filter(|&p| dist(grid.position(p), region.center) <= region.radius + tol)
        .collect();
    let dims = grid.dims().map(|d| d as i64);
    let h3 = h.powi(3);
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        let stencil = ball_stencil(h, r)?;
        let centers: Vec<usize> = region_nodes
            .iter()
            .copied()
            .filter(|&p| {
                let x = grid.position(p);
                dist(x, region.center) + r <= region.radius + tol && grid.ball_fits(x, r, false)
            })
            .collect();
        let scale = r.powf(-(1.0 + 2.0 * alpha));
        let (sup, argmax) = centers
            .par_iter()
            .map(|&p| {
                let c = grid.coords(p).map(|v| v as i64);
                let mut s = 0.0;
                for (o, w) in &stencil {
                    let q = [c[0] + o[0], c[1] + o[1], c[2] + o[2]];
                    if (0..3).all(|a| q[a] >= 0 && q[a] < dims[a]) {
                        let idx = grid.index(q[0] as usize, q[1] as usize, q[2] as usize);
                        s += w * density[idx];
                    }
                }
                (scale * h3 * s, p)
            })
            .reduce(
                || (0.0, usize::MAX),
                |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a },
            );
        rows.push(CampanatoRow {
            radius: r,
            sup,
            argmax: if argmax == usize::MAX {
                region.center
            } else {
                grid.position(argmax)
            },
            centers: centers.len(),
        });
    }
    let value = rows.iter().map(|r| r.sup).fold(0.0, f64::max);
    let diverging = rows.len() >= 2 && rows.windows(2).all(|w| w[0].sup > w[1].sup);
    let max_sep = 2.0 * radii[radii.len() - 1];
    let holder_quotient = holder_quotient(field, &region_nodes, region, alpha, max_sep);
    Ok(CampanatoReport {
        alpha,
        rows,
        value,
        sqrt_value: value.sqrt(),
        holder_quotient,
        diverging,
    })
}

fn holder_quotient(field: &Field, nodes: &[usize], region: &Region, alpha: f64, max_sep: f64) -> f64 {
    let grid = field.grid();
    let h = grid.spacing();
    let dims = grid.dims().map(|d| d as i64);
    let tol = 1e-9 * h;
    nodes
        .par_iter()
        .map(|&p| {
            let c = grid.coords(p).map(|v| v as i64);
            let u = field.point(p);
            let mut best: f64 = 0.0;
            for d in DIRECTIONS {
                let mut m = 1i64;
                loop {
                    let q = [c[0] + m * d[0], c[1] + m * d[1], c[2] + m * d[2]];
                    let len = h * m as f64 * ((d[0] * d[0] + d[1] * d[1] + d[2] * d[2]) as f64).sqrt();
                    if len > max_sep + tol || (0..3).any(|a| q[a] < 0 || q[a] >= dims[a]) {
                        break;
                    }
                    let qi = grid.index(q[0] as usize, q[1] as usize, q[2] as usize);
                    if dist(grid.position(qi), region.center) <= region.radius + tol {
                        best = best.max(u.distance(&field.point(qi)) / len.powf(alpha));
                    }
                    m *= 2;
                }
            }
            best
        })
        .reduce(|| 0.0, f64::max)
}
