use super::grid::{dist, Domain, Grid};
use crate::{Error, Result};

/// Sparse node weights in `[0, 1]`: the fraction of each node's cell
/// `p + [-h/2, h/2]^3` that belongs to the integration region. Quadrature is
/// `∫ g ≈ Σ w_p g(p) h^3`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mask {
    entries: Vec<(usize, f64)>,
}

const SUB: [f64; 2] = [-0.25, 0.25];

impl Mask {
    pub fn from_entries(mut entries: Vec<(usize, f64)>) -> Self {
        entries.retain(|&(_, w)| w > 0.0);
        entries.sort_by_key(|&(p, _)| p);
        Mask { entries }
    }

    /// Whole physical domain of the grid. For a box the weights reproduce the
    /// trapezoid rule.
    pub fn domain(grid: &Grid) -> Result<Self> {
        match grid.domain() {
            Domain::Box => {
                let h3 = grid.spacing().powi(3);
                Ok(Mask {
                    entries: (0..grid.len()).map(|p| (p, grid.node_weight(p) / h3)).collect(),
                })
            }
            Domain::Ball { center, radius } => Self::ball(grid, center, radius),
            Domain::HalfBall { center, radius } => Self::half_ball(grid, center, radius),
        }
    }

    pub fn ball(grid: &Grid, center: [f64; 3], r: f64) -> Result<Self> {
        Self::build(grid, center, r, false)
    }

    /// `B_r(center) ∩ {z >= center_z}`.
    pub fn half_ball(grid: &Grid, center: [f64; 3], r: f64) -> Result<Self> {
        Self::build(grid, center, r, true)
    }

    fn build(grid: &Grid, center: [f64; 3], r: f64, half: bool) -> Result<Self> {
        let h = grid.spacing();
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::geometry(format!("ball radius {r} must be positive")));
        }
        let lo = grid.origin();
        let hi = grid.upper();
        let tol = 1e-9 * h;
        for a in 0..3 {
            let below = if half && a == 2 { center[a] } else { center[a] - r };
            if below < lo[a] - tol || center[a] + r > hi[a] + tol {
                return Err(Error::geometry(format!(
                    "ball of radius {r} at {center:?} leaves the grid box"
                )));
            }
        }
        let dims = grid.dims();
        let range = |a: usize| {
            let first = ((center[a] - r - lo[a]) / h - 1.0).floor().max(0.0) as usize;
            let last = (((center[a] + r - lo[a]) / h + 1.0).ceil() as usize).min(dims[a] - 1);
            first..=last
        };
        let half_diag = 0.5 * 3f64.sqrt() * h;
        let mut entries = Vec::new();
        for i in range(0) {
            for j in range(1) {
                for l in range(2) {
                    let p = grid.index(i, j, l);
                    let x = grid.position(p);
                    let d = dist(x, center);
                    if d - half_diag >= r {
                        continue;
                    }
                    let clear_of_face = !half || x[2] - 0.5 * h >= center[2];
                    let w = if d + half_diag <= r && clear_of_face {
                        1.0
                    } else {
                        let mut inside = 0;
                        for sx in SUB {
                            for sy in SUB {
                                for sz in SUB {
                                    let y = [x[0] + sx * h, x[1] + sy * h, x[2] + sz * h];
                                    if dist(y, center) < r && (!half || y[2] >= center[2]) {
                                        inside += 1;
                                    }
                                }
                            }
                        }
                        inside as f64 / 8.0
                    };
                    if w > 0.0 {
                        entries.push((p, w));
                    }
                }
            }
        }
        Ok(Mask { entries })
    }

    /// Drops every node within `radius` of one of the centres.
    pub fn excluding_balls(&self, grid: &Grid, centers: &[[f64; 3]], radius: f64) -> Self {
        Mask {
            entries: self
                .entries
                .iter()
                .copied()
                .filter(|&(p, _)| {
                    let x = grid.position(p);
                    centers.iter().all(|&c| dist(x, c) > radius)
                })
                .collect(),
        }
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn volume(&self, grid: &Grid) -> f64 {
        grid.spacing().powi(3) * self.entries.iter().map(|e| e.1).sum::<f64>()
    }

    pub(crate) fn check_grid(&self, grid: &Grid) -> Result<()> {
        match self.entries.last() {
            Some(&(p, _)) if p >= grid.len() => {
                Err(Error::GridMismatch("mask refers to nodes outside the grid".into()))
            }
            _ => Ok(()),
        }
    }
}
