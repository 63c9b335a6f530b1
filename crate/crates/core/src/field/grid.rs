use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Physical domain carried by a grid. The grid itself is always a box of
/// nodes; the domain decides which nodes are interior for Dirichlet problems.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Domain {
    Box,
    Ball { center: [f64; 3], radius: f64 },
    /// `B_R(center) ∩ {z > center_z}`; the flat face lies on `z = center_z`.
    HalfBall { center: [f64; 3], radius: f64 },
}

/// Uniform node-centred grid in three dimensions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    dims: [usize; 3],
    spacing: f64,
    origin: [f64; 3],
    domain: Domain,
}

impl Grid {
    pub fn new(dims: [usize; 3], spacing: f64, origin: [f64; 3], domain: Domain) -> Result<Self> {
        if dims.iter().any(|&n| n < 3) {
            return Err(Error::domain(format!(
                "grid needs at least 3 nodes per axis, got {dims:?}"
            )));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::domain(format!("grid spacing {spacing} must be positive")));
        }
        Ok(Grid {
            dims,
            spacing,
            origin,
            domain,
        })
    }

    /// `nodes^3` grid covering `[-half_width, half_width]^3`.
    pub fn centered_cube(nodes: usize, half_width: f64, domain: Domain) -> Result<Self> {
        if nodes < 3 {
            return Err(Error::domain(format!("grid needs at least 3 nodes per axis, got {nodes}")));
        }
        let h = 2.0 * half_width / (nodes - 1) as f64;
        Self::new([nodes; 3], h, [-half_width; 3], domain)
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn origin(&self) -> [f64; 3] {
        self.origin
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn with_domain(&self, domain: Domain) -> Self {
        Grid {
            domain,
            ..self.clone()
        }
    }

    pub fn len(&self) -> usize {
        self.dims[0] * self.dims[1] * self.dims[2]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Opposite corner of the node box.
    pub fn upper(&self) -> [f64; 3] {
        std::array::from_fn(|a| self.origin[a] + (self.dims[a] - 1) as f64 * self.spacing)
    }

    pub fn diameter(&self) -> f64 {
        let u = self.upper();
        (0..3)
            .map(|a| (u[a] - self.origin[a]).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Row-major node index, the last axis varying fastest.
    #[inline]
    pub fn index(&self, i: usize, j: usize, l: usize) -> usize {
        (i * self.dims[1] + j) * self.dims[2] + l
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> [usize; 3] {
        let l = idx % self.dims[2];
        let rest = idx / self.dims[2];
        [rest / self.dims[1], rest % self.dims[1], l]
    }

    /// Index stride of one step along `axis`.
    #[inline]
    pub fn stride(&self, axis: usize) -> usize {
        match axis {
            0 => self.dims[1] * self.dims[2],
            1 => self.dims[2],
            _ => 1,
        }
    }

    #[inline]
    pub fn position(&self, idx: usize) -> [f64; 3] {
        let c = self.coords(idx);
        std::array::from_fn(|a| self.origin[a] + c[a] as f64 * self.spacing)
    }

    #[inline]
    pub fn on_grid_boundary(&self, idx: usize) -> bool {
        let c = self.coords(idx);
        (0..3).any(|a| c[a] == 0 || c[a] + 1 == self.dims[a])
    }

    /// Trapezoid quadrature weight of a node: `h^3` halved once per axis on
    /// which the node sits on the boundary.
    #[inline]
    pub fn node_weight(&self, idx: usize) -> f64 {
        let c = self.coords(idx);
        let mut w = self.spacing.powi(3);
        for a in 0..3 {
            if c[a] == 0 || c[a] + 1 == self.dims[a] {
                w *= 0.5;
            }
        }
        w
    }

    /// Surface quadrature weight of a node on the box faces (0 inside).
    pub fn surface_weight(&self, idx: usize) -> f64 {
        let c = self.coords(idx);
        let h2 = self.spacing * self.spacing;
        let mut total = 0.0;
        for a in 0..3 {
            if c[a] == 0 || c[a] + 1 == self.dims[a] {
                let mut w = h2;
                for b in 0..3 {
                    if b != a && (c[b] == 0 || c[b] + 1 == self.dims[b]) {
                        w *= 0.5;
                    }
                }
                // a node can lie on both opposite faces only if dims[a] == 1
                total += w;
            }
        }
        total
    }

    /// Whether a point lies strictly inside the physical domain.
    pub fn inside_domain(&self, x: [f64; 3]) -> bool {
        let tol = 1e-12 * self.spacing;
        match self.domain {
            Domain::Box => {
                let u = self.upper();
                (0..3).all(|a| x[a] > self.origin[a] + tol && x[a] < u[a] - tol)
            }
            Domain::Ball { center, radius } => dist(x, center) < radius - tol,
            Domain::HalfBall { center, radius } => {
                dist(x, center) < radius - tol && x[2] > center[2] + tol
            }
        }
    }

    /// Whether `B_r(center)` (or its upper half `z >= center_z` when `half`)
    /// lies in the closed physical domain.
    pub fn ball_fits(&self, center: [f64; 3], r: f64, half: bool) -> bool {
        let tol = 1e-9 * self.spacing;
        let (lo, hi) = (self.origin, self.upper());
        let in_box = (0..3).all(|a| {
            let below = if half && a == 2 { center[a] } else { center[a] - r };
            below >= lo[a] - tol && center[a] + r <= hi[a] + tol
        });
        in_box
            && match self.domain {
                Domain::Box => true,
                Domain::Ball { center: c, radius } => dist(center, c) + r <= radius + tol,
                Domain::HalfBall { center: c, radius } => {
                    dist(center, c) + r <= radius + tol
                        && (if half { center[2] } else { center[2] - r }) >= c[2] - tol
                }
            }
    }

    /// Nodes constrained by Dirichlet data: all nodes not strictly inside the domain.
    pub fn dirichlet_nodes(&self) -> Vec<bool> {
        (0..self.len())
            .map(|i| match self.domain {
                Domain::Box => self.on_grid_boundary(i),
                _ => !self.inside_domain(self.position(i)),
            })
            .collect()
    }

    pub fn compatible(&self, other: &Grid) -> bool {
        self.dims == other.dims
            && (self.spacing - other.spacing).abs() <= 1e-14 * self.spacing
            && (0..3).all(|a| (self.origin[a] - other.origin[a]).abs() <= 1e-12 * self.spacing)
    }
}

#[inline]
pub(crate) fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_roundtrip() {
        let g = Grid::new([4, 5, 6], 0.5, [0.0; 3], Domain::Box).unwrap();
        for idx in 0..g.len() {
            let [i, j, l] = g.coords(idx);
            assert_eq!(g.index(i, j, l), idx);
        }
        assert_eq!(g.stride(0), 30);
    }

    #[test]
    fn trapezoid_weights_sum_to_box_volume() {
        let g = Grid::new([5, 4, 7], 0.25, [0.0; 3], Domain::Box).unwrap();
        let vol: f64 = (0..g.len()).map(|i| g.node_weight(i)).sum();
        assert!((vol - 4.0 * 0.25 * 3.0 * 0.25 * 6.0 * 0.25).abs() < 1e-14);
        let area: f64 = (0..g.len()).map(|i| g.surface_weight(i)).sum();
        let (a, b, c) = (1.0, 0.75, 1.5);
        assert!((area - 2.0 * (a * b + b * c + a * c)).abs() < 1e-12);
    }

    #[test]
    fn too_small_grid_rejected() {
        assert!(Grid::new([2, 5, 5], 1.0, [0.0; 3], Domain::Box).is_err());
        assert!(Grid::new([3, 3, 3], 0.0, [0.0; 3], Domain::Box).is_err());
    }

    #[test]
    fn ball_dirichlet_nodes() {
        let g = Grid::centered_cube(
            9,
            1.0,
            Domain::Ball {
                center: [0.0; 3],
                radius: 0.8,
            },
        )
        .unwrap();
        let d = g.dirichlet_nodes();
        let centre = g.index(4, 4, 4);
        assert!(!d[centre]);
        assert!(d[0]);
    }
}
