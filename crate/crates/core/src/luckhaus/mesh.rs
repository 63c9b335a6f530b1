use std::collections::HashMap;
use std::f64::consts::FRAC_PI_4;

use serde::Serialize;

use crate::{Error, Result};

/// Which cube face a cell lies on and where: cube axis, side (`±1`) and the
/// cell position `(p, q)` along the two tangential axes `axis + 1`, `axis + 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FaceChart {
    pub axis: usize,
    pub side: i8,
    pub cell: [usize; 2],
}

/// Equiangular cube-sphere complex of `∂B_1` at scale `λ = 2^-ν`.
///
/// Cell boundaries are great-circle arcs. Each face is charted by equal
/// angular coordinates onto a square of side `λ`.
#[derive(Clone, Debug)]
pub struct SphereMesh {
    nu: u32,
    vertices: Vec<[f64; 3]>,
    edges: Vec<[usize; 2]>,
    faces: Vec<[usize; 4]>,
    charts: Vec<FaceChart>,
}

/// Geometry of the mesh relative to the nominal scale `λ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeshQuality {
    /// Extreme face areas divided by `λ²`.
    pub min_area_ratio: f64,
    pub max_area_ratio: f64,
    /// Extreme edge arc lengths divided by `λ`.
    pub min_edge_ratio: f64,
    pub max_edge_ratio: f64,
    /// Extreme singular values of the face charts (square of side `λ` to
    /// the sphere), sampled at corners and centres.
    pub min_chart_stretch: f64,
    pub max_chart_stretch: f64,
    /// Total area; `4π` up to rounding.
    pub total_area: f64,
}

pub const MAX_NU: u32 = 6;

/// Tangential axes of a cube face.
pub(crate) fn tangential(axis: usize) -> [usize; 2] {
    [(axis + 1) % 3, (axis + 2) % 3]
}

/// Point of the unit sphere for an integer lattice point of the cube surface
/// `[0, n]^3`.
pub(crate) fn lattice_point(key: [u32; 3], n: u32) -> [f64; 3] {
    let mut c = [0.0; 3];
    for (ci, &kv) in c.iter_mut().zip(&key) {
        *ci = if kv == 0 {
            -1.0
        } else if kv == n {
            1.0
        } else {
            (FRAC_PI_4 * (2.0 * kv as f64 / n as f64 - 1.0)).tan()
        };
    }
    normalize(c)
}

/// Lattice key of the sample `(a, b)` of a face cell with `s` samples per
/// cell edge.
pub(crate) fn cell_key(chart: &FaceChart, a: usize, b: usize, s: usize, n: u32) -> [u32; 3] {
    let [u, v] = tangential(chart.axis);
    let mut key = [0u32; 3];
    key[chart.axis] = if chart.side > 0 { n } else { 0 };
    key[u] = (chart.cell[0] * s + a) as u32;
    key[v] = (chart.cell[1] * s + b) as u32;
    key
}

/// Face charts in construction order: axis, then side, then cell.
pub(crate) fn charts(m: usize) -> Vec<FaceChart> {
    let mut out = Vec::with_capacity(6 * m * m);
    for axis in 0..3 {
        for side in [-1i8, 1] {
            for p in 0..m {
                for q in 0..m {
                    out.push(FaceChart {
                        axis,
                        side,
                        cell: [p, q],
                    });
                }
            }
        }
    }
    out
}

pub fn build_sphere_mesh(nu: u32) -> Result<SphereMesh> {
    if !(1..=MAX_NU).contains(&nu) {
        return Err(Error::domain(format!("mesh level {nu} outside 1..={MAX_NU}")));
    }
    let m = 1usize << nu;
    let n = m as u32;
    let charts = charts(m);
    let mut index: HashMap<[u32; 3], usize> = HashMap::new();
    let mut vertices = Vec::new();
    let mut edge_index: HashMap<[usize; 2], usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut faces = Vec::with_capacity(charts.len());
    for chart in &charts {
        // counter-clockwise in the (u, v) chart
        let corners = [(0, 0), (1, 0), (1, 1), (0, 1)].map(|(a, b)| {
            let key = cell_key(chart, a, b, 1, n);
            *index.entry(key).or_insert_with(|| {
                vertices.push(lattice_point(key, n));
                vertices.len() - 1
            })
        });
        for i in 0..4 {
            let (x, y) = (corners[i], corners[(i + 1) % 4]);
            let key = [x.min(y), x.max(y)];
            edge_index.entry(key).or_insert_with(|| {
                edges.push(key);
                edges.len() - 1
            });
        }
        faces.push(corners);
    }
    Ok(SphereMesh {
        nu,
        vertices,
        edges,
        faces,
        charts,
    })
}

impl SphereMesh {
    pub fn nu(&self) -> u32 {
        self.nu
    }

    pub fn lambda(&self) -> f64 {
        (-(self.nu as f64)).exp2()
    }

    /// Cells along one edge of the cube, `2^ν`.
    pub fn cells_per_edge(&self) -> usize {
        1 << self.nu
    }

    pub fn vertices(&self) -> &[[f64; 3]] {
        &self.vertices
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn faces(&self) -> &[[usize; 4]] {
        &self.faces
    }

    pub fn charts(&self) -> &[FaceChart] {
        &self.charts
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// Exact area of a face (a geodesic quadrilateral) by angle excess.
    pub fn face_area(&self, face: usize) -> f64 {
        let c = self.faces[face].map(|v| self.vertices[v]);
        let mut angles = 0.0;
        for i in 0..4 {
            let a = c[i];
            let t1 = tangent(a, c[(i + 1) % 4]);
            let t2 = tangent(a, c[(i + 3) % 4]);
            angles += (dot(t1, t2) / (norm(t1) * norm(t2))).clamp(-1.0, 1.0).acos();
        }
        angles - 2.0 * std::f64::consts::PI
    }

    pub fn edge_length(&self, edge: usize) -> f64 {
        let [a, b] = self.edges[edge];
        dot(self.vertices[a], self.vertices[b]).clamp(-1.0, 1.0).acos()
    }

    /// Point of face `face` at chart coordinates `(ξ, η) ∈ [0, 1]²`.
    pub fn chart_point(&self, face: usize, xi: f64, eta: f64) -> [f64; 3] {
        let chart = &self.charts[face];
        let m = self.cells_per_edge() as f64;
        let [u, v] = tangential(chart.axis);
        let mut c = [0.0; 3];
        c[chart.axis] = chart.side as f64;
        c[u] = (FRAC_PI_4 * (2.0 * (chart.cell[0] as f64 + xi) / m - 1.0)).tan();
        c[v] = (FRAC_PI_4 * (2.0 * (chart.cell[1] as f64 + eta) / m - 1.0)).tan();
        normalize(c)
    }

    pub fn quality(&self) -> MeshQuality {
        let lambda = self.lambda();
        let areas: Vec<f64> = (0..self.faces.len()).map(|f| self.face_area(f)).collect();
        let lengths: Vec<f64> = (0..self.edges.len()).map(|e| self.edge_length(e)).collect();
        let (mut smin, mut smax) = (f64::INFINITY, 0.0f64);
        let d = 1e-6;
        for f in 0..self.faces.len() {
            for (xi, eta) in [(d, d), (1.0 - d, d), (1.0 - d, 1.0 - d), (d, 1.0 - d), (0.5, 0.5)] {
                let p = self.chart_point(f, xi, eta);
                let px = self.chart_point(f, xi + d, eta);
                let py = self.chart_point(f, xi, eta + d);
                // the chart square has side λ, so scale derivatives by 1/λ
                let jx = sub(px, p).map(|x| x / (d * lambda));
                let jy = sub(py, p).map(|x| x / (d * lambda));
                let (g11, g12, g22) = (dot(jx, jx), dot(jx, jy), dot(jy, jy));
                let tr = g11 + g22;
                let disc = ((g11 - g22).powi(2) + 4.0 * g12 * g12).sqrt();
                smax = smax.max(((tr + disc) / 2.0).sqrt());
                smin = smin.min(((tr - disc) / 2.0).max(0.0).sqrt());
            }
        }
        let fold = |v: &[f64]| {
            v.iter()
                .fold((f64::INFINITY, 0.0f64), |(lo, hi), &x| (lo.min(x), hi.max(x)))
        };
        let (amin, amax) = fold(&areas);
        let (lmin, lmax) = fold(&lengths);
        MeshQuality {
            min_area_ratio: amin / (lambda * lambda),
            max_area_ratio: amax / (lambda * lambda),
            min_edge_ratio: lmin / lambda,
            max_edge_ratio: lmax / lambda,
            min_chart_stretch: smin,
            max_chart_stretch: smax,
            total_area: areas.iter().sum(),
        }
    }
}

pub(crate) fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

fn normalize(a: [f64; 3]) -> [f64; 3] {
    let n = norm(a);
    a.map(|x| x / n)
}

/// Direction of the great circle from `a` towards `b`, tangent at `a`.
fn tangent(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    let c = dot(a, b);
    [b[0] - c * a[0], b[1] - c * a[1], b[2] - c * a[2]]
}
