use std::collections::HashMap;

use super::mesh::{build_sphere_mesh, cell_key, lattice_point, SphereMesh};
use crate::manifold::TargetPoint;
use crate::{Error, Result};

/// Fine sampling of the mesh: every face carries an `(s + 1) × (s + 1)`
/// lattice in its chart; lattice points on shared edges are shared.
#[derive(Clone, Debug)]
pub struct MeshSampling {
    mesh: SphereMesh,
    s: usize,
    points: Vec<[f64; 3]>,
    /// Sample index of `(face, a, b)` at `face * (s + 1)^2 + a * (s + 1) + b`.
    cells: Vec<usize>,
    /// Sample lies on the 1-skeleton.
    skeleton: Vec<bool>,
    /// First face containing the sample and its chart position there.
    owner: Vec<(usize, usize, usize)>,
}

impl MeshSampling {
    /// `s` samples per cell edge, at least 2.
    pub fn new(nu: u32, s: usize) -> Result<Self> {
        if s < 2 {
            return Err(Error::domain(format!("need at least 2 samples per cell edge, got {s}")));
        }
        let mesh = build_sphere_mesh(nu)?;
        let n = (mesh.cells_per_edge() * s) as u32;
        let mut index: HashMap<[u32; 3], usize> = HashMap::new();
        let mut points = Vec::new();
        let mut skeleton = Vec::new();
        let mut owner = Vec::new();
        let mut cells = Vec::with_capacity(mesh.faces().len() * (s + 1) * (s + 1));
        for (f, chart) in mesh.charts().iter().enumerate() {
            for a in 0..=s {
                for b in 0..=s {
                    let key = cell_key(chart, a, b, s, n);
                    let i = *index.entry(key).or_insert_with(|| {
                        points.push(lattice_point(key, n));
                        skeleton.push(a == 0 || a == s || b == 0 || b == s);
                        owner.push((f, a, b));
                        points.len() - 1
                    });
                    cells.push(i);
                }
            }
        }
        Ok(MeshSampling {
            mesh,
            s,
            points,
            cells,
            skeleton,
            owner,
        })
    }

    pub fn mesh(&self) -> &SphereMesh {
        &self.mesh
    }

    pub fn lambda(&self) -> f64 {
        self.mesh.lambda()
    }

    pub fn samples_per_cell(&self) -> usize {
        self.s
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    #[inline]
    pub fn sample(&self, face: usize, a: usize, b: usize) -> usize {
        let w = self.s + 1;
        self.cells[face * w * w + a * w + b]
    }

    pub fn on_skeleton(&self, i: usize) -> bool {
        self.skeleton[i]
    }

    pub fn owner(&self, i: usize) -> (usize, usize, usize) {
        self.owner[i]
    }
}

/// Values on the samples of a [`MeshSampling`], stored `i * k + a`.
#[derive(Clone, Debug, PartialEq)]
pub struct MeshField {
    nu: u32,
    s: usize,
    k: usize,
    values: Vec<f64>,
}

impl MeshField {
    pub fn from_fn(
        sampling: &MeshSampling,
        k: usize,
        mut f: impl FnMut([f64; 3]) -> TargetPoint,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(sampling.len() * k);
        for &x in sampling.points() {
            let z = f(x);
            if z.k() != k {
                return Err(Error::domain(format!("value has {} components, expected {k}", z.k())));
            }
            values.extend_from_slice(z.as_slice());
        }
        Self::from_values(sampling, k, values)
    }

    pub fn from_values(sampling: &MeshSampling, k: usize, values: Vec<f64>) -> Result<Self> {
        if k == 0 || values.len() != sampling.len() * k {
            return Err(Error::domain(format!(
                "{} values do not fit {} samples with k = {k}",
                values.len(),
                sampling.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("mesh field has non-finite values"));
        }
        Ok(MeshField {
            nu: sampling.mesh().nu(),
            s: sampling.samples_per_cell(),
            k,
            values,
        })
    }

    pub(crate) fn raw(nu: u32, s: usize, k: usize, values: Vec<f64>) -> Self {
        MeshField { nu, s, k, values }
    }

    pub fn nu(&self) -> u32 {
        self.nu
    }

    pub fn samples_per_cell(&self) -> usize {
        self.s
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len() / self.k
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn at(&self, i: usize) -> &[f64] {
        &self.values[i * self.k..(i + 1) * self.k]
    }

    pub fn point(&self, i: usize) -> TargetPoint {
        TargetPoint::new(self.at(i))
    }

    pub(crate) fn check(&self, sampling: &MeshSampling) -> Result<()> {
        if self.nu != sampling.mesh().nu()
            || self.s != sampling.samples_per_cell()
            || self.len() != sampling.len()
        {
            return Err(Error::GridMismatch(format!(
                "mesh field (level {}, {} samples per cell) does not match the sampling \
                 (level {}, {} samples per cell)",
                self.nu,
                self.s,
                sampling.mesh().nu(),
                sampling.samples_per_cell()
            )));
        }
        Ok(())
    }
}

/// Values on `B_1 \ B_{1-λ}`: layer `t = 0..=L` sits at radius
/// `1 - λ t / L` and carries one value per sphere sample, stored
/// `(t * n + i) * k + a`.
#[derive(Clone, Debug, PartialEq)]
pub struct AnnulusField {
    nu: u32,
    s: usize,
    layers: usize,
    k: usize,
    values: Vec<f64>,
}

impl AnnulusField {
    pub(crate) fn raw(nu: u32, s: usize, layers: usize, k: usize, values: Vec<f64>) -> Self {
        AnnulusField {
            nu,
            s,
            layers,
            k,
            values,
        }
    }

    pub fn nu(&self) -> u32 {
        self.nu
    }

    pub fn lambda(&self) -> f64 {
        (-(self.nu as f64)).exp2()
    }

    pub fn samples_per_cell(&self) -> usize {
        self.s
    }

    /// Number of radial intervals `L`; there are `L + 1` layers.
    pub fn layers(&self) -> usize {
        self.layers
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Samples per layer.
    pub fn samples(&self) -> usize {
        self.values.len() / (self.k * (self.layers + 1))
    }

    pub fn radius(&self, t: usize) -> f64 {
        1.0 - self.lambda() * t as f64 / self.layers as f64
    }

    #[inline]
    pub fn at(&self, t: usize, i: usize) -> &[f64] {
        let n = self.samples();
        let o = (t * n + i) * self.k;
        &self.values[o..o + self.k]
    }

    /// One layer as a mesh field on the unit sphere.
    pub fn layer(&self, t: usize) -> MeshField {
        let n = self.samples();
        let o = t * n * self.k;
        MeshField::raw(self.nu, self.s, self.k, self.values[o..o + n * self.k].to_vec())
    }
}
