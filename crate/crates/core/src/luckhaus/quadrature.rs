//! Isotropic energies on the sampled sphere and annulus. Each lattice cell
//! is treated as a bilinear (trilinear) element evaluated at its centre; the
//! potential uses the mean of the corner values.

use nalgebra::Matrix3;
use serde::Serialize;

use super::mesh::{dot, sub};
use super::sampling::MeshSampling;
use crate::manifold::Potential;
use crate::reduce;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct LayerEnergy {
    /// `∫ |∇u|²`
    pub dirichlet: f64,
    /// `∫ f(u)`, without the `ε⁻²` weight.
    pub potential: f64,
}

impl LayerEnergy {
    pub fn total(&self, epsilon: f64) -> f64 {
        self.dirichlet + self.potential / (epsilon * epsilon)
    }
}

/// Tangential energy of `values` (one `k`-vector per sample) on the sphere.
pub(crate) fn sphere_energy(
    sampling: &MeshSampling,
    values: &[f64],
    k: usize,
    potential: Option<&Potential>,
) -> LayerEnergy {
    let s = sampling.samples_per_cell();
    let faces = sampling.mesh().faces().len();
    let pts = sampling.points();
    let f = |i: usize| potential.map_or(0.0, |p| p.value(&values[i * k..(i + 1) * k]));
    let [d, p] = reduce::sum_n(faces * s * s, |c| {
        let (face, a, b) = (c / (s * s), (c / s) % s, c % s);
        let i = [
            sampling.sample(face, a, b),
            sampling.sample(face, a + 1, b),
            sampling.sample(face, a, b + 1),
            sampling.sample(face, a + 1, b + 1),
        ];
        let half = |x: [f64; 3], y: [f64; 3]| [0.5 * (x[0] + y[0]), 0.5 * (x[1] + y[1]), 0.5 * (x[2] + y[2])];
        let tx = half(sub(pts[i[1]], pts[i[0]]), sub(pts[i[3]], pts[i[2]]));
        let ty = half(sub(pts[i[2]], pts[i[0]]), sub(pts[i[3]], pts[i[1]]));
        let (g11, g12, g22) = (dot(tx, tx), dot(tx, ty), dot(ty, ty));
        let det = g11 * g22 - g12 * g12;
        let sq = det.sqrt();
        let mut quad = 0.0;
        for c in 0..k {
            let v = |j: usize| values[i[j] * k + c];
            let ux = 0.5 * (v(1) - v(0) + v(3) - v(2));
            let uy = 0.5 * (v(2) - v(0) + v(3) - v(1));
            quad += g22 * ux * ux - 2.0 * g12 * ux * uy + g11 * uy * uy;
        }
        let fm = 0.25 * (f(i[0]) + f(i[1]) + f(i[2]) + f(i[3]));
        [quad / sq, fm * sq]
    });
    LayerEnergy {
        dirichlet: d,
        potential: p,
    }
}

/// `∫ |u - v|²` over the sphere.
pub(crate) fn sphere_l2_distance_sq(sampling: &MeshSampling, u: &[f64], v: &[f64], k: usize) -> f64 {
    let diff: Vec<f64> = u.iter().zip(v).map(|(a, b)| a - b).collect();
    let s = sampling.samples_per_cell();
    let pts = sampling.points();
    reduce::sum(sampling.mesh().faces().len() * s * s, |c| {
        let (face, a, b) = (c / (s * s), (c / s) % s, c % s);
        let i = [
            sampling.sample(face, a, b),
            sampling.sample(face, a + 1, b),
            sampling.sample(face, a, b + 1),
            sampling.sample(face, a + 1, b + 1),
        ];
        let tx = sub(pts[i[1]], pts[i[0]]);
        let ty = sub(pts[i[2]], pts[i[0]]);
        let tx2 = sub(pts[i[3]], pts[i[2]]);
        let ty2 = sub(pts[i[3]], pts[i[1]]);
        let mx = [0.5 * (tx[0] + tx2[0]), 0.5 * (tx[1] + tx2[1]), 0.5 * (tx[2] + tx2[2])];
        let my = [0.5 * (ty[0] + ty2[0]), 0.5 * (ty[1] + ty2[1]), 0.5 * (ty[2] + ty2[2])];
        let area = (dot(mx, mx) * dot(my, my) - dot(mx, my).powi(2)).sqrt();
        let m: f64 = i
            .iter()
            .map(|&j| diff[j * k..(j + 1) * k].iter().map(|x| x * x).sum::<f64>())
            .sum();
        0.25 * m * area
    })
}

/// Energy of an annulus field given layer by layer: `values` is laid out
/// `(t * n + i) * k + c` with layer `t` at radius `1 - λ t / layers`.
/// `split` partitions the cells into those with `t < split` and the rest.
pub(crate) fn annulus_energy(
    sampling: &MeshSampling,
    values: &[f64],
    k: usize,
    layers: usize,
    lambda: f64,
    potential: &Potential,
    split: usize,
) -> (LayerEnergy, LayerEnergy) {
    let s = sampling.samples_per_cell();
    let n = sampling.len();
    let faces = sampling.mesh().faces().len();
    let pts = sampling.points();
    let radius = |t: usize| 1.0 - lambda * t as f64 / layers as f64;
    let cells = faces * s * s;
    let [d0, p0, d1, p1] = reduce::sum_n(cells * layers, |c| {
        let t = c / cells;
        let r = c % cells;
        let (face, a, b) = (r / (s * s), (r / s) % s, r % s);
        // corner (da, db, dt) at bit positions 0, 1, 2
        let mut pos = [[0.0; 3]; 8];
        let mut idx = [0usize; 8];
        for (j, (p, id)) in pos.iter_mut().zip(idx.iter_mut()).enumerate() {
            let (da, db, dt) = (j & 1, (j >> 1) & 1, (j >> 2) & 1);
            let i = sampling.sample(face, a + da, b + db);
            let rho = radius(t + dt);
            *p = pts[i].map(|x| rho * x);
            *id = (t + dt) * n + i;
        }
        let mut jac: Matrix3<f64> = Matrix3::zeros();
        for dir in 0..3 {
            let bit = 1 << dir;
            for j in (0..8).filter(|j| j & bit == 0) {
                let dlt = sub(pos[j | bit], pos[j]);
                for x in 0..3 {
                    jac[(x, dir)] += 0.25 * dlt[x];
                }
            }
        }
        let g = jac.transpose() * jac;
        let vol = g.determinant().max(0.0).sqrt();
        let ginv = g.try_inverse().unwrap_or_else(Matrix3::zeros);
        let mut quad = 0.0;
        for comp in 0..k {
            let mut du = [0.0; 3];
            for (dir, d) in du.iter_mut().enumerate() {
                let bit = 1 << dir;
                for j in (0..8).filter(|j| j & bit == 0) {
                    *d += 0.25 * (values[idx[j | bit] * k + comp] - values[idx[j] * k + comp]);
                }
            }
            for x in 0..3 {
                for y in 0..3 {
                    quad += du[x] * ginv[(x, y)] * du[y];
                }
            }
        }
        let fm = idx
            .iter()
            .map(|&id| potential.value(&values[id * k..(id + 1) * k]))
            .sum::<f64>()
            / 8.0;
        let (de, pe) = (quad * vol, fm * vol);
        if t < split {
            [de, pe, 0.0, 0.0]
        } else {
            [0.0, 0.0, de, pe]
        }
    });
    (
        LayerEnergy {
            dirichlet: d0,
            potential: p0,
        },
        LayerEnergy {
            dirichlet: d1,
            potential: p1,
        },
    )
}
