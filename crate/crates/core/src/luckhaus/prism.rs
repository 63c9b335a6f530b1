//! Filling the annulus prism by prism.
//!
//! Over a sample on the 1-skeleton the value is given by an explicit radial
//! rule. Over a face, the prism is identified with the unit box in
//! `(ξ, η, τ)` with `τ = (1 - |x|) / λ`, and a point takes the value of the
//! box boundary where the ray from the box centre through it exits
//! (0-homogeneous extension).

use rayon::prelude::*;

use super::sampling::MeshSampling;
use crate::manifold::{Potential, TargetPoint};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Rule {
    /// `u + τ (w - u)` across the whole layer.
    Linear,
    /// `u + 2τ (π(u) - u)` for `τ ≤ 1/2`, then the geodesic from `π(u)` to
    /// the inner value.
    TwoStage,
}

pub(crate) struct Prisms<'a> {
    pub sampling: &'a MeshSampling,
    pub potential: &'a Potential,
    pub k: usize,
    /// Outer trace, every sample.
    pub outer: &'a [f64],
    /// `π_N` of the outer trace; read on skeleton samples only.
    pub projected: &'a [f64],
    /// `N`-valued inner trace, every sample.
    pub inner: &'a [f64],
    pub rule: Rule,
}

const BLOCK: usize = 1024;

impl Prisms<'_> {
    fn pt(&self, data: &[f64], i: usize) -> TargetPoint {
        TargetPoint::new(&data[i * self.k..(i + 1) * self.k])
    }

    fn geo(&self, t: f64, a: TargetPoint, b: TargetPoint) -> Result<TargetPoint> {
        if t <= 0.0 {
            Ok(a)
        } else if t >= 1.0 {
            Ok(b)
        } else {
            self.potential.geodesic(t, &a, &b)
        }
    }

    fn edge_rule(&self, tau: f64, u: TargetPoint, p: TargetPoint, w: TargetPoint) -> Result<TargetPoint> {
        match self.rule {
            Rule::Linear => Ok(u + tau * (w - u)),
            Rule::TwoStage if tau <= 0.5 => Ok(u + (2.0 * tau) * (p - u)),
            Rule::TwoStage => self.geo(2.0 * tau - 1.0, p, w),
        }
    }

    /// Value over sample `i` at depth `τ ∈ [0, 1]`.
    pub fn value(&self, i: usize, tau: f64) -> Result<TargetPoint> {
        // both traces are reproduced exactly
        if tau <= 0.0 {
            return Ok(self.pt(self.outer, i));
        }
        if tau >= 1.0 {
            return Ok(self.pt(self.inner, i));
        }
        if self.sampling.on_skeleton(i) {
            return self.edge_rule(tau, self.pt(self.outer, i), self.pt(self.projected, i), self.pt(self.inner, i));
        }
        let (face, a, b) = self.sampling.owner(i);
        let s = self.sampling.samples_per_cell() as f64;
        self.box_value(face, [a as f64 / s, b as f64 / s, tau])
    }

    fn box_value(&self, face: usize, y: [f64; 3]) -> Result<TargetPoint> {
        let mut d = [y[0] - 0.5, y[1] - 0.5, y[2] - 0.5];
        let mut m = d.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        if m < 1e-14 {
            // the centre itself: take the ray towards the outer face
            d = [0.0, 0.0, -0.5];
            m = 0.5;
        }
        let sc = 0.5 / m;
        let e = [0.5 + sc * d[0], 0.5 + sc * d[1], 0.5 + sc * d[2]];
        let axis = (0..3).find(|&j| d[j].abs() == m).expect("maximum attained");
        match axis {
            2 if d[2] < 0.0 => Ok(self.bilinear(face, e[0], e[1])),
            2 => self.geodesic_bilinear(face, e[0], e[1]),
            0 => self.lateral(face, 0, if d[0] < 0.0 { 0 } else { self.sampling.samples_per_cell() }, e[1], e[2]),
            _ => self.lateral(face, 1, if d[1] < 0.0 { 0 } else { self.sampling.samples_per_cell() }, e[0], e[2]),
        }
    }

    /// Lattice cell and fraction of a chart coordinate in `[0, 1]`.
    fn locate(&self, x: f64) -> (usize, f64) {
        let s = self.sampling.samples_per_cell();
        let t = (x * s as f64).clamp(0.0, s as f64);
        let j = (t.floor() as usize).min(s - 1);
        let fr = t - j as f64;
        (j, if fr < 1e-13 { 0.0 } else if fr > 1.0 - 1e-13 { 1.0 } else { fr })
    }

    fn bilinear(&self, face: usize, xi: f64, eta: f64) -> TargetPoint {
        let (a, fa) = self.locate(xi);
        let (b, fb) = self.locate(eta);
        let sm = |da, db| self.pt(self.outer, self.sampling.sample(face, a + da, b + db));
        let r0 = sm(0, 0) + fa * (sm(1, 0) - sm(0, 0));
        let r1 = sm(0, 1) + fa * (sm(1, 1) - sm(0, 1));
        r0 + fb * (r1 - r0)
    }

    fn geodesic_bilinear(&self, face: usize, xi: f64, eta: f64) -> Result<TargetPoint> {
        let (a, fa) = self.locate(xi);
        let (b, fb) = self.locate(eta);
        let sm = |da, db| self.pt(self.inner, self.sampling.sample(face, a + da, b + db));
        let r0 = self.geo(fa, sm(0, 0), sm(1, 0))?;
        let r1 = self.geo(fa, sm(0, 1), sm(1, 1))?;
        self.geo(fb, r0, r1)
    }

    /// Side of the box where chart coordinate `fixed_axis` equals `fixed`
    /// (a lattice index), at position `along` on the edge and depth `tau`.
    fn lateral(&self, face: usize, fixed_axis: usize, fixed: usize, along: f64, tau: f64) -> Result<TargetPoint> {
        let (j, fr) = self.locate(along);
        let idx = |o: usize| {
            if fixed_axis == 0 {
                self.sampling.sample(face, fixed, j + o)
            } else {
                self.sampling.sample(face, j + o, fixed)
            }
        };
        let (i0, i1) = (idx(0), idx(1));
        let u0 = self.pt(self.outer, i0);
        let u = u0 + fr * (self.pt(self.outer, i1) - u0);
        let inner = || self.geo(fr, self.pt(self.inner, i0), self.pt(self.inner, i1));
        let projected = || self.geo(fr, self.pt(self.projected, i0), self.pt(self.projected, i1));
        match self.rule {
            Rule::Linear => {
                let w = inner()?;
                self.edge_rule(tau, u, w, w)
            }
            // the inner trace is only read on the geodesic half
            Rule::TwoStage if tau <= 0.5 => self.edge_rule(tau, u, projected()?, u),
            Rule::TwoStage => self.edge_rule(tau, u, projected()?, inner()?),
        }
    }

    /// All layers `t = 0..=layers`, laid out `(t * n + i) * k + c`. The first
    /// failing sample (in layout order) is reported through `fail`.
    pub fn fill(&self, layers: usize, fail: impl Fn(usize, Error) -> Error + Sync) -> Result<Vec<f64>> {
        let n = self.sampling.len();
        let k = self.k;
        let mut values = vec![0.0; (layers + 1) * n * k];
        let errors: Vec<Option<(usize, Error)>> = values
            .par_chunks_mut(BLOCK * k)
            .enumerate()
            .map(|(blk, chunk)| {
                for (o, slot) in chunk.chunks_mut(k).enumerate() {
                    let g = blk * BLOCK + o;
                    let (t, i) = (g / n, g % n);
                    match self.value(i, t as f64 / layers as f64) {
                        Ok(z) => slot.copy_from_slice(z.as_slice()),
                        Err(e) => return Some((i, e)),
                    }
                }
                None
            })
            .collect();
        match errors.into_iter().flatten().next() {
            Some((i, e)) => Err(fail(i, e)),
            None => Ok(values),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antipodal_inner_value_fails_at_its_sample() {
        let samp = MeshSampling::new(1, 3).unwrap();
        let pot = Potential::ginzburg_landau();
        let n = samp.len();
        let e1 = [1.0, 0.0, 0.0];
        let outer: Vec<f64> = (0..n).flat_map(|_| e1).collect();
        let mut inner = outer.clone();
        inner[0] = -1.0;
        assert!(samp.on_skeleton(0));
        let prisms = Prisms {
            sampling: &samp,
            potential: &pot,
            k: 3,
            outer: &outer,
            projected: &outer,
            inner: &inner,
            rule: Rule::TwoStage,
        };
        let err = prisms
            .fill(3, |i, e| Error::Construction {
                sample: i,
                reason: e.to_string(),
            })
            .unwrap_err();
        assert!(matches!(err, Error::Construction { sample: 0, .. }), "{err}");
    }

    #[test]
    fn linear_rule_interpolates_over_edges() {
        let samp = MeshSampling::new(1, 3).unwrap();
        let pot = Potential::ginzburg_landau();
        let n = samp.len();
        let outer: Vec<f64> = (0..n).flat_map(|_| [0.0, 0.0, 2.0]).collect();
        let inner: Vec<f64> = (0..n).flat_map(|_| [0.0, 0.0, 1.0]).collect();
        let prisms = Prisms {
            sampling: &samp,
            potential: &pot,
            k: 3,
            outer: &outer,
            projected: &inner,
            inner: &inner,
            rule: Rule::Linear,
        };
        let v = prisms.value(0, 0.25).unwrap();
        assert!((v.as_slice()[2] - 1.75).abs() < 1e-15);
    }
}
