use rayon::prelude::*;

use super::grid::Grid;
use crate::manifold::{TargetPoint, MAX_K};
use crate::{Error, Result};

/// A map from grid nodes to `R^k`, stored node-major: component `a` of node
/// `p` lives at `values[p * k + a]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    grid: Grid,
    k: usize,
    values: Vec<f64>,
    boundary: Vec<bool>,
}

impl Field {
    pub fn zeros(grid: Grid, k: usize) -> Result<Self> {
        if !(1..=MAX_K).contains(&k) {
            return Err(Error::domain(format!("target dimension {k} unsupported")));
        }
        let n = grid.len();
        let boundary = grid.dirichlet_nodes();
        Ok(Field {
            grid,
            k,
            values: vec![0.0; n * k],
            boundary,
        })
    }

    /// Samples `f` at every node position.
    pub fn from_fn<F>(grid: Grid, k: usize, f: F) -> Result<Self>
    where
        F: Fn([f64; 3]) -> TargetPoint + Sync,
    {
        let mut field = Self::zeros(grid, k)?;
        let g = field.grid.clone();
        field
            .values
            .par_chunks_mut(k)
            .enumerate()
            .try_for_each(|(p, out)| {
                let z = f(g.position(p));
                if z.k() != k {
                    return Err(Error::GridMismatch(format!(
                        "sampler returned k = {}, expected {k}",
                        z.k()
                    )));
                }
                out.copy_from_slice(z.as_slice());
                Ok(())
            })?;
        field.check_finite()?;
        Ok(field)
    }

    pub fn from_values(grid: Grid, k: usize, values: Vec<f64>) -> Result<Self> {
        let mut field = Self::zeros(grid, k)?;
        if values.len() != field.values.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for {} nodes of dimension {k}",
                values.len(),
                field.grid.len()
            )));
        }
        field.values = values;
        field.check_finite()?;
        Ok(field)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn at(&self, p: usize) -> &[f64] {
        &self.values[p * self.k..(p + 1) * self.k]
    }

    pub fn point(&self, p: usize) -> TargetPoint {
        TargetPoint::new(self.at(p))
    }

    pub fn set(&mut self, p: usize, z: &TargetPoint) {
        let k = self.k;
        self.values[p * k..(p + 1) * k].copy_from_slice(z.as_slice());
    }

    /// Nodes whose values are held fixed (Dirichlet data).
    pub fn boundary_mask(&self) -> &[bool] {
        &self.boundary
    }

    pub fn set_boundary_mask(&mut self, mask: Vec<bool>) -> Result<()> {
        if mask.len() != self.grid.len() {
            return Err(Error::GridMismatch("boundary mask length".into()));
        }
        self.boundary = mask;
        Ok(())
    }

    pub fn check_finite(&self) -> Result<()> {
        match self.values.iter().position(|v| !v.is_finite()) {
            None => Ok(()),
            Some(i) => Err(Error::domain(format!(
                "non-finite value at node {}",
                i / self.k
            ))),
        }
    }

    pub fn same_shape(&self, other: &Field) -> Result<()> {
        if self.k != other.k || !self.grid.compatible(&other.grid) {
            return Err(Error::GridMismatch(format!(
                "fields differ: k {} vs {}, dims {:?} vs {:?}",
                self.k,
                other.k,
                self.grid.dims(),
                other.grid.dims()
            )));
        }
        Ok(())
    }

    /// Nodal gradients, `k x 3` per node (`out[p*3k + a*3 + i] = ∂_i u_a`).
    pub fn gradient(&self) -> Vec<f64> {
        node_gradients(&self.grid, self.k, &self.values)
    }
}

/// Central differences inside, one-sided differences on the grid faces.
/// Writes `∂_i u_a` to `out[a * 3 + i]`.
#[inline]
pub(crate) fn node_gradient(grid: &Grid, k: usize, values: &[f64], p: usize, out: &mut [f64]) {
    let c = grid.coords(p);
    let dims = grid.dims();
    let h = grid.spacing();
    for i in 0..3 {
        let s = grid.stride(i);
        let (lo, hi, scale) = if c[i] == 0 {
            (p, p + s, 1.0 / h)
        } else if c[i] + 1 == dims[i] {
            (p - s, p, 1.0 / h)
        } else {
            (p - s, p + s, 0.5 / h)
        };
        for a in 0..k {
            out[a * 3 + i] = (values[hi * k + a] - values[lo * k + a]) * scale;
        }
    }
}

pub(crate) fn node_gradients(grid: &Grid, k: usize, values: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; grid.len() * 3 * k];
    out.par_chunks_mut(3 * k)
        .enumerate()
        .for_each(|(p, g)| node_gradient(grid, k, values, p, g));
    out
}
