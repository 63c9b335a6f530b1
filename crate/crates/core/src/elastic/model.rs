use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::field::Grid;
use crate::manifold::s0_basis;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ElasticKind {
    /// Three-constant Landau-de Gennes density on Q-tensor coordinates.
    LandauDeGennes { l1: f64, l2: f64, l3: f64 },
    /// `W(ξ) = ξ^T A ξ` for a user-supplied symmetric `3k x 3k` matrix.
    GeneralConstant,
    /// `W(ξ) = scale |ξ|^2`.
    Isotropic { scale: f64 },
}

/// A positive definite quadratic form on gradients, `W(ξ) = Σ A[(α,i),(β,j)] ξ_i^α ξ_j^β`.
///
/// Gradients are `k x 3` arrays flattened as `ξ[α * 3 + i] = ∂_i u^α`; the
/// form is stored densely in the same ordering.
#[derive(Clone, Debug)]
pub struct ElasticModel {
    k: usize,
    kind: ElasticKind,
    form: Vec<f64>,
    lambda_min: f64,
    lambda_max: f64,
    /// `Some(c)` when the form is `c · I`.
    isotropic: Option<f64>,
    has_mixed: bool,
    weight: Option<Arc<Vec<f64>>>,
}

impl ElasticModel {
    pub fn landau_de_gennes(l1: f64, l2: f64, l3: f64) -> Result<Self> {
        let report = check_positivity(l1, l2, l3);
        if !report.holds {
            return Err(Error::domain(format!(
                "elastic constants ({l1}, {l2}, {l3}) not positive definite: {}",
                report.violations.join(", ")
            )));
        }
        Self::build(5, ElasticKind::LandauDeGennes { l1, l2, l3 }, ldg_form(l1, l2, l3))
    }

    pub fn isotropic(k: usize, scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::domain(format!("isotropic scale {scale} must be positive")));
        }
        let n = 3 * k;
        let mut form = vec![0.0; n * n];
        for d in 0..n {
            form[d * n + d] = scale;
        }
        Self::build(k, ElasticKind::Isotropic { scale }, form)
    }

    /// General constant coefficients; the matrix is symmetrized.
    pub fn general(k: usize, coefficients: Vec<f64>) -> Result<Self> {
        let n = 3 * k;
        if coefficients.len() != n * n {
            return Err(Error::domain(format!(
                "coefficient table needs {} entries for k = {k}, got {}",
                n * n,
                coefficients.len()
            )));
        }
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::domain("non-finite elastic coefficient"));
        }
        Self::build(k, ElasticKind::GeneralConstant, coefficients)
    }

    fn build(k: usize, kind: ElasticKind, mut form: Vec<f64>) -> Result<Self> {
        if !(1..=crate::manifold::MAX_K).contains(&k) {
            return Err(Error::domain(format!("target dimension {k} unsupported")));
        }
        let n = 3 * k;
        symmetrize(&mut form, n);
        let eig = DMatrix::from_row_slice(n, n, &form).symmetric_eigenvalues();
        let lambda_min = eig.min();
        let lambda_max = eig.max();
        if !(lambda_min > 0.0) {
            return Err(Error::domain(format!(
                "elastic form not positive definite (smallest eigenvalue {lambda_min:.3e})"
            )));
        }
        let isotropic = {
            let c = form[0];
            let iso = (0..n).all(|r| {
                (0..n).all(|s| form[r * n + s] == if r == s { c } else { 0.0 })
            });
            iso.then_some(c)
        };
        let has_mixed = (0..k).any(|a| {
            (0..3).any(|i| {
                (0..k).any(|b| (0..3).any(|j| i != j && form[(a * 3 + i) * n + b * 3 + j] != 0.0))
            })
        });
        Ok(ElasticModel {
            k,
            kind,
            form,
            lambda_min,
            lambda_max,
            isotropic,
            has_mixed,
            weight: None,
        })
    }

    /// Attaches a scalar weight `a(x)` given at the nodes of `grid`.
    /// Requires `‖1 - a‖_{C^1} <= 1/2` (sup norm plus sup of the discrete gradient).
    pub fn with_weight(mut self, grid: &Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "weight has {} values for {} nodes",
                values.len(),
                grid.len()
            )));
        }
        let dev = values.iter().map(|a| (1.0 - a).abs()).fold(0.0, f64::max);
        if !(dev <= 0.5) {
            return Err(Error::domain(format!(
                "weight leaves [1/2, 3/2] (sup |1 - a| = {dev})"
            )));
        }
        let grad = crate::field::node_gradients(grid, 1, &values);
        let slope = grad
            .chunks(3)
            .map(|g| (g[0] * g[0] + g[1] * g[1] + g[2] * g[2]).sqrt())
            .fold(0.0, f64::max);
        if dev + slope > 0.5 + 1e-12 {
            return Err(Error::domain(format!(
                "weight violates the C^1 bound: sup|1-a| + sup|∇a| = {}",
                dev + slope
            )));
        }
        self.weight = Some(Arc::new(values));
        Ok(self)
    }

    /// The same model multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::domain(format!("scale factor {c} must be positive")));
        }
        let kind = match self.kind {
            ElasticKind::LandauDeGennes { l1, l2, l3 } => ElasticKind::LandauDeGennes {
                l1: c * l1,
                l2: c * l2,
                l3: c * l3,
            },
            ElasticKind::Isotropic { scale } => ElasticKind::Isotropic { scale: c * scale },
            ElasticKind::GeneralConstant => ElasticKind::GeneralConstant,
        };
        Ok(ElasticModel {
            kind,
            form: self.form.iter().map(|a| c * a).collect(),
            lambda_min: c * self.lambda_min,
            lambda_max: c * self.lambda_max,
            isotropic: self.isotropic.map(|s| c * s),
            ..self.clone()
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn kind(&self) -> &ElasticKind {
        &self.kind
    }

    /// Dense `3k x 3k` form, row-major in gradient ordering.
    pub fn form(&self) -> &[f64] {
        &self.form
    }

    pub fn lambda_min(&self) -> f64 {
        self.lambda_min
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }

    pub fn isotropic_scale(&self) -> Option<f64> {
        self.isotropic
    }

    pub(crate) fn has_mixed(&self) -> bool {
        self.has_mixed
    }

    pub fn weight(&self) -> Option<&[f64]> {
        self.weight.as_deref().map(|v| v.as_slice())
    }

    #[inline]
    pub fn weight_at(&self, p: usize) -> f64 {
        self.weight.as_ref().map_or(1.0, |w| w[p])
    }

    /// `ξ^T A ξ`, without the spatial weight.
    pub fn density(&self, xi: &[f64]) -> f64 {
        if let Some(c) = self.isotropic {
            return c * xi.iter().map(|x| x * x).sum::<f64>();
        }
        let n = 3 * self.k;
        let mut total = 0.0;
        for r in 0..n {
            if xi[r] == 0.0 {
                continue;
            }
            let row = &self.form[r * n..(r + 1) * n];
            total += xi[r] * row.iter().zip(xi).map(|(a, x)| a * x).sum::<f64>();
        }
        total
    }

    /// `k x k` block `A[(·,i),(·,j)]`, row-major.
    pub(crate) fn block(&self, i: usize, j: usize) -> Vec<f64> {
        let (k, n) = (self.k, 3 * self.k);
        let mut out = vec![0.0; k * k];
        for a in 0..k {
            for b in 0..k {
                out[a * k + b] = self.form[(a * 3 + i) * n + b * 3 + j];
            }
        }
        out
    }

    /// The form with all same-direction blocks `i == j` removed.
    pub(crate) fn mixed_form(&self) -> Vec<f64> {
        let n = 3 * self.k;
        let mut out = self.form.clone();
        for r in 0..n {
            for s in 0..n {
                if r % 3 == s % 3 {
                    out[r * n + s] = 0.0;
                }
            }
        }
        out
    }
}

fn symmetrize(a: &mut [f64], n: usize) {
    for r in 0..n {
        for s in r + 1..n {
            let m = 0.5 * (a[r * n + s] + a[s * n + r]);
            a[r * n + s] = m;
            a[s * n + r] = m;
        }
    }
}

/// The symmetric `15 x 15` matrix of the three-constant density in `S_0`
/// coordinates.
pub(crate) fn ldg_form(l1: f64, l2: f64, l3: f64) -> Vec<f64> {
    let e = s0_basis();
    let n = 15;
    let mut a = vec![0.0; n * n];
    for al in 0..5 {
        for j in 0..3 {
            for be in 0..5 {
                for m in 0..3 {
                    let mut v = 0.0;
                    if al == be && j == m {
                        v += l1;
                    }
                    for i in 0..3 {
                        v += l2 * e[al][(i, m)] * e[be][(i, j)];
                        v += l3 * e[al][(i, j)] * e[be][(i, m)];
                    }
                    a[(al * 3 + j) * n + be * 3 + m] = v;
                }
            }
        }
    }
    symmetrize(&mut a, n);
    a
}

/// Pointwise three-constant density
/// `L1 |∇Q|^2 + L2 ∂_j Q_ik ∂_k Q_ij + L3 ∂_j Q_ij ∂_k Q_ik`
/// for a `5 x 3` coordinate gradient `g[α * 3 + j] = ∂_j q^α`.
pub fn ldg_density(g: &[f64], l1: f64, l2: f64, l3: f64) -> f64 {
    let e = s0_basis();
    // d[j][i][k] = ∂_j Q_ik
    let mut d = [[[0.0; 3]; 3]; 3];
    for (al, ea) in e.iter().enumerate() {
        for (j, dj) in d.iter_mut().enumerate() {
            let gj = g[al * 3 + j];
            if gj == 0.0 {
                continue;
            }
            for (i, row) in dj.iter_mut().enumerate() {
                for (kk, x) in row.iter_mut().enumerate() {
                    *x += gj * ea[(i, kk)];
                }
            }
        }
    }
    let mut t1 = 0.0;
    let mut t2 = 0.0;
    for j in 0..3 {
        for i in 0..3 {
            for kk in 0..3 {
                t1 += d[j][i][kk] * d[j][i][kk];
                t2 += d[j][i][kk] * d[kk][i][j];
            }
        }
    }
    let mut t3 = 0.0;
    for i in 0..3 {
        let div: f64 = (0..3).map(|j| d[j][i][j]).sum();
        t3 += div * div;
    }
    l1 * t1 + l2 * t2 + l3 * t3
}

#[derive(Clone, Debug, Serialize)]
pub struct PositivityReport {
    pub holds: bool,
    /// Smallest of `L1 + L2`, `2 L1 - L2`, `6 L1 + L2 + 10 L3`.
    pub margin: f64,
    pub violations: Vec<String>,
    /// Smallest eigenvalue of the assembled `15 x 15` form.
    pub min_eigenvalue: f64,
}

pub fn check_positivity(l1: f64, l2: f64, l3: f64) -> PositivityReport {
    let conds = [
        ("L1+L2>0", l1 + l2),
        ("2L1-L2>0", 2.0 * l1 - l2),
        ("6L1+L2+10L3>0", 6.0 * l1 + l2 + 10.0 * l3),
    ];
    let violations: Vec<String> = conds
        .iter()
        .filter(|c| !(c.1 > 0.0))
        .map(|c| format!("{} violated", c.0))
        .collect();
    let margin = conds.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
    let min_eigenvalue = DMatrix::from_row_slice(15, 15, &ldg_form(l1, l2, l3))
        .symmetric_eigenvalues()
        .min();
    PositivityReport {
        holds: violations.is_empty(),
        margin,
        violations,
        min_eigenvalue,
    }
}
