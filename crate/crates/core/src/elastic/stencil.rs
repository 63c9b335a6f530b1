//! Discrete elastic energy on the full grid and its exact gradient.
//!
//! Same-direction blocks `A_ii` live on grid edges (forward differences,
//! transverse trapezoid weights); cross-direction blocks `A_ij`, `i != j`, live
//! on nodes (averaged central differences, one-sided on the faces, trapezoid
//! weights). Both parts are symmetric positive semidefinite, the sum is exact
//! for affine fields, and the gradient below is the exact derivative of the
//! sum, so operator and energy are dual up to round-off.

use rayon::prelude::*;

use super::model::ElasticModel;
use crate::field::{node_gradient, Field, Grid};
use crate::{reduce, Error, Result};

pub(crate) fn check_model(grid: &Grid, k: usize, model: &ElasticModel) -> Result<()> {
    if model.k() != k {
        return Err(Error::GridMismatch(format!(
            "elastic model acts on k = {}, field has k = {k}",
            model.k()
        )));
    }
    if let Some(w) = model.weight() {
        if w.len() != grid.len() {
            return Err(Error::GridMismatch("elastic weight sampled on another grid".into()));
        }
    }
    Ok(())
}

/// Total discrete elastic energy; when `grad` is given, also writes
/// `∂E/∂u_p` (Euclidean, not divided by node weights).
pub(crate) fn energy_gradient(
    grid: &Grid,
    model: &ElasticModel,
    values: &[f64],
    grad: Option<&mut [f64]>,
) -> f64 {
    let k = model.k();
    let n = grid.len();
    let dims = grid.dims();
    let h = grid.spacing();
    let h3 = h * h * h;
    let strides = [grid.stride(0), grid.stride(1), grid.stride(2)];
    let diag_blocks: [Vec<f64>; 3] = std::array::from_fn(|i| model.block(i, i));
    let iso = model.isotropic_scale();
    let mixed = model.has_mixed().then(|| model.mixed_form());
    let nk = 3 * k;

    let want_grad = grad.is_some();
    // Per-node energy, edge fluxes F_i(p) (layout (p*3+i)*k+α) and mixed
    // stresses S(p) (layout p*3k + α*3 + i).
    let mut node_energy = vec![0.0; n];
    let mut flux = if want_grad { vec![0.0; n * nk] } else { Vec::new() };
    let mut stress = if want_grad && mixed.is_some() {
        vec![0.0; n * nk]
    } else {
        Vec::new()
    };

    let per_node = |p: usize, fl: Option<&mut [f64]>, st: Option<&mut [f64]>| -> f64 {
        let c = grid.coords(p);
        let on_face: [bool; 3] = std::array::from_fn(|a| c[a] == 0 || c[a] + 1 == dims[a]);
        let a_p = model.weight_at(p);
        let mut e = 0.0;
        let mut fl = fl;
        let mut d = [0.0; crate::manifold::MAX_K];
        let mut ad = [0.0; crate::manifold::MAX_K];
        for i in 0..3 {
            if c[i] + 1 == dims[i] {
                continue;
            }
            let q = p + strides[i];
            let mut w = h3 * 0.5 * (a_p + model.weight_at(q));
            for t in 0..3 {
                if t != i && on_face[t] {
                    w *= 0.5;
                }
            }
            for a in 0..k {
                d[a] = (values[q * k + a] - values[p * k + a]) / h;
            }
            let quad = match iso {
                Some(s) => {
                    for a in 0..k {
                        ad[a] = s * d[a];
                    }
                    (0..k).map(|a| d[a] * ad[a]).sum::<f64>()
                }
                None => {
                    let b = &diag_blocks[i];
                    for a in 0..k {
                        ad[a] = (0..k).map(|bb| b[a * k + bb] * d[bb]).sum();
                    }
                    (0..k).map(|a| d[a] * ad[a]).sum::<f64>()
                }
            };
            e += w * quad;
            if let Some(f) = fl.as_deref_mut() {
                for a in 0..k {
                    f[i * k + a] = 2.0 * w * ad[a] / h;
                }
            }
        }
        if let Some(mf) = &mixed {
            let mut xi = [0.0; 3 * crate::manifold::MAX_K];
            node_gradient(grid, k, values, p, &mut xi[..nk]);
            let w = a_p * grid.node_weight(p);
            let mut s = [0.0; 3 * crate::manifold::MAX_K];
            let mut em = 0.0;
            for r in 0..nk {
                let row = &mf[r * nk..(r + 1) * nk];
                let v: f64 = row.iter().zip(&xi[..nk]).map(|(a, x)| a * x).sum();
                s[r] = 2.0 * w * v;
                em += xi[r] * w * v;
            }
            e += em;
            if let Some(st) = st {
                st.copy_from_slice(&s[..nk]);
            }
        }
        e
    };

    match (want_grad, stress.is_empty()) {
        (false, _) => node_energy
            .par_iter_mut()
            .enumerate()
            .for_each(|(p, e)| *e = per_node(p, None, None)),
        (true, true) => node_energy
            .par_iter_mut()
            .zip(flux.par_chunks_mut(nk))
            .enumerate()
            .for_each(|(p, (e, f))| *e = per_node(p, Some(f), None)),
        (true, false) => node_energy
            .par_iter_mut()
            .zip(flux.par_chunks_mut(nk))
            .zip(stress.par_chunks_mut(nk))
            .enumerate()
            .for_each(|(p, ((e, f), s))| *e = per_node(p, Some(f), Some(s))),
    }
    let total = reduce::sum(n, |p| node_energy[p]);

    if let Some(grad) = grad {
        let flux = &flux;
        let stress = &stress;
        grad.par_chunks_mut(k).enumerate().for_each(|(p, g)| {
            g.fill(0.0);
            let c = grid.coords(p);
            for i in 0..3 {
                let s = strides[i];
                let last = dims[i] - 1;
                if c[i] > 0 {
                    let f = &flux[((p - s) * 3 + i) * k..][..k];
                    for a in 0..k {
                        g[a] += f[a];
                    }
                }
                if c[i] < last {
                    let f = &flux[(p * 3 + i) * k..][..k];
                    for a in 0..k {
                        g[a] -= f[a];
                    }
                }
                if stress.is_empty() {
                    continue;
                }
                // adjoint of the node difference operator along axis i
                let st = |q: usize, a: usize| stress[q * nk + a * 3 + i];
                for a in 0..k {
                    let mut v = 0.0;
                    if c[i] == 0 {
                        v -= st(p, a) / h;
                    }
                    if c[i] == last {
                        v += st(p, a) / h;
                    }
                    if c[i] > 0 {
                        let scale = if c[i] == 1 { 1.0 } else { 0.5 };
                        v += scale * st(p - s, a) / h;
                    }
                    if c[i] < last {
                        let scale = if c[i] + 1 == last { 1.0 } else { 0.5 };
                        v -= scale * st(p + s, a) / h;
                    }
                    g[a] += v;
                }
            }
        });
    }
    total
}

/// Total discrete elastic energy of a field over the whole grid.
pub fn elastic_energy(field: &Field, model: &ElasticModel) -> Result<f64> {
    check_model(field.grid(), field.k(), model)?;
    Ok(energy_gradient(field.grid(), model, field.values(), None))
}

/// The discrete operator `𝓛u`: the variational gradient of the discrete
/// elastic energy divided by the node quadrature weights, so that
/// `Σ_p ω_p 𝓛u_p · v_p = d/dt E(u + t v)`. For `W = |∇u|^2` it is `-2Δ_h u`.
pub fn elastic_operator_apply(field: &Field, model: &ElasticModel) -> Result<Field> {
    let grid = field.grid();
    check_model(grid, field.k(), model)?;
    let k = field.k();
    let mut out = vec![0.0; field.values().len()];
    energy_gradient(grid, model, field.values(), Some(&mut out));
    out.par_chunks_mut(k).enumerate().for_each(|(p, g)| {
        let w = grid.node_weight(p);
        for x in g {
            *x /= w;
        }
    });
    let mut result = Field::from_values(grid.clone(), k, out)?;
    result.set_boundary_mask(field.boundary_mask().to_vec())?;
    Ok(result)
}
