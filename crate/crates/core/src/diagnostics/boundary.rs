use serde::Serialize;

use crate::field::{Domain, Field, Grid};
use crate::{Error, Result};

/// `N(u_b; B'_r) = r^2 ‖∇u_b‖_∞^2 + r^4 ‖∇²u_b‖_∞` over the boundary patch
/// `B'_r(x0)`, with tangential derivatives of the trace.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundaryDataNorm {
    pub radius: f64,
    pub gradient_sup: f64,
    pub hessian_sup: f64,
    pub value: f64,
}

/// Index of the grid plane carrying the flat boundary face.
fn face_plane(grid: &Grid, x0: [f64; 3]) -> Result<usize> {
    let h = grid.spacing();
    let z = match grid.domain() {
        Domain::Box => grid.origin()[2],
        Domain::HalfBall { center, .. } => center[2],
        Domain::Ball { .. } => {
            return Err(Error::domain("a ball domain has no flat boundary face"));
        }
    };
    let l = (z - grid.origin()[2]) / h;
    let l0 = l.round();
    if (l - l0).abs() > 1e-9 || l0 < 0.0 || l0 as usize >= grid.dims()[2] {
        return Err(Error::geometry("flat boundary face is not a grid plane"));
    }
    if (x0[2] - z).abs() > 1e-9 * h {
        return Err(Error::geometry(format!("{x0:?} is not on the flat face z = {z}")));
    }
    Ok(l0 as usize)
}

/// Tangential derivative of a face-lattice array along `axis` (0 or 1);
/// central inside, one-sided at the lattice edge.
fn face_diff(dims: [usize; 2], width: usize, h: f64, data: &[f64], axis: usize) -> Vec<f64> {
    let mut out = vec![0.0; data.len()];
    let stride = if axis == 0 { dims[1] } else { 1 };
    for i in 0..dims[0] {
        for j in 0..dims[1] {
            let c = if axis == 0 { i } else { j };
            let p = i * dims[1] + j;
            let (lo, hi, s) = if c == 0 {
                (p, p + stride, 1.0 / h)
            } else if c + 1 == dims[axis] {
                (p - stride, p, 1.0 / h)
            } else {
                (p - stride, p + stride, 0.5 / h)
            };
            for a in 0..width {
                out[p * width + a] = (data[hi * width + a] - data[lo * width + a]) * s;
            }
        }
    }
    out
}

/// `N(u_b; B'_r)` for each radius, taking `u_b` as the field's trace on the
/// flat face (the `z`-minimal plane of a box, or the face of a half-ball).
pub fn boundary_data_norm(field: &Field, x0: [f64; 3], radii: &[f64]) -> Result<Vec<BoundaryDataNorm>> {
    let grid = field.grid();
    let l0 = face_plane(grid, x0)?;
    let [nx, ny, _] = grid.dims();
    let k = field.k();
    let h = grid.spacing();
    let dims = [nx, ny];
    let mut trace = vec![0.0; nx * ny * k];
    for i in 0..nx {
        for j in 0..ny {
            let p = grid.index(i, j, l0);
            trace[(i * ny + j) * k..(i * ny + j + 1) * k].copy_from_slice(field.at(p));
        }
    }
    let d = [face_diff(dims, k, h, &trace, 0), face_diff(dims, k, h, &trace, 1)];
    let dd = [
        face_diff(dims, k, h, &d[0], 0),
        face_diff(dims, k, h, &d[0], 1),
        face_diff(dims, k, h, &d[1], 0),
        face_diff(dims, k, h, &d[1], 1),
    ];
    let mut per_node = Vec::with_capacity(nx * ny);
    for i in 0..nx {
        for j in 0..ny {
            let q = i * ny + j;
            let mut g2 = 0.0;
            let mut hess2 = 0.0;
            for a in 0..k {
                let idx = q * k + a;
                g2 += d[0][idx].powi(2) + d[1][idx].powi(2);
                let off = 0.5 * (dd[1][idx] + dd[2][idx]);
                hess2 += dd[0][idx].powi(2) + dd[3][idx].powi(2) + 2.0 * off * off;
            }
            let x = grid.position(grid.index(i, j, l0));
            let rho = (x[0] - x0[0]).hypot(x[1] - x0[1]);
            per_node.push((rho, g2.sqrt(), hess2.sqrt()));
        }
    }
    radii
        .iter()
        .map(|&r| {
            if !(r > 0.0) {
                return Err(Error::domain(format!("patch radius {r} must be positive")));
            }
            let tol = 1e-9 * h;
            let (mut g, mut hs) = (0.0f64, 0.0f64);
            for &(rho, gn, hn) in &per_node {
                if rho <= r + tol {
                    g = g.max(gn);
                    hs = hs.max(hn);
                }
            }
            Ok(BoundaryDataNorm {
                radius: r,
                gradient_sup: g,
                hessian_sup: hs,
                value: r * r * g * g + r.powi(4) * hs,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::TargetPoint;

    #[test]
    fn quadratic_trace_has_exact_derivatives() {
        // u_b = (x^2, xy, 0): |∇u_b|^2 = 5x^2 + y^2, |∇²u_b|^2 = 2^2 + 1 + 1
        let g = Grid::new([9, 9, 5], 0.25, [-1.0, -1.0, 0.0], Domain::Box).unwrap();
        let f = Field::from_fn(g, 3, |x| TargetPoint::new(&[x[0] * x[0], x[0] * x[1], 0.0])).unwrap();
        let n = boundary_data_norm(&f, [0.0, 0.0, 0.0], &[0.5]).unwrap()[0];
        // sup over the disc of radius 1/2 of sqrt(5x^2 + y^2) is at (±1/2, 0)
        assert!((n.gradient_sup - (5.0f64 * 0.25).sqrt()).abs() < 1e-12);
        assert!((n.hessian_sup - 6f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn ball_domain_has_no_face() {
        let g = Grid::centered_cube(
            5,
            1.0,
            Domain::Ball {
                center: [0.0; 3],
                radius: 1.0,
            },
        )
        .unwrap();
        let f = Field::zeros(g, 3).unwrap();
        assert!(boundary_data_norm(&f, [0.0, 0.0, -1.0], &[0.5]).is_err());
    }
}
