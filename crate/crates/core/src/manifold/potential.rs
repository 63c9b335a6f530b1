use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use serde::{Deserialize, Serialize};

use super::point::{coords_to_matrix, matrix_to_coords, uniaxial, TargetPoint};
use crate::{Error, Result};

/// Eigenvalue gap below which the leading eigenvector of a Q-tensor is
/// considered non-unique.
pub const EIGEN_GAP_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum PotentialKind {
    /// `a^2 |Q|^2 - b^2 tr(Q^3) + c^2 |Q|^4`, shifted so its minimum is zero.
    LandauDeGennes { a2: f64, b2: f64, c2: f64 },
    /// `(1 - |u|^2)^2` on `R^3`; the vacuum manifold is the unit sphere.
    GinzburgLandau,
}

/// Bulk potential `f >= 0` together with its vacuum manifold `N = {f = 0}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Potential {
    kind: PotentialKind,
    normalization: f64,
    s_star: f64,
}

/// Uniaxial profile `s -> f_LdG(s (n⊗n - I/3))` before normalization.
pub fn uniaxial_profile(a2: f64, b2: f64, c2: f64, s: f64) -> f64 {
    (2.0 * a2 / 3.0) * s * s - (2.0 * b2 / 9.0) * s.powi(3) + (4.0 * c2 / 9.0) * s.powi(4)
}

/// Preferred uniaxial amplitude: the larger critical point of the uniaxial
/// profile, `(3 b^2 + sqrt(9 b^4 - 192 a^2 c^2)) / (16 c^2)`.
pub fn s_star(a2: f64, b2: f64, c2: f64) -> Result<f64> {
    if !(a2 > 0.0 && b2 > 0.0 && c2 > 0.0) {
        return Err(Error::domain(format!(
            "Landau-de Gennes parameters must be positive, got ({a2}, {b2}, {c2})"
        )));
    }
    let disc = 9.0 * b2 * b2 - 192.0 * a2 * c2;
    if disc <= 0.0 {
        return Err(Error::DegenerateManifold(format!(
            "9 b^4 - 192 a^2 c^2 = {disc} <= 0"
        )));
    }
    Ok((3.0 * b2 + disc.sqrt()) / (16.0 * c2))
}

/// Golden-section search of the uniaxial profile on the unimodal branch
/// beyond its local maximum.
fn golden_uniaxial_min(a2: f64, b2: f64, c2: f64) -> f64 {
    let disc = (9.0 * b2 * b2 - 192.0 * a2 * c2).max(0.0);
    let mut lo = (3.0 * b2 - disc.sqrt()) / (16.0 * c2);
    let mut hi = 2.0 * (3.0 * b2 + disc.sqrt()) / (16.0 * c2) + 1.0;
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let f = |s| uniaxial_profile(a2, b2, c2, s);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

impl Potential {
    pub fn landau_de_gennes(a2: f64, b2: f64, c2: f64) -> Result<Self> {
        let s = s_star(a2, b2, c2)?;
        let min = uniaxial_profile(a2, b2, c2, s);
        if min >= 0.0 {
            return Err(Error::DegenerateManifold(format!(
                "uniaxial minimum {min} is not below f(0) = 0; the isotropic state is preferred"
            )));
        }
        let check = golden_uniaxial_min(a2, b2, c2);
        if (check - s).abs() > 1e-5 * s.max(1.0) {
            return Err(Error::DegenerateManifold(format!(
                "closed-form s* = {s} disagrees with 1-D search {check}"
            )));
        }
        Ok(Potential {
            kind: PotentialKind::LandauDeGennes { a2, b2, c2 },
            normalization: min,
            s_star: s,
        })
    }

    pub fn ginzburg_landau() -> Self {
        Potential {
            kind: PotentialKind::GinzburgLandau,
            normalization: 0.0,
            s_star: 1.0,
        }
    }

    pub fn from_kind(kind: PotentialKind) -> Result<Self> {
        match kind {
            PotentialKind::LandauDeGennes { a2, b2, c2 } => Self::landau_de_gennes(a2, b2, c2),
            PotentialKind::GinzburgLandau => Ok(Self::ginzburg_landau()),
        }
    }

    pub fn kind(&self) -> PotentialKind {
        self.kind
    }

    /// Target dimension.
    pub fn k(&self) -> usize {
        match self.kind {
            PotentialKind::LandauDeGennes { .. } => 5,
            PotentialKind::GinzburgLandau => 3,
        }
    }

    /// `s*` for Landau-de Gennes, the sphere radius (1) for Ginzburg-Landau.
    pub fn s_star(&self) -> f64 {
        self.s_star
    }

    /// The additive shift subtracted from the raw polynomial (its minimum).
    pub fn normalization_constant(&self) -> f64 {
        self.normalization
    }

    /// Radius of the tube around `N` on which the quadratic comparability of
    /// `f` and `dist^2` is sampled.
    pub fn tube_radius(&self) -> f64 {
        self.s_star / 4.0
    }

    #[inline]
    pub fn value(&self, z: &[f64]) -> f64 {
        match self.kind {
            PotentialKind::LandauDeGennes { a2, b2, c2 } => {
                let n2: f64 = z.iter().map(|x| x * x).sum();
                let det = coords_to_matrix(z).determinant();
                // tr(Q^3) = 3 det Q for traceless Q
                let raw = a2 * n2 - 3.0 * b2 * det + c2 * n2 * n2;
                (raw - self.normalization).max(0.0)
            }
            PotentialKind::GinzburgLandau => {
                let n2: f64 = z.iter().map(|x| x * x).sum();
                (1.0 - n2) * (1.0 - n2)
            }
        }
    }

    #[inline]
    pub fn gradient_into(&self, z: &[f64], out: &mut [f64]) {
        match self.kind {
            PotentialKind::LandauDeGennes { a2, b2, c2 } => {
                let m = coords_to_matrix(z);
                let sq = matrix_to_coords(&(m * m));
                let n2: f64 = z.iter().map(|x| x * x).sum();
                let lin = 2.0 * a2 + 4.0 * c2 * n2;
                for a in 0..5 {
                    out[a] = lin * z[a] - 3.0 * b2 * sq[a];
                }
            }
            PotentialKind::GinzburgLandau => {
                let n2: f64 = z.iter().map(|x| x * x).sum();
                let c = -4.0 * (1.0 - n2);
                for a in 0..3 {
                    out[a] = c * z[a];
                }
            }
        }
    }

    /// `f(z + dz) - f(z)` expanded in powers of `dz`, so that small increments
    /// near `N` do not drown in the cancellation that `value` suffers there.
    /// Ignores the clamp at zero in `value`.
    pub fn value_difference(&self, z: &[f64], dz: &[f64]) -> f64 {
        let zd: f64 = z.iter().zip(dz).map(|(a, b)| a * b).sum();
        let d2: f64 = dz.iter().map(|x| x * x).sum();
        let n2: f64 = z.iter().map(|x| x * x).sum();
        // |z + dz|^2 - |z|^2
        let dn2 = 2.0 * zd + d2;
        match self.kind {
            PotentialKind::LandauDeGennes { a2, b2, c2 } => {
                let m = coords_to_matrix(z);
                let d = coords_to_matrix(dz);
                let md = m * d;
                // det(Z + D) - det(Z) = tr(Z^2 D) + tr(Z D^2) + tr(D^3) / 3
                let ddet = (m * md).trace() + (md * d).trace() + (d * d * d).trace() / 3.0;
                a2 * dn2 - 3.0 * b2 * ddet + c2 * dn2 * (2.0 * n2 + dn2)
            }
            PotentialKind::GinzburgLandau => -dn2 * (2.0 * (1.0 - n2) - dn2),
        }
    }

    pub fn bulk_f(&self, z: &TargetPoint) -> f64 {
        self.value(z.as_slice())
    }

    pub fn grad_f(&self, z: &TargetPoint) -> TargetPoint {
        let mut g = TargetPoint::zeros(z.k());
        self.gradient_into(z.as_slice(), g.as_mut_slice());
        g
    }

    /// Eigen-decomposition sorted by decreasing eigenvalue.
    fn sorted_eigen(z: &TargetPoint) -> ([f64; 3], Vector3<f64>) {
        let eig = SymmetricEigen::new(z.to_matrix());
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let vals = [
            eig.eigenvalues[idx[0]],
            eig.eigenvalues[idx[1]],
            eig.eigenvalues[idx[2]],
        ];
        let v = eig.eigenvectors.column(idx[0]).into_owned();
        (vals, v.normalize())
    }

    /// Unit leading eigenvector of a Q-tensor (defined up to sign).
    pub fn director(&self, z: &TargetPoint) -> Result<[f64; 3]> {
        if self.k() != 5 {
            return Err(Error::domain("director defined for Q-tensors only"));
        }
        let (vals, v) = Self::sorted_eigen(z);
        if vals[0] - vals[1] < EIGEN_GAP_TOL {
            return Err(Error::ProjectionUndefined(format!(
                "leading eigenvalue not simple (gap {:.3e})",
                vals[0] - vals[1]
            )));
        }
        Ok([v.x, v.y, v.z])
    }

    /// Nearest point of `N`.
    pub fn project_to_n(&self, z: &TargetPoint) -> Result<TargetPoint> {
        match self.kind {
            PotentialKind::GinzburgLandau => {
                let n = z.norm();
                if n <= 1e-9 {
                    return Err(Error::ProjectionUndefined(format!("|u| = {n:.3e}")));
                }
                Ok((1.0 / n) * *z)
            }
            PotentialKind::LandauDeGennes { .. } => {
                let d = self.director(z)?;
                Ok(uniaxial(&Vector3::new(d[0], d[1], d[2]), self.s_star))
            }
        }
    }

    /// Distance to `N`. Always defined: for Q-tensors with eigenvalues
    /// `mu_1 >= mu_2 >= mu_3` it is the distance of the spectra,
    /// `(mu_1 - 2s*/3, mu_2 + s*/3, mu_3 + s*/3)`, which stays valid when the
    /// leading eigenvalue is degenerate.
    pub fn dist_to_n(&self, z: &TargetPoint) -> f64 {
        match self.kind {
            PotentialKind::GinzburgLandau => (z.norm() - 1.0).abs(),
            PotentialKind::LandauDeGennes { .. } => {
                let (vals, _) = Self::sorted_eigen(z);
                let s = self.s_star;
                let d = [vals[0] - 2.0 * s / 3.0, vals[1] + s / 3.0, vals[2] + s / 3.0];
                (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
            }
        }
    }

    pub fn on_manifold(&self, z: &TargetPoint, tol: f64) -> bool {
        self.dist_to_n(z) <= tol
    }

    /// Constant-speed geodesic of `N` from `z1` (t = 0) to `z2` (t = 1).
    pub fn geodesic(&self, t: f64, z1: &TargetPoint, z2: &TargetPoint) -> Result<TargetPoint> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::domain(format!("geodesic parameter {t} outside [0, 1]")));
        }
        for z in [z1, z2] {
            let d = self.dist_to_n(z);
            if d > 1e-8 {
                return Err(Error::domain(format!(
                    "geodesic endpoint off the vacuum manifold (dist {d:.3e})"
                )));
            }
        }
        match self.kind {
            PotentialKind::GinzburgLandau => {
                let a = Vector3::new(z1.as_slice()[0], z1.as_slice()[1], z1.as_slice()[2]);
                let b = Vector3::new(z2.as_slice()[0], z2.as_slice()[1], z2.as_slice()[2]);
                let v = slerp(&a.normalize(), &b.normalize(), t)?;
                Ok(TargetPoint::new(&[v.x, v.y, v.z]))
            }
            PotentialKind::LandauDeGennes { .. } => {
                let n1 = Vector3::from(self.director(z1)?);
                let mut n2 = Vector3::from(self.director(z2)?);
                if n1.dot(&n2) < 0.0 {
                    n2 = -n2;
                }
                if n1.dot(&n2) < 1e-12 {
                    return Err(Error::NonuniqueGeodesic(
                        "directors are orthogonal".to_string(),
                    ));
                }
                let n = slerp(&n1, &n2, t)?;
                Ok(uniaxial(&n, self.s_star))
            }
        }
    }
}

/// Spherical linear interpolation between unit vectors.
fn slerp(a: &Vector3<f64>, b: &Vector3<f64>, t: f64) -> Result<Vector3<f64>> {
    let c = a.dot(b).clamp(-1.0, 1.0);
    if c < -1.0 + 1e-12 {
        return Err(Error::NonuniqueGeodesic("antipodal endpoints".to_string()));
    }
    let theta = c.acos();
    if theta < 1e-12 {
        return Ok((a + t * (b - a)).normalize());
    }
    let s = theta.sin();
    Ok(((((1.0 - t) * theta).sin() / s) * a + ((t * theta).sin() / s) * b).normalize())
}

/// Conjugation `Q -> R Q R^T` of a whole coordinate slice.
pub fn rotate_coords(r: &Matrix3<f64>, z: &[f64], out: &mut [f64]) {
    match z.len() {
        5 => {
            let m = r * coords_to_matrix(z) * r.transpose();
            out.copy_from_slice(&matrix_to_coords(&m));
        }
        3 => {
            let v = r * Vector3::new(z[0], z[1], z[2]);
            out.copy_from_slice(v.as_slice());
        }
        k => panic!("rotation undefined for k = {k}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::q_from_director;

    fn ldg() -> Potential {
        Potential::landau_de_gennes(1.0, 10.0, 1.0).unwrap()
    }

    #[test]
    fn s_star_reference_value() {
        let s = s_star(1.0, 10.0, 1.0).unwrap();
        assert!((s - 3.539).abs() < 1e-3, "{s}");
    }

    #[test]
    fn s_star_rejects_negative_discriminant() {
        assert!(matches!(
            s_star(1.0, 1.0, 1.0),
            Err(Error::DegenerateManifold(_))
        ));
    }

    #[test]
    fn isotropic_preferred_is_rejected() {
        // 9 b^4 > 192 a^2 c^2 but the uniaxial minimum stays above f(0).
        assert!(Potential::landau_de_gennes(1.0, 4.7, 1.0).is_err());
    }

    #[test]
    fn vanishes_on_vacuum_manifold() {
        let p = ldg();
        let q = q_from_director([0.48, 0.6, 0.64], p.s_star()).unwrap();
        assert!(p.bulk_f(&q) < 1e-10);
        let g = p.grad_f(&q);
        assert!(g.norm() < 1e-8, "{}", g.norm());

        let gl = Potential::ginzburg_landau();
        let u = TargetPoint::new(&[0.6, 0.0, 0.8]);
        assert!(gl.bulk_f(&u) < 1e-15);
    }

    #[test]
    fn value_at_origin_is_minus_the_normalization() {
        let p = ldg();
        let f0 = p.bulk_f(&TargetPoint::zeros(5));
        assert!((f0 + p.normalization_constant()).abs() < 1e-12);
        assert!(p.grad_f(&TargetPoint::zeros(5)).norm() == 0.0);
    }

    #[test]
    fn projection_cases() {
        let gl = Potential::ginzburg_landau();
        let p = gl.project_to_n(&TargetPoint::new(&[2.0, 0.0, 0.0])).unwrap();
        assert_eq!(p.as_slice(), &[1.0, 0.0, 0.0]);
        assert!((gl.dist_to_n(&TargetPoint::new(&[2.0, 0.0, 0.0])) - 1.0).abs() < 1e-15);
        assert!(gl.project_to_n(&TargetPoint::zeros(3)).is_err());

        let p = ldg();
        let q = q_from_director([0.0, 0.6, 0.8], p.s_star()).unwrap();
        let pq = p.project_to_n(&q).unwrap();
        assert!(pq.distance(&q) < 1e-10);
        assert!(p.project_to_n(&TargetPoint::zeros(5)).is_err());
    }

    #[test]
    fn distance_along_uniaxial_ray() {
        let p = ldg();
        let s = p.s_star();
        let q = q_from_director([0.0, 0.0, 1.0], s / 2.0).unwrap();
        let want = (s / 2.0 - s).abs() * (2.0f64 / 3.0).sqrt();
        assert!((p.dist_to_n(&q) - want).abs() < 1e-12);
    }

    #[test]
    fn geodesic_endpoints_and_midpoint() {
        let gl = Potential::ginzburg_landau();
        let e1 = TargetPoint::new(&[1.0, 0.0, 0.0]);
        let e2 = TargetPoint::new(&[0.0, 1.0, 0.0]);
        let mid = gl.geodesic(0.5, &e1, &e2).unwrap();
        let r = 1.0 / 2f64.sqrt();
        assert!(mid.distance(&TargetPoint::new(&[r, r, 0.0])) < 1e-15);
        assert!(gl.geodesic(0.0, &e1, &e2).unwrap().distance(&e1) < 1e-15);
        assert!(gl.geodesic(1.0, &e1, &e2).unwrap().distance(&e2) < 1e-15);

        let p = ldg();
        let a = q_from_director([0.0, 0.0, 1.0], p.s_star()).unwrap();
        let b = q_from_director([0.0, 0.0, -1.0], p.s_star()).unwrap();
        for t in [0.0, 0.3, 1.0] {
            assert!(p.geodesic(t, &a, &b).unwrap().distance(&a) < 1e-12);
        }
        let c = q_from_director([1.0, 0.0, 0.0], p.s_star()).unwrap();
        assert!(matches!(
            p.geodesic(0.5, &a, &c),
            Err(Error::NonuniqueGeodesic(_))
        ));
    }
}
