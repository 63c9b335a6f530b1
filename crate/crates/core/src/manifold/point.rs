use nalgebra::{Matrix3, Vector3};
use std::ops::{Add, Mul, Sub};

use crate::{Error, Result};

/// Largest supported target dimension (the Q-tensor space `S_0`).
pub const MAX_K: usize = 5;

const SQRT2: f64 = std::f64::consts::SQRT_2;
const SQRT6: f64 = 2.449_489_742_783_178;

/// Orthonormal basis of the symmetric traceless 3x3 matrices under the
/// Frobenius inner product. Coordinates in this basis make the Euclidean norm
/// of `R^5` equal to the Frobenius norm.
pub fn s0_basis() -> [Matrix3<f64>; 5] {
    let a = 1.0 / SQRT2;
    let b = 1.0 / SQRT6;
    [
        Matrix3::new(a, 0.0, 0.0, 0.0, -a, 0.0, 0.0, 0.0, 0.0),
        Matrix3::new(-b, 0.0, 0.0, 0.0, -b, 0.0, 0.0, 0.0, 2.0 * b),
        Matrix3::new(0.0, a, 0.0, a, 0.0, 0.0, 0.0, 0.0, 0.0),
        Matrix3::new(0.0, 0.0, a, 0.0, 0.0, 0.0, a, 0.0, 0.0),
        Matrix3::new(0.0, 0.0, 0.0, 0.0, 0.0, a, 0.0, a, 0.0),
    ]
}

/// Rebuilds the symmetric traceless matrix from its five coordinates.
#[inline]
pub fn coords_to_matrix(q: &[f64]) -> Matrix3<f64> {
    let d1 = q[0] / SQRT2;
    let d2 = q[1] / SQRT6;
    let o12 = q[2] / SQRT2;
    let o13 = q[3] / SQRT2;
    let o23 = q[4] / SQRT2;
    Matrix3::new(
        d1 - d2,
        o12,
        o13,
        o12,
        -d1 - d2,
        o23,
        o13,
        o23,
        2.0 * d2,
    )
}

/// Coordinates of the traceless part of a symmetric matrix. The trace part is
/// orthogonal to `S_0` and drops out.
#[inline]
pub fn matrix_to_coords(m: &Matrix3<f64>) -> [f64; 5] {
    [
        (m[(0, 0)] - m[(1, 1)]) / SQRT2,
        (2.0 * m[(2, 2)] - m[(0, 0)] - m[(1, 1)]) / SQRT6,
        SQRT2 * 0.5 * (m[(0, 1)] + m[(1, 0)]),
        SQRT2 * 0.5 * (m[(0, 2)] + m[(2, 0)]),
        SQRT2 * 0.5 * (m[(1, 2)] + m[(2, 1)]),
    ]
}

/// A point of the order-parameter space `R^k` (`k = 5` for Q-tensors in
/// `S_0` coordinates, `k = 3` for the sphere model).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TargetPoint {
    k: usize,
    c: [f64; MAX_K],
}

impl TargetPoint {
    pub fn zeros(k: usize) -> Self {
        assert!((1..=MAX_K).contains(&k), "target dimension {k} unsupported");
        TargetPoint { k, c: [0.0; MAX_K] }
    }

    pub fn new(components: &[f64]) -> Self {
        let mut p = Self::zeros(components.len());
        p.c[..components.len()].copy_from_slice(components);
        p
    }

    pub fn from_matrix(m: &Matrix3<f64>) -> Self {
        Self::new(&matrix_to_coords(m))
    }

    /// The reconstructed 3x3 matrix; only meaningful for `k = 5`.
    pub fn to_matrix(&self) -> Matrix3<f64> {
        debug_assert_eq!(self.k, 5);
        coords_to_matrix(&self.c)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.c[..self.k]
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.c[..self.k]
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.as_slice()
            .iter()
            .zip(other.as_slice())
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm_squared(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (*self - *other).norm()
    }

    /// `R Q R^T` for Q-tensors, `R u` for 3-vectors.
    pub fn rotate(&self, r: &Matrix3<f64>) -> Self {
        match self.k {
            5 => Self::from_matrix(&(r * self.to_matrix() * r.transpose())),
            3 => {
                let v = r * Vector3::new(self.c[0], self.c[1], self.c[2]);
                Self::new(&[v.x, v.y, v.z])
            }
            k => panic!("rotation undefined for k = {k}"),
        }
    }
}

impl Add for TargetPoint {
    type Output = TargetPoint;
    fn add(mut self, rhs: Self) -> Self {
        debug_assert_eq!(self.k, rhs.k);
        for (a, b) in self.c.iter_mut().zip(rhs.c) {
            *a += b;
        }
        self
    }
}

impl Sub for TargetPoint {
    type Output = TargetPoint;
    fn sub(mut self, rhs: Self) -> Self {
        debug_assert_eq!(self.k, rhs.k);
        for (a, b) in self.c.iter_mut().zip(rhs.c) {
            *a -= b;
        }
        self
    }
}

impl Mul<TargetPoint> for f64 {
    type Output = TargetPoint;
    fn mul(self, mut rhs: TargetPoint) -> TargetPoint {
        for a in rhs.c.iter_mut() {
            *a *= self;
        }
        rhs
    }
}

/// Uniaxial Q-tensor `s (n ⊗ n - I/3)` in `S_0` coordinates.
pub fn q_from_director(n: [f64; 3], s: f64) -> Result<TargetPoint> {
    let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    if !norm.is_finite() || (norm - 1.0).abs() > 1e-10 {
        return Err(Error::domain(format!(
            "director must be a unit vector, |n| = {norm}"
        )));
    }
    Ok(uniaxial(&Vector3::new(n[0], n[1], n[2]), s))
}

#[inline]
pub(crate) fn uniaxial(n: &Vector3<f64>, s: f64) -> TargetPoint {
    let m = s * (n * n.transpose() - Matrix3::identity() / 3.0);
    TargetPoint::from_matrix(&m)
}

/// Biaxiality `1 - 6 tr(Q^3)^2 / |Q|^6`, in `[0, 1]`, zero for uniaxial tensors.
pub fn biaxiality(q: &TargetPoint) -> Result<f64> {
    if q.k() != 5 {
        return Err(Error::domain("biaxiality is defined for Q-tensors only"));
    }
    let n2 = q.norm_squared();
    if n2.sqrt() <= 1e-12 {
        return Err(Error::domain("biaxiality undefined at Q = 0"));
    }
    let m = q.to_matrix();
    let tr3 = (m * m * m).trace();
    Ok((1.0 - 6.0 * tr3 * tr3 / (n2 * n2 * n2)).clamp(0.0, 1.0))
}

/// Points of the unit 2-sphere on a Fibonacci spiral; nearly uniform.
pub fn fibonacci_sphere(count: usize) -> Vec<[f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_is_orthonormal_and_traceless() {
        let b = s0_basis();
        for (i, ei) in b.iter().enumerate() {
            assert!(ei.trace().abs() < 1e-15);
            assert!((ei - ei.transpose()).norm() < 1e-15);
            for (j, ej) in b.iter().enumerate() {
                let ip = ei.component_mul(ej).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((ip - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn coordinate_roundtrip_matches_basis_expansion() {
        let q = [0.3, -1.2, 0.7, 0.05, -0.4];
        let m = coords_to_matrix(&q);
        let expanded = s0_basis()
            .iter()
            .zip(q)
            .fold(Matrix3::zeros(), |acc, (e, c)| acc + e * c);
        assert!((m - expanded).norm() < 1e-14);
        let back = matrix_to_coords(&m);
        for (a, b) in q.iter().zip(back) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn director_along_z() {
        let q = q_from_director([0.0, 0.0, 1.0], 1.0).unwrap();
        let m = q.to_matrix();
        let want = Matrix3::from_diagonal(&Vector3::new(-1.0 / 3.0, -1.0 / 3.0, 2.0 / 3.0));
        assert!((m - want).norm() < 1e-14);
        assert!(m.trace().abs() < 1e-12);
        let flipped = q_from_director([0.0, 0.0, -1.0], 1.0).unwrap();
        assert_eq!(q, flipped);
    }

    #[test]
    fn non_unit_director_rejected() {
        assert!(matches!(
            q_from_director([0.0, 0.0, 1.1], 1.0),
            Err(Error::InputDomain(_))
        ));
    }

    #[test]
    fn uniaxial_biaxiality_is_zero() {
        let q = q_from_director([0.6, 0.0, 0.8], 2.0).unwrap();
        assert!(biaxiality(&q).unwrap() < 1e-12);
        let oblate = TargetPoint::from_matrix(&Matrix3::from_diagonal(&Vector3::new(
            1.0, 0.0, -1.0,
        )));
        assert!((biaxiality(&oblate).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rotation_preserves_norm() {
        let r = nalgebra::Rotation3::from_euler_angles(0.3, -0.7, 1.1).into_inner();
        let q = TargetPoint::new(&[0.3, -1.2, 0.7, 0.05, -0.4]);
        assert!((q.rotate(&r).norm() - q.norm()).abs() < 1e-13);
    }
}
