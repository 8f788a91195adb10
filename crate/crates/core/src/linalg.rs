//! Fixed-size 2x2 complex matrices.
//!
//! Everything in this crate reduces to 2x2 algebra: spin-space unitaries,
//! the continuity system at an interface, and the CTC fixed point.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn real(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Row-major 2x2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub const fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub const fn identity() -> Self {
        Mat2::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn zero() -> Self {
        Mat2::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub fn from_columns(c0: [C64; 2], c1: [C64; 2]) -> Self {
        Mat2::new(c0[0], c1[0], c0[1], c1[1])
    }

    pub fn pauli_x() -> Self {
        Mat2::new(ZERO, ONE, ONE, ZERO)
    }

    pub fn pauli_y() -> Self {
        Mat2::new(ZERO, -I, I, ZERO)
    }

    pub fn pauli_z() -> Self {
        Mat2::new(ONE, ZERO, ZERO, -ONE)
    }

    /// sigma . n for a real 3-vector n.
    pub fn sigma_dot(n: [f64; 3]) -> Self {
        Mat2::pauli_x() * real(n[0]) + Mat2::pauli_y() * real(n[1]) + Mat2::pauli_z() * real(n[2])
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[row][col]
    }

    pub fn det(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2::new(m[0][0].conj(), m[1][0].conj(), m[0][1].conj(), m[1][1].conj())
    }

    pub fn conj(&self) -> Self {
        let m = &self.0;
        Mat2::new(m[0][0].conj(), m[0][1].conj(), m[1][0].conj(), m[1][1].conj())
    }

    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det.norm() == 0.0 || !det.is_finite() {
            return None;
        }
        let m = &self.0;
        Some(Mat2::new(m[1][1] / det, -m[0][1] / det, -m[1][0] / det, m[0][0] / det))
    }

    pub fn mul_vec(&self, v: [C64; 2]) -> [C64; 2] {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Singular values (largest first).
    pub fn singular_values(&self) -> (f64, f64) {
        // Eigenvalues of the Hermitian A^dag A.
        let h = self.adjoint() * *self;
        let a = h.0[0][0].re;
        let d = h.0[1][1].re;
        let b = h.0[0][1].norm();
        let mean = 0.5 * (a + d);
        let disc = (0.25 * (a - d).powi(2) + b * b).sqrt();
        let hi = (mean + disc).max(0.0).sqrt();
        let lo = (mean - disc).max(0.0).sqrt();
        (hi, lo)
    }

    /// 2-norm condition number; infinite for singular matrices.
    pub fn condition_number(&self) -> f64 {
        let (hi, lo) = self.singular_values();
        if lo == 0.0 {
            f64::INFINITY
        } else {
            hi / lo
        }
    }

    /// Frobenius distance of U^dag U from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        (self.adjoint() * *self - Mat2::identity()).norm()
    }

    /// Solve `self * x = rhs`, reporting the condition number on failure.
    pub fn solve(&self, rhs: [C64; 2], max_condition: f64) -> Result<[C64; 2], f64> {
        let cond = self.condition_number();
        if !(cond <= max_condition) {
            return Err(cond);
        }
        match self.inverse() {
            Some(inv) => Ok(inv.mul_vec(rhs)),
            None => Err(f64::INFINITY),
        }
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(out)
    }
}

impl Mul<C64> for Mat2 {
    type Output = Mat2;
    fn mul(self, s: C64) -> Mat2 {
        let m = &self.0;
        Mat2::new(m[0][0] * s, m[0][1] * s, m[1][0] * s, m[1][1] * s)
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2::new(
            a[0][0] + b[0][0],
            a[0][1] + b[0][1],
            a[1][0] + b[1][0],
            a[1][1] + b[1][1],
        )
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        self + (-rhs)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self * real(-1.0)
    }
}

pub fn vec_norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// Hermitian inner product a^dag b.
pub fn vdot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        let (x, y, z) = (Mat2::pauli_x(), Mat2::pauli_y(), Mat2::pauli_z());
        assert_eq!(x * x, Mat2::identity());
        assert_eq!(y * y, Mat2::identity());
        assert_eq!(x * y, z * I);
        // sigma_y* = -sigma_y
        assert_eq!(y.conj(), -y);
    }

    #[test]
    fn inverse_and_condition() {
        let m = Mat2::new(real(2.0), real(1.0), real(1.0), real(3.0));
        let inv = m.inverse().unwrap();
        assert!((m * inv - Mat2::identity()).norm() < 1e-15);
        let diag = Mat2::new(real(4.0), ZERO, ZERO, real(0.5));
        assert!((diag.condition_number() - 8.0).abs() < 1e-12);
        let singular = Mat2::new(ONE, ONE, ONE, ONE);
        assert!(singular.condition_number().is_infinite() || singular.condition_number() > 1e15);
        assert!(singular.solve([ONE, ZERO], 1e12).is_err());
    }

    #[test]
    fn unitaries_have_no_defect() {
        let h = (Mat2::pauli_x() + Mat2::pauli_z()) * real(std::f64::consts::FRAC_1_SQRT_2);
        assert!(h.unitarity_defect() < 1e-15);
        assert!(Mat2::new(real(2.0), ZERO, ZERO, ONE).unitarity_defect() > 1.0);
    }
}
