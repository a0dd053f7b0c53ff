//! 2×2 real matrices.

use crate::error::{Error, Result};
use crate::scalar::Real;
use std::ops::{Add, Mul, Sub};

#[derive(Debug, Clone, PartialEq)]
pub struct Mat2<T> {
    pub a11: T,
    pub a12: T,
    pub a21: T,
    pub a22: T,
}

impl<T: Real> Mat2<T> {
    pub fn new(a11: T, a12: T, a21: T, a22: T) -> Self {
        Mat2 { a11, a12, a21, a22 }
    }

    pub fn identity() -> Self {
        Mat2::new(T::one(), T::zero(), T::zero(), T::one())
    }

    pub fn zero() -> Self {
        Mat2::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    pub fn diag(d1: T, d2: T) -> Self {
        Mat2::new(d1, T::zero(), T::zero(), d2)
    }

    pub fn scalar(c: T) -> Self {
        Mat2::diag(c.clone(), c)
    }

    pub fn det(&self) -> T {
        self.a11.clone() * self.a22.clone() - self.a12.clone() * self.a21.clone()
    }

    pub fn trace(&self) -> T {
        self.a11.clone() + self.a22.clone()
    }

    /// Largest absolute entry.
    pub fn norm(&self) -> T {
        [&self.a11, &self.a12, &self.a21, &self.a22]
            .into_iter()
            .fold(T::zero(), |m, x| T::max_of(m, x.abs()))
    }

    pub fn scale(&self, c: &T) -> Self {
        Mat2::new(
            self.a11.clone() * c.clone(),
            self.a12.clone() * c.clone(),
            self.a21.clone() * c.clone(),
            self.a22.clone() * c.clone(),
        )
    }

    /// Inverse, failing when `|det| <= tau_singular`.
    pub fn inv(&self, tau_singular: &T) -> Result<Self> {
        let d = self.det();
        if d.abs() <= *tau_singular {
            return Err(Error::SingularMatrix {
                det: d.to_f64_lossy(),
            });
        }
        Ok(Mat2::new(
            self.a22.clone() / d.clone(),
            -self.a12.clone() / d.clone(),
            -self.a21.clone() / d.clone(),
            self.a11.clone() / d,
        ))
    }

    pub fn map(&self, f: impl Fn(&T) -> T) -> Self {
        Mat2::new(f(&self.a11), f(&self.a12), f(&self.a21), f(&self.a22))
    }
}

impl<T: Real> Add for Mat2<T> {
    type Output = Mat2<T>;
    fn add(self, b: Mat2<T>) -> Mat2<T> {
        Mat2::new(self.a11 + b.a11, self.a12 + b.a12, self.a21 + b.a21, self.a22 + b.a22)
    }
}

impl<T: Real> Sub for Mat2<T> {
    type Output = Mat2<T>;
    fn sub(self, b: Mat2<T>) -> Mat2<T> {
        Mat2::new(self.a11 - b.a11, self.a12 - b.a12, self.a21 - b.a21, self.a22 - b.a22)
    }
}

impl<'a, T: Real> Mul<&'a Mat2<T>> for &'a Mat2<T> {
    type Output = Mat2<T>;
    fn mul(self, b: &'a Mat2<T>) -> Mat2<T> {
        mat2_mul(self, b)
    }
}

impl<T: Real> Mul for Mat2<T> {
    type Output = Mat2<T>;
    fn mul(self, b: Mat2<T>) -> Mat2<T> {
        mat2_mul(&self, &b)
    }
}

pub fn mat2_mul<T: Real>(a: &Mat2<T>, b: &Mat2<T>) -> Mat2<T> {
    Mat2::new(
        a.a11.clone() * b.a11.clone() + a.a12.clone() * b.a21.clone(),
        a.a11.clone() * b.a12.clone() + a.a12.clone() * b.a22.clone(),
        a.a21.clone() * b.a11.clone() + a.a22.clone() * b.a21.clone(),
        a.a21.clone() * b.a12.clone() + a.a22.clone() * b.a22.clone(),
    )
}

pub fn mat2_inv<T: Real>(a: &Mat2<T>, tau_singular: &T) -> Result<Mat2<T>> {
    a.inv(tau_singular)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: f64, b: f64, c: f64, d: f64) -> Mat2<f64> {
        Mat2::new(a, b, c, d)
    }

    #[test]
    fn identity_product() {
        assert_eq!(mat2_mul(&Mat2::<f64>::identity(), &Mat2::identity()), Mat2::identity());
    }

    #[test]
    fn column_swap() {
        let p = mat2_mul(&m(1.0, 2.0, 3.0, 4.0), &m(0.0, 1.0, 1.0, 0.0));
        assert_eq!(p, m(2.0, 1.0, 4.0, 3.0));
    }

    #[test]
    fn nilpotent_square_vanishes() {
        let a = m(1.0, 1.0, -1.0, -1.0);
        assert_eq!(mat2_mul(&a, &a), Mat2::zero());
    }

    #[test]
    fn inverses() {
        let tau = 1e-12;
        assert_eq!(mat2_inv(&Mat2::<f64>::identity(), &tau).unwrap(), Mat2::identity());
        assert_eq!(mat2_inv(&m(2.0, 0.0, 0.0, 0.5), &tau).unwrap(), m(0.5, 0.0, 0.0, 2.0));
        let s = m(0.0, 1.0, 1.0, 0.0);
        assert_eq!(mat2_inv(&s, &tau).unwrap(), s);
        assert!(matches!(
            mat2_inv(&m(1.0, 2.0, 2.0, 4.0), &tau),
            Err(Error::SingularMatrix { .. })
        ));
    }
}
