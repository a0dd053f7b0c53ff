//! Dense univariate polynomials with ascending coefficients.

use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct Poly<T> {
    pub coeffs: Vec<T>,
}

impl<T: Real> Poly<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        Poly { coeffs }
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// `c0 + c1 ζ`.
    pub fn linear(c0: T, c1: T) -> Self {
        Poly::new(vec![c0, c1])
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[T]) -> Self {
        roots.iter().fold(Poly::constant(T::one()), |p, r| {
            p.mul(&Poly::linear(-r.clone(), T::one()))
        })
    }

    /// Horner evaluation.
    pub fn eval(&self, z: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * z.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::constant(T::zero());
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * T::int(i as i64))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly<T>) -> Self {
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }

    pub fn add(&self, other: &Poly<T>) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Poly<T>, i: usize| p.coeffs.get(i).cloned().unwrap_or_else(T::zero);
        Poly::new((0..n).map(|i| get(self, i) + get(other, i)).collect())
    }

    pub fn scale(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Degree after dropping trailing coefficients with `|c| <= tau`; zero polynomial has degree 0.
    pub fn degree(&self, tau: &T) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| c.abs() > *tau)
            .unwrap_or(0)
    }

    /// Coefficient of `ζ^i`, zero past the end.
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }
}

pub fn poly_eval<T: Real>(p: &Poly<T>, z: &T) -> T {
    p.eval(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluation() {
        assert_eq!(poly_eval(&Poly::new(vec![0.0, 1.0]), &3.0), 3.0);
        assert_eq!(poly_eval(&Poly::constant(7.5), &-2.0), 7.5);
        assert_eq!(poly_eval(&Poly::new(vec![-1.0, 1.0]), &1.0), 0.0);
    }

    #[test]
    fn degree_strips_small_tail() {
        let p = Poly::new(vec![1.0, 2.0, 1e-20]);
        assert_eq!(p.degree(&1e-15), 1);
        assert_eq!(Poly::new(vec![0.0f64]).degree(&1e-15), 0);
    }

    #[test]
    fn roots_and_derivative() {
        let p = Poly::from_roots(&[1.0, 2.0]);
        assert_eq!(p.coeffs, vec![2.0, -3.0, 1.0]);
        assert_eq!(p.derivative().coeffs, vec![-3.0, 2.0]);
    }
}
