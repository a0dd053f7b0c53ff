//! Pochhammer symbols, q-shifted factorials and (basic) hypergeometric sums.

use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_TERMS: usize = 100_000;

/// `(a)_n = a (a+1) ... (a+n-1)`.
pub fn pochhammer<T: Real>(a: &T, n: usize) -> T {
    (0..n).fold(T::one(), |acc, j| acc * (a.clone() + T::int(j as i64)))
}

/// `(a; q)_n = (1-a)(1-aq)...(1-aq^{n-1})`.
pub fn q_pochhammer<T: Real>(a: &T, q: &T, n: usize) -> T {
    let mut acc = T::one();
    let mut aq = a.clone();
    for _ in 0..n {
        acc = acc * (T::one() - aq.clone());
        aq = aq * q.clone();
    }
    acc
}

pub fn factorial<T: Real>(n: usize) -> T {
    (1..=n).fold(T::one(), |acc, j| acc * T::int(j as i64))
}

/// Binomial coefficient for integers `0 <= k <= n`.
pub fn binomial<T: Real>(n: usize, k: usize) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(T::one(), |acc, j| {
        acc * T::int((n - j) as i64) / T::int((j + 1) as i64)
    })
}

fn check_q<T: Real>(q: &T) -> Result<()> {
    if *q > T::zero() && *q < T::one() {
        Ok(())
    } else {
        Err(Error::InvalidQ { q: q.to_f64_lossy() })
    }
}

/// Truncated infinite product `(a; q)_∞` with a bound on the neglected relative factor.
#[derive(Debug, Clone)]
pub struct InfiniteProduct<T> {
    pub value: T,
    pub factors: usize,
    pub error_bound: T,
}

pub fn q_pochhammer_inf<T: Real>(a: &T, q: &T, tol: &T) -> Result<InfiniteProduct<T>> {
    check_q(q)?;
    let mut value = T::one();
    let mut aq = a.clone();
    let mut factors = 0;
    while aq.abs() >= *tol {
        value = value * (T::one() - aq.clone());
        aq = aq * q.clone();
        factors += 1;
        if factors > MAX_TERMS {
            return Err(Error::Divergent);
        }
    }
    // log of the tail is bounded by sum |a q^l| / (1 - |a q^l|) <= 2 |a q^L| / (1 - q).
    let error_bound = T::int(2) * aq.abs() / (T::one() - q.clone());
    Ok(InfiniteProduct {
        value,
        factors,
        error_bound,
    })
}

/// Parameters of `rFs(upper; lower; z)` or, with `q` set, of `rφs(upper; lower; q, z)`.
#[derive(Debug, Clone)]
pub struct HypSeriesSpec<T> {
    pub upper: Vec<T>,
    pub lower: Vec<T>,
    pub argument: T,
    pub q: Option<T>,
}

impl<T: Real> HypSeriesSpec<T> {
    pub fn classical(upper: Vec<T>, lower: Vec<T>, argument: T) -> Self {
        HypSeriesSpec {
            upper,
            lower,
            argument,
            q: None,
        }
    }

    pub fn basic(upper: Vec<T>, lower: Vec<T>, q: T, argument: T) -> Self {
        HypSeriesSpec {
            upper,
            lower,
            argument,
            q: Some(q),
        }
    }

    fn factor(&self, a: &T, n: usize) -> T {
        match &self.q {
            None => a.clone() + T::int(n as i64),
            Some(q) => T::one() - a.clone() * q.powi(n as i32),
        }
    }

    fn vanishes(&self, a: &T, n: usize) -> bool {
        let tau = T::tolerance();
        match &self.q {
            None => self.factor(a, n).abs() <= tau * (T::one() + a.abs()),
            Some(_) => self.factor(a, n).abs() <= tau,
        }
    }

    /// Index of the first identically vanishing term, if the series terminates.
    pub fn terminates_at(&self) -> Option<usize> {
        (0..MAX_TERMS).find(|&n| self.upper.iter().any(|a| self.vanishes(a, n)))
    }
}

/// Sums a terminating or convergent (basic) hypergeometric series by its term ratio.
pub fn hyp_sum<T: Real>(spec: &HypSeriesSpec<T>) -> Result<T> {
    if let Some(q) = &spec.q {
        check_q(q)?;
    }
    let r = spec.upper.len() as i64;
    let s = spec.lower.len() as i64;
    let stop = spec.terminates_at();
    if stop.is_none() {
        let converges = match spec.q {
            None => r <= s || (r == s + 1 && spec.argument.abs() < T::one()),
            Some(_) => r < s + 1 || (r == s + 1 && spec.argument.abs() < T::one()),
        };
        if !converges {
            return Err(Error::Divergent);
        }
    }
    let eps = T::tolerance().powi(2);
    let limit = stop.unwrap_or(MAX_TERMS);
    let mut term = T::one();
    let mut sum = T::one();
    let mut small = 0;
    for n in 0..limit {
        let mut ratio = spec.argument.clone();
        for a in &spec.upper {
            ratio = ratio * spec.factor(a, n);
        }
        for b in &spec.lower {
            let f = spec.factor(b, n);
            if f.abs() <= T::tolerance() {
                return Err(Error::PoleInLowerParameter { term: n + 1 });
            }
            ratio = ratio / f;
        }
        match &spec.q {
            None => ratio = ratio / T::int(n as i64 + 1),
            Some(q) => {
                ratio = ratio / (T::one() - q.powi(n as i32 + 1));
                let e = 1 + s - r;
                if e != 0 {
                    let sign = if e % 2 == 0 { T::one() } else { -T::one() };
                    ratio = ratio * sign * q.powi((n as i64 * e) as i32);
                }
            }
        }
        term = term * ratio;
        sum = sum + term.clone();
        if stop.is_none() {
            if term.abs() <= eps.clone() * sum.abs() {
                small += 1;
                if small >= 3 {
                    return Ok(sum);
                }
            } else {
                small = 0;
            }
        }
    }
    if stop.is_none() {
        return Err(Error::Divergent);
    }
    Ok(sum)
}

/// `1F1(u; w; z)`.
pub fn hyp1f1<T: Real>(u: &T, w: &T, z: &T) -> Result<T> {
    hyp_sum(&HypSeriesSpec::classical(vec![u.clone()], vec![w.clone()], z.clone()))
}

/// `2F1(u, v; w; z)`.
pub fn hyp2f1<T: Real>(u: &T, v: &T, w: &T, z: &T) -> Result<T> {
    hyp_sum(&HypSeriesSpec::classical(
        vec![u.clone(), v.clone()],
        vec![w.clone()],
        z.clone(),
    ))
}

/// `2φ0(u, v; -; q, z)`.
pub fn qhyp2phi0<T: Real>(u: &T, v: &T, q: &T, z: &T) -> Result<T> {
    hyp_sum(&HypSeriesSpec::basic(
        vec![u.clone(), v.clone()],
        vec![],
        q.clone(),
        z.clone(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(&3.5f64, 0), 1.0);
        assert_eq!(pochhammer(&2.0f64, 3), 24.0);
        assert_eq!(pochhammer(&-3.0f64, 5), 0.0);
    }

    #[test]
    fn q_pochhammer_values() {
        assert_eq!(q_pochhammer(&0.3f64, &0.7, 0), 1.0);
        assert_eq!(q_pochhammer(&1.0f64, &0.7, 3), 0.0);
        assert_eq!(q_pochhammer(&0.5f64, &0.5, 2), 0.375);
    }

    #[test]
    fn infinite_product_edge_cases() {
        let p = q_pochhammer_inf(&0.0f64, &0.5, &1e-18).unwrap();
        assert_eq!(p.value, 1.0);
        let p = q_pochhammer_inf(&-2.0f64, &1e-30, &1e-40).unwrap();
        assert!((p.value - 3.0).abs() < 1e-12);
        assert!(matches!(
            q_pochhammer_inf(&1.0f64, &1.5, &1e-10),
            Err(Error::InvalidQ { .. })
        ));
    }

    #[test]
    fn small_hypergeometric_sums() {
        assert_eq!(hyp1f1(&0.0f64, &2.5, &7.0).unwrap(), 1.0);
        let a = 3.25f64;
        assert!((hyp1f1(&-1.0, &1.0, &-a).unwrap() - (1.0 + a)).abs() < 1e-14);
        assert!((hyp1f1(&-2.0f64, &1.0, &-1.0).unwrap() - 3.5).abs() < 1e-14);
        let s = hyp_sum(&HypSeriesSpec::basic(vec![1.0f64, 0.3], vec![0.2], 0.5, 0.9)).unwrap();
        assert_eq!(s, 1.0);
    }

    #[test]
    fn divergence_and_poles() {
        let spec = HypSeriesSpec::classical(vec![0.5f64, 0.5], vec![0.25], 2.0);
        assert_eq!(hyp_sum(&spec), Err(Error::Divergent));
        let spec = HypSeriesSpec::classical(vec![-5.0f64], vec![-2.0], 1.0);
        assert!(matches!(hyp_sum(&spec), Err(Error::PoleInLowerParameter { .. })));
    }

    #[test]
    fn convergent_exponential() {
        let e = hyp_sum(&HypSeriesSpec::classical(vec![], vec![], 1.0f64)).unwrap();
        assert!((e - std::f64::consts::E).abs() < 1e-14);
    }
}
