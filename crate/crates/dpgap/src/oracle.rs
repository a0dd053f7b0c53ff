//! Reference computations that do not use any recurrence: orthogonal polynomials by
//! Gram–Schmidt, the Christoffel–Darboux kernel, gap probabilities by Gram determinant and by
//! subset enumeration, and the explicit solution of the discrete Riemann–Hilbert problem at
//! `s = k`.

use crate::error::{Error, Result};
use crate::family::{FamilyName, FamilySpec};
use crate::mat2::Mat2;
use crate::poly::Poly;
use crate::scalar::Real;

/// Number of lattice points scanned before giving up on the tail bound.
const MAX_LATTICE: usize = 200_000;

/// Monic orthogonal polynomials `P_0..P_{k_max}` on the (truncated) lattice.
#[derive(Debug, Clone)]
pub struct OrthoBasis<T> {
    pub family: FamilySpec<T>,
    pub k_max: usize,
    pub polys: Vec<Poly<T>>,
    /// `(P_n, P_n)_ω`.
    pub norms: Vec<T>,
    /// Number of lattice points used, `x = 0..truncation`.
    pub truncation: usize,
    pub pis: Vec<T>,
    pub weights: Vec<T>,
    /// `values[n][x] = P_n(π_x)`.
    pub values: Vec<Vec<T>>,
}

/// Smallest support length whose neglected tail `Σ |ω(x)| (1+|π_x|)^{2k}` is below
/// `tail_tol` relative to the retained mass.
pub fn truncation_length<T: Real>(f: &FamilySpec<T>, k_max: usize, tail_tol: &T) -> Result<usize> {
    if let Some(n) = f.n() {
        return Ok(n + 1);
    }
    let mut weights = f.weight_iter();
    let mut term = |x: usize| {
        let w = weights.next().expect("unbounded").abs();
        w * (T::one() + f.pi(x).abs()).powi(2 * k_max as i32)
    };
    let mut sum = T::zero();
    let mut prev = term(0);
    let mut calm = 0;
    for x in 1..MAX_LATTICE {
        sum = sum + prev.clone();
        let cur = term(x);
        let ratio = if prev.is_zero() { T::zero() } else { cur.clone() / prev.clone() };
        // the ratio may still creep upward, so bound the tail with a safety margin
        let rho = (T::one() + ratio.clone()) / T::int(2);
        if ratio < T::lit(0.999) {
            let tail = cur.clone() / (T::one() - rho);
            if tail <= tail_tol.clone() * sum.clone() {
                calm += 1;
                if calm >= 4 {
                    return Ok(x);
                }
            } else {
                calm = 0;
            }
        } else {
            calm = 0;
        }
        prev = cur;
    }
    Err(Error::Divergent)
}

pub fn build_ortho_basis<T: Real>(
    f: &FamilySpec<T>,
    k_max: usize,
    tail_tol: &T,
) -> Result<OrthoBasis<T>> {
    build_ortho_basis_covering(f, k_max, tail_tol, 0)
}

/// As [`build_ortho_basis`], keeping at least `min_len` lattice points.
pub fn build_ortho_basis_covering<T: Real>(
    f: &FamilySpec<T>,
    k_max: usize,
    tail_tol: &T,
    min_len: usize,
) -> Result<OrthoBasis<T>> {
    if let Some(n) = f.n() {
        if k_max > n {
            return Err(Error::IndexOutOfRange { x: k_max, n });
        }
    }
    let mut len = truncation_length(f, k_max, tail_tol)?.max(min_len);
    if let Some(n) = f.n() {
        len = len.min(n + 1);
    }
    let pis: Vec<T> = (0..len).map(|x| f.pi(x)).collect();
    let weights = f.weights(len);
    let dot = |u: &[T], v: &[T]| {
        u.iter()
            .zip(v)
            .zip(&weights)
            .fold(T::zero(), |acc, ((a, b), w)| acc + a.clone() * b.clone() * w.clone())
    };
    let tau = T::tolerance();
    let mut polys = vec![Poly::constant(T::one())];
    let mut values = vec![vec![T::one(); len]];
    let mut norms = vec![weights.iter().fold(T::zero(), |a, w| a + w.clone())];
    let mut scale = vec![weights.iter().fold(T::zero(), |a, w| a + w.abs())];
    if norms[0].abs() <= tau.clone() * scale[0].clone() {
        return Err(Error::DegenerateWeight { degree: 0 });
    }
    for n in 1..=k_max {
        let shift = Poly::linear(T::zero(), T::one());
        let mut poly = polys[n - 1].mul(&shift);
        let mut vals: Vec<T> = values[n - 1]
            .iter()
            .zip(&pis)
            .map(|(v, p)| v.clone() * p.clone())
            .collect();
        for _pass in 0..2 {
            for j in 0..n {
                let c = dot(&vals, &values[j]) / norms[j].clone();
                poly = poly.add(&polys[j].scale(&-c.clone()));
                for (v, pj) in vals.iter_mut().zip(&values[j]) {
                    *v = v.clone() - c.clone() * pj.clone();
                }
            }
        }
        poly.coeffs.truncate(n + 1);
        let norm = dot(&vals, &vals);
        let mag = vals
            .iter()
            .zip(&weights)
            .fold(T::zero(), |a, (v, w)| a + v.clone() * v.clone() * w.abs());
        if mag.is_zero() || norm.abs() <= tau.clone() * mag.clone() {
            return Err(Error::DegenerateWeight { degree: n });
        }
        polys.push(poly);
        values.push(vals);
        norms.push(norm);
        scale.push(mag);
    }
    Ok(OrthoBasis {
        family: f.clone(),
        k_max,
        polys,
        norms,
        truncation: len,
        pis,
        weights,
        values,
    })
}

impl<T: Real> OrthoBasis<T> {
    /// Largest `|(P_m, P_n)_ω| / sqrt(|h_m h_n|)` over `m != n`.
    pub fn orthogonality_defect(&self) -> T {
        let mut worst = T::zero();
        for m in 0..=self.k_max {
            for n in 0..m {
                let ip = self.values[m]
                    .iter()
                    .zip(&self.values[n])
                    .zip(&self.weights)
                    .fold(T::zero(), |a, ((u, v), w)| a + u.clone() * v.clone() * w.clone());
                let scale = (self.norms[m].abs() * self.norms[n].abs()).sqrt();
                worst = T::max_of(worst, ip.abs() / scale);
            }
        }
        worst
    }
}

/// Christoffel–Darboux kernel with the symmetric splitting `α = β = sqrt(ω)`.
///
/// For signed weights the splitting is `α = sqrt|ω|`, `β = ω / α`.
pub fn cd_kernel<T: Real>(b: &OrthoBasis<T>, k: usize, x: usize, y: usize) -> Result<T> {
    if k == 0 || k > b.k_max {
        return Err(Error::IndexOutOfRange { x: k, n: b.k_max });
    }
    for &z in &[x, y] {
        if z >= b.truncation {
            return Err(Error::IndexOutOfRange {
                x: z,
                n: b.truncation - 1,
            });
        }
    }
    let alpha = b.weights[x].abs().sqrt();
    let beta = if b.weights[y].is_zero() {
        T::zero()
    } else {
        b.weights[y].clone() / b.weights[y].abs().sqrt()
    };
    let (pk, pk1) = (&b.polys[k], &b.polys[k - 1]);
    let h = b.norms[k - 1].clone();
    let core = if x == y {
        let z = b.pis[x].clone();
        let d = pk.derivative();
        let d1 = pk1.derivative();
        (d.eval(&z) * pk1.eval(&z) - d1.eval(&z) * pk.eval(&z)) / h
    } else {
        let (zx, zy) = (b.pis[x].clone(), b.pis[y].clone());
        (b.values[k][x].clone() * b.values[k - 1][y].clone()
            - b.values[k - 1][x].clone() * b.values[k][y].clone())
            / (h * (zx - zy))
    };
    Ok(alpha * beta * core)
}

/// Kernel from the defining sum `Σ_{m<k} P_m(π_x) P_m(π_y) / h_m`.
pub fn cd_kernel_sum<T: Real>(b: &OrthoBasis<T>, k: usize, x: usize, y: usize) -> T {
    let alpha = b.weights[x].abs().sqrt();
    let beta = if b.weights[y].is_zero() {
        T::zero()
    } else {
        b.weights[y].clone() / b.weights[y].abs().sqrt()
    };
    let sum = (0..k).fold(T::zero(), |acc, m| {
        acc + b.values[m][x].clone() * b.values[m][y].clone() / b.norms[m].clone()
    });
    alpha * beta * sum
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det_dense<T: Real>(mut a: Vec<Vec<T>>) -> T {
    let n = a.len();
    let mut det = T::one();
    for c in 0..n {
        let piv = (c..n)
            .max_by(|&i, &j| {
                a[i][c]
                    .abs()
                    .partial_cmp(&a[j][c].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(c);
        if a[piv][c].is_zero() {
            return T::zero();
        }
        if piv != c {
            a.swap(piv, c);
            det = -det;
        }
        det = det * a[c][c].clone();
        for r in c + 1..n {
            let m = a[r][c].clone() / a[c][c].clone();
            for j in c..n {
                let v = a[c][j].clone();
                a[r][j] = a[r][j].clone() - m.clone() * v;
            }
        }
    }
    det
}

/// `D_s` as the determinant of the Gram matrix of the orthonormalized `P_0..P_{k-1}` over
/// `x < s`.
pub fn gap_probability_gram<T: Real>(b: &OrthoBasis<T>, k: usize, s: usize) -> Result<T> {
    Ok(gap_probabilities_gram(b, k, s)?.pop().unwrap_or_else(T::zero))
}

/// `D_0..=D_{s_max}` from incremental Gram matrices.
pub fn gap_probabilities_gram<T: Real>(b: &OrthoBasis<T>, k: usize, s_max: usize) -> Result<Vec<T>> {
    if k > b.k_max {
        return Err(Error::IndexOutOfRange { x: k, n: b.k_max });
    }
    let full = b.family.n().map(|n| n + 1);
    if s_max > b.truncation && full.is_some_and(|f| s_max > f) {
        return Err(Error::IndexOutOfRange {
            x: s_max,
            n: b.truncation,
        });
    }
    let norm_prod = b.norms[..k].iter().fold(T::one(), |a, h| a * h.clone());
    let mut g = vec![vec![T::zero(); k]; k];
    let mut out = Vec::with_capacity(s_max + 1);
    for s in 0..=s_max {
        if s > 0 {
            let x = s - 1;
            if x >= b.truncation {
                return Err(Error::IndexOutOfRange {
                    x,
                    n: b.truncation - 1,
                });
            }
            let w = b.weights[x].clone();
            for m in 0..k {
                let wm = b.values[m][x].clone() * w.clone();
                for n in 0..=m {
                    let v = g[m][n].clone() + wm.clone() * b.values[n][x].clone();
                    g[m][n] = v.clone();
                    g[n][m] = v;
                }
            }
        }
        out.push(if s < k {
            T::zero()
        } else {
            det_dense(g.clone()) / norm_prod.clone()
        });
    }
    Ok(out)
}

/// Normalizing constant `Z = Π (P_n, P_n)_ω` as the Hankel determinant of moments, computed at
/// twice the working precision.
pub fn partition_function<T: Real>(f: &FamilySpec<T>, k: usize, len: usize) -> T {
    let bits = T::working_precision().saturating_mul(2);
    let z = T::with_precision(bits, || {
        let f = f.clone();
        let mut mom = vec![T::zero(); 2 * k.max(1) - 1];
        for (x, w) in f.weight_iter().take(len).enumerate() {
            let p = f.pi(x);
            let mut pw = w;
            for m in mom.iter_mut() {
                *m = m.clone() + pw.clone();
                pw = pw * p.clone();
            }
        }
        let h = (0..k)
            .map(|i| (0..k).map(|j| mom[i + j].clone()).collect())
            .collect();
        det_dense(h).to_sci(bits as usize / 3 + 4)
    });
    T::parse(&z).unwrap_or_else(T::zero)
}

/// `D_s` by summing the ensemble over all `k`-subsets of `{0, .., s-1}`.
pub fn gap_probability_enumeration<T: Real>(
    f: &FamilySpec<T>,
    k: usize,
    s: usize,
    x_cut: usize,
) -> Result<T> {
    if s < k {
        return Ok(T::zero());
    }
    let count = (0..k).fold(1.0f64, |a, j| a * (s - j) as f64 / (j + 1) as f64);
    if count > 1.0e6 {
        return Err(Error::TooLarge { s, k });
    }
    let mut len = x_cut.max(s);
    if let Some(n) = f.n() {
        len = len.min(n + 1);
    }
    let z = partition_function(f, k, len);
    let pis: Vec<T> = (0..s).map(|x| f.pi(x)).collect();
    let ws = f.weights(s);
    let mut idx: Vec<usize> = (0..k).collect();
    let mut total = T::zero();
    loop {
        let mut term = T::one();
        for (a, &i) in idx.iter().enumerate() {
            term = term * ws[i].clone();
            for &j in &idx[..a] {
                let d = pis[i].clone() - pis[j].clone();
                term = term * d.clone() * d;
            }
        }
        total = total + term;
        // next combination in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(total / z);
            }
            i -= 1;
            if idx[i] < s - k + i {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// `ρ_m = ω(m)^{-1} Π_{j<k, j≠m} (π_m - π_j)^{-2}` for `m <= k`.
fn rho<T: Real>(f: &FamilySpec<T>, k: usize, m: usize) -> Result<T> {
    let pm = f.pi(m);
    let mut prod = f.weight(m)?;
    for j in (0..k).filter(|&j| j != m) {
        let d = pm.clone() - f.pi(j);
        prod = prod * d.clone() * d;
    }
    Ok(T::one() / prod)
}

/// The explicit solution `m_k(ζ)` of the DRHP on `{π_0, .., π_{k-1}}`.
pub fn compute_mk<T: Real>(f: &FamilySpec<T>, k: usize, zeta: &T) -> Result<Mat2<T>> {
    Ok(mk_with_derivative(f, k, zeta)?.0)
}

/// `m_k(ζ)` and its derivative.
fn mk_with_derivative<T: Real>(f: &FamilySpec<T>, k: usize, zeta: &T) -> Result<(Mat2<T>, Mat2<T>)> {
    let tau = T::tolerance();
    let mut prod = T::one();
    let mut inv_sum = T::zero();
    let mut s1 = T::zero();
    let mut s2 = T::zero();
    for j in 0..k {
        let d = zeta.clone() - f.pi(j);
        if d.abs() <= tau.clone() * (T::one() + zeta.abs()) {
            return Err(Error::PoleHit { index: j });
        }
        let r = rho(f, k, j)?;
        prod = prod * d.clone();
        inv_sum = inv_sum + T::one() / d.clone();
        s1 = s1 + r.clone() / d.clone();
        s2 = s2 + r / (d.clone() * d);
    }
    let dprod = prod.clone() * inv_sum;
    let m = Mat2::new(
        prod.clone(),
        T::zero(),
        prod.clone() * s1.clone(),
        T::one() / prod.clone(),
    );
    let dm = Mat2::new(
        dprod.clone(),
        T::zero(),
        dprod.clone() * s1 - prod.clone() * s2,
        -dprod / (prod.clone() * prod),
    );
    Ok((m, dm))
}

/// The nilpotent residue matrix `A_k` with entries `p_k, q_k, r_k, -p_k`.
pub fn compute_ak<T: Real>(f: &FamilySpec<T>, k: usize) -> Result<Mat2<T>> {
    if let Some(n) = f.n() {
        if k > n {
            return Err(Error::IndexOutOfRange { x: k, n });
        }
    }
    let pk = f.pi(k);
    let mut inv_q = rho(f, k, k)?;
    let mut sum = T::zero();
    for m in 0..k {
        let d = pk.clone() - f.pi(m);
        let r = rho(f, k, m)?;
        inv_q = inv_q + r.clone() / (d.clone() * d.clone());
        sum = sum + r / d;
    }
    let q = T::one() / inv_q;
    let p = -q.clone() * sum.clone();
    let r = -q.clone() * sum.clone() * sum;
    Ok(Mat2::new(p.clone(), q, r, -p))
}

/// `Σ_{m<k} ρ_m`.
pub fn rho_sum<T: Real>(f: &FamilySpec<T>, k: usize) -> Result<T> {
    (0..k).try_fold(T::zero(), |acc, m| Ok(acc + rho(f, k, m)?))
}

/// Leading and constant coefficients `(Λ, C_k)` of `M_k(ζ) = Λζ + C_k` for families with
/// linear `d1`, `d2`.
pub fn compute_mk_linear<T: Real>(f: &FamilySpec<T>, k: usize) -> Result<(Mat2<T>, Mat2<T>)> {
    let lin = f.linear_data()?;
    let a = compute_ak(f, k)?;
    let (p, q, r) = (a.a11.clone(), a.a12.clone(), a.a21.clone());
    let eta = f.eta();
    let ek = eta.powi(k as i32);
    let emk = eta.powi(-(k as i32));
    let (pi0, pik) = (f.pi(0), f.pi(k));
    let kappa1 = ek.clone() * lin.lambda1.clone();
    let kappa2 = emk.clone() * lin.lambda2.clone();
    let c11 = ek.clone() * lin.mu1.clone() + kappa1.clone() * (pi0.clone() - pik.clone() - p.clone());
    let c12 = -kappa1.clone() * q;
    let c21 = -kappa2.clone() * r
        + (ek / eta * lin.lambda1 - kappa2.clone()) * rho_sum(f, k)?;
    let c22 = emk * lin.mu2 + kappa2.clone() * (p + pik - pi0);
    Ok((Mat2::diag(kappa1, kappa2), Mat2::new(c11, c12, c21, c22)))
}

/// Numerical solution `m_s(ζ) = Π_{j=k}^{s-1} (I + A_j/(ζ-π_j)) · m_k(ζ)`.
#[derive(Debug, Clone)]
pub struct DrhpSolution<T> {
    pub family: FamilySpec<T>,
    pub k: usize,
    pub s: usize,
    /// `A_k, .., A_{s-1}` in order of application.
    pub steps: Vec<Mat2<T>>,
}

impl<T: Real> DrhpSolution<T> {
    pub fn initial(f: &FamilySpec<T>, k: usize) -> Self {
        DrhpSolution {
            family: f.clone(),
            k,
            s: k,
            steps: Vec::new(),
        }
    }

    pub fn eval(&self, zeta: &T) -> Result<Mat2<T>> {
        Ok(self.eval_with_derivative(zeta)?.0)
    }

    /// `m_s(ζ)` and `m_s'(ζ)` by the product rule.
    pub fn eval_with_derivative(&self, zeta: &T) -> Result<(Mat2<T>, Mat2<T>)> {
        let (mut m, mut dm) = mk_with_derivative(&self.family, self.k, zeta)?;
        let tau = T::tolerance();
        for (j, a) in self.steps.iter().enumerate() {
            let x = self.k + j;
            let d = zeta.clone() - self.family.pi(x);
            if d.abs() <= tau.clone() * (T::one() + zeta.abs()) {
                return Err(Error::PoleHit { index: x });
            }
            let factor = Mat2::identity() + a.scale(&(T::one() / d.clone()));
            let dfactor = a.scale(&(-T::one() / (d.clone() * d)));
            dm = &dfactor * &m + &factor * &dm;
            m = &factor * &m;
        }
        Ok((m, dm))
    }

    /// Residuals of the two conditions characterizing `A_s`, relative to `‖A m_s(π_s)‖`.
    pub fn residue_residual(&self, a: &Mat2<T>) -> Result<T> {
        let x = self.s;
        let px = self.family.pi(x);
        let (m, dm) = self.eval_with_derivative(&px)?;
        let w = Mat2::new(T::zero(), self.family.weight(x)?, T::zero(), T::zero());
        let mw = &m * &w;
        let cond1 = a * &mw;
        let am = a * &m;
        let cond2 = mw.clone() + &(a * &dm) * &w - am.clone();
        let scale = T::max_of(T::max_of(am.norm(), mw.norm()), T::one());
        Ok(T::max_of(cond1.norm(), cond2.norm()) / scale)
    }
}

/// Advances `m_s` to `m_{s+1}` after checking that `A` is the residue matrix at `π_s`.
pub fn drhp_lax_advance<T: Real>(sol: &DrhpSolution<T>, a: &Mat2<T>, tol: &T) -> Result<DrhpSolution<T>> {
    let residual = sol.residue_residual(a)?;
    if residual > *tol {
        return Err(Error::ResidueViolation {
            s: sol.s,
            residual: residual.to_f64_lossy(),
        });
    }
    let mut next = sol.clone();
    next.steps.push(a.clone());
    next.s += 1;
    Ok(next)
}

/// Checks `-k P_k(ζ) = a P_k(ζ+1) - (ζ+a) P_k(ζ) + ζ P_k(ζ-1)` for a given polynomial.
pub fn charlier_difference_residual<T: Real>(a: &T, k: usize, p: &Poly<T>, zeta: &T) -> T {
    let one = T::one();
    let lhs = -T::int(k as i64) * p.eval(zeta);
    let t1 = a.clone() * p.eval(&(zeta.clone() + one.clone()));
    let t2 = (zeta.clone() + a.clone()) * p.eval(zeta);
    let t3 = zeta.clone() * p.eval(&(zeta.clone() - one));
    let scale = T::max_of(
        T::max_of(t1.abs(), t2.abs()),
        T::max_of(t3.abs(), lhs.abs()),
    );
    let r = (lhs - (t1 - t2 + t3)).abs();
    if scale.is_zero() {
        r
    } else {
        r / scale
    }
}

/// Builds the monic Charlier polynomial of degree `k` by Gram–Schmidt and checks its
/// difference equation at every sample.
pub fn charlier_difference_check<T: Real>(a: &T, k: usize, zeta_samples: &[T]) -> Result<bool> {
    let f = crate::family::make_family(FamilyName::Charlier, &[("a", a.clone())])?;
    let b = build_ortho_basis(&f, k, &T::tolerance().powi(2))?;
    let tol = T::tolerance();
    Ok(zeta_samples
        .iter()
        .all(|z| charlier_difference_residual(a, k, &b.polys[k], z) <= tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::make_family;

    fn charlier(a: f64) -> FamilySpec<f64> {
        make_family(FamilyName::Charlier, &[("a", a)]).unwrap()
    }

    #[test]
    fn charlier_basis_low_degrees() {
        let a = 2.5;
        let b = build_ortho_basis(&charlier(a), 3, &1e-30).unwrap();
        assert_eq!(b.polys[0].coeffs, vec![1.0]);
        assert!((b.polys[1].coeff(0) + a).abs() < 1e-12);
        for n in 0..=3 {
            let expect = a.powi(n as i32) * a.exp() * (1..=n).product::<usize>() as f64;
            assert!((b.norms[n] / expect - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn single_particle_gap() {
        let a = 1.0;
        let b = build_ortho_basis(&charlier(a), 1, &1e-30).unwrap();
        let d = gap_probabilities_gram(&b, 1, 3).unwrap();
        assert!((d[1] - (-a).exp()).abs() < 1e-14);
        assert!((d[3] - 2.5 * (-a).exp()).abs() < 1e-14);
    }

    #[test]
    fn k1_ak_and_mk() {
        let a = 3.0;
        let f = charlier(a);
        let ak = compute_ak(&f, 1).unwrap();
        assert!((ak.a12 - a / (1.0 + a)).abs() < 1e-14);
        assert!((ak.a11 + a / (1.0 + a)).abs() < 1e-14);
        assert!((ak.a21 + a / (1.0 + a)).abs() < 1e-14);
        let m = compute_mk(&f, 1, &2.0).unwrap();
        assert_eq!(m, Mat2::new(2.0, 0.0, 1.0, 0.5));
        assert!(matches!(compute_mk(&f, 1, &0.0), Err(Error::PoleHit { index: 0 })));
    }

    #[test]
    fn charlier_leading_matrix() {
        let (lam, c) = compute_mk_linear(&charlier(2.0), 3).unwrap();
        assert_eq!(lam, Mat2::diag(1.0, 0.0));
        let ak = compute_ak(&charlier(2.0), 3).unwrap();
        assert!((c.a11 + ak.a11 + 3.0).abs() < 1e-12);
    }

    #[test]
    fn difference_equation_detects_perturbation() {
        let a = 1.0;
        assert!(charlier_difference_check(&a, 0, &[0.3, 1.7]).unwrap());
        assert!(charlier_difference_check(&a, 1, &[0.3, 1.7, -2.2]).unwrap());
        let p = Poly::new(vec![-a + 1e-3, 1.0]);
        assert!(charlier_difference_residual(&a, 1, &p, &0.3) > 1e-6);
    }

    #[test]
    fn dense_determinant() {
        let m = vec![vec![0.0, 2.0], vec![3.0, 1.0]];
        assert_eq!(det_dense(m), -6.0);
    }
}
