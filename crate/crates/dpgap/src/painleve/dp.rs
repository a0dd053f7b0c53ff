//! dPIV / dPV variables for linear-lattice families with `d1 = ζ`, `d2 = ξζ + τ`.
//!
//! The matrices are parameterized as
//! `A_s = (k+b)[[-1, -αβ], [1/(αβ), 1]]`, `C_s = [[b, bβ], [(τ-ξb)/β, τ-ξb]]`,
//! and the scalar variables are
//! `f = -k-b+s/(1-α)`, `g = -α` when `ξ ≠ 0`, and `f = 1/α`, `g = τα+b+s+1` when `ξ = 0`.
//! `e` always stands for `β`.

use crate::error::{Error, Result};
use crate::family::{FamilySpec, LatticeKind};
use crate::lax::LaxState;
use crate::mat2::Mat2;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct DPState<T> {
    pub s: usize,
    pub k: usize,
    pub f: T,
    pub g: T,
    pub e: T,
    /// `m_s^{11}(π_s)`.
    pub h: T,
    /// `D_s`.
    pub d_prev: T,
    /// `D_{s+1}`.
    pub d_cur: T,
}

/// `d2 = ξζ + τ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DpKind {
    /// `ξ = 0`.
    IV,
    /// `ξ ≠ 0`.
    V,
}

/// `(ξ, τ)` for a linear-lattice family with `d1 = ζ`.
pub fn dp_coefficients<T: Real>(f: &FamilySpec<T>) -> Result<(T, T)> {
    let lin = f.linear_data()?;
    let unit = lin.lambda1 == T::one() && lin.mu1.is_zero();
    if f.lattice.kind != LatticeKind::Linear || !unit {
        return Err(Error::UnsupportedFamily {
            family: f.name.key().to_string(),
            what: "discrete Painlevé IV/V variables".to_string(),
        });
    }
    Ok((lin.lambda2, lin.mu2))
}

pub fn dp_kind<T: Real>(f: &FamilySpec<T>) -> Result<DpKind> {
    let (xi, _) = dp_coefficients(f)?;
    Ok(if xi.is_zero() { DpKind::IV } else { DpKind::V })
}

fn nonzero<T: Real>(v: &T, s: usize, expr: &'static str) -> Result<()> {
    if v.abs() <= T::tolerance() {
        Err(Error::DegenerateParameterization { s, expr })
    } else {
        Ok(())
    }
}

fn nonzero_dp<T: Real>(v: &T, s: usize, expr: &'static str) -> Result<()> {
    if v.abs() <= T::tolerance() {
        Err(Error::DPSingular { s, expr })
    } else {
        Ok(())
    }
}

pub fn dp_from_lax<T: Real>(st: &LaxState<T>, fam: &FamilySpec<T>) -> Result<DPState<T>> {
    let (xi, tau) = dp_coefficients(fam)?;
    let s = st.s;
    let k = T::int(st.k as i64);
    let b = st.c11.clone();
    nonzero(&b, s, "b_s")?;
    let beta = st.c12.clone() / b.clone();
    nonzero(&beta, s, "β_s")?;
    let kb = k.clone() + b.clone();
    nonzero(&kb, s, "k + b_s")?;
    let alpha = -st.q.clone() / (kb * beta.clone());
    let sf = T::int(s as i64);
    let (f, g) = if xi.is_zero() {
        nonzero(&alpha, s, "α_s")?;
        (
            T::one() / alpha.clone(),
            tau * alpha + b + sf + T::one(),
        )
    } else {
        let one_minus = T::one() - alpha.clone();
        nonzero(&one_minus, s, "1 - α_s")?;
        (-k - b + sf / one_minus, -alpha)
    };
    Ok(DPState {
        s,
        k: st.k,
        f,
        g,
        e: beta,
        h: st.h.clone(),
        d_prev: st.d_prev.clone(),
        d_cur: st.d_cur.clone(),
    })
}

/// `(A_s, C_s)` from the scalar variables.
pub fn dp_to_matrices<T: Real>(dp: &DPState<T>, fam: &FamilySpec<T>) -> Result<(Mat2<T>, Mat2<T>)> {
    let (xi, tau) = dp_coefficients(fam)?;
    let s = dp.s;
    let k = T::int(dp.k as i64);
    let sf = T::int(s as i64);
    let (alpha, b) = if xi.is_zero() {
        nonzero(&dp.f, s, "f_s")?;
        let alpha = T::one() / dp.f.clone();
        let b = dp.g.clone() - tau.clone() * alpha.clone() - sf - T::one();
        (alpha, b)
    } else {
        let alpha = -dp.g.clone();
        let one_minus = T::one() + dp.g.clone();
        nonzero(&one_minus, s, "1 + g_s")?;
        (alpha, -k.clone() - dp.f.clone() + sf / one_minus)
    };
    let beta = dp.e.clone();
    nonzero(&beta, s, "e_s")?;
    let ab = alpha * beta.clone();
    nonzero(&ab, s, "α_s β_s")?;
    let kb = k + b.clone();
    let a = Mat2::new(
        -kb.clone(),
        -kb.clone() * ab.clone(),
        kb.clone() / ab,
        kb,
    );
    let c22 = tau - xi * b.clone();
    let c = Mat2::new(b.clone(), b * beta.clone(), c22.clone() / beta, c22);
    Ok((a, c))
}

/// Lax state with the given `(A_s, C_s)` and the scalar bookkeeping of `dp`.
pub fn dp_to_lax<T: Real>(dp: &DPState<T>, fam: &FamilySpec<T>) -> Result<LaxState<T>> {
    let (a, c) = dp_to_matrices(dp, fam)?;
    let (xi, _) = dp_coefficients(fam)?;
    Ok(LaxState {
        s: dp.s,
        k: dp.k,
        p: a.a11,
        q: a.a12,
        r: a.a21,
        c11: c.a11,
        c12: c.a12,
        c21: c.a21,
        c22: c.a22,
        kappa1: T::one(),
        kappa2: xi,
        h: dp.h.clone(),
        d_prev: dp.d_prev.clone(),
        d_cur: dp.d_cur.clone(),
    })
}

/// Advances `(f, g, e)` by the dPV system; `h` and `D` are carried over unchanged.
pub fn dpv_step<T: Real>(st: &DPState<T>, xi: &T, tau: &T) -> Result<DPState<T>> {
    let s = st.s;
    let sf = T::int(s as i64);
    let one = T::one();
    let k = T::int(st.k as i64);
    let theta = tau.clone() / xi.clone();
    let (f, g, e) = (&st.f, &st.g, &st.e);
    let d1 = one.clone() + g.clone();
    let d2 = one.clone() + xi.clone() * g.clone();
    nonzero_dp(&d1, s, "1 + g_s")?;
    nonzero_dp(&d2, s, "1 + ξ g_s")?;
    let fn_ = -f.clone() - (k.clone() + theta.clone()) + sf.clone() / d1
        + (theta.clone() + sf.clone() + one.clone()) / d2.clone();
    let den = xi.clone() * fn_.clone() * (fn_.clone() + k.clone() + theta.clone()) * g.clone();
    nonzero_dp(&den, s, "ξ f_{s+1} (f_{s+1} + k + τ/ξ) g_s")?;
    let a = fn_.clone() - one.clone() - sf.clone();
    let gn = a.clone() * (a + k.clone()) / den;
    nonzero_dp(&gn, s, "g_{s+1}")?;
    let num = (one.clone() + gn.clone()) * fn_.clone() + (k.clone() + theta) * gn.clone()
        - sf.clone()
        - one.clone();
    let den = d2 * fn_.clone() + k - sf - one;
    nonzero_dp(&den, s, "(1 + ξ g_s) f_{s+1} + k - s - 1")?;
    let en = -e.clone() * xi.clone() * g.clone() / gn.clone() * num / den;
    Ok(DPState {
        s: s + 1,
        f: fn_,
        g: gn,
        e: en,
        ..st.clone()
    })
}

/// Advances `(f, g, e)` by the dPIV system with `d2 = τ`; `h` and `D` are carried over.
pub fn dpiv_step<T: Real>(st: &DPState<T>, tau: &T) -> Result<DPState<T>> {
    let s = st.s;
    let sf = T::int(s as i64);
    let one = T::one();
    let k = T::int(st.k as i64);
    let (f, g, e) = (&st.f, &st.g, &st.e);
    let g1 = g.clone() - sf.clone() - one.clone();
    let g2 = g.clone() + k.clone() - sf.clone() - one.clone();
    let den = f.clone() * g1 * g2.clone();
    nonzero_dp(&den, s, "f_s (g_s - s - 1)(g_s + k - s - 1)")?;
    let fn_ = tau.clone() * g.clone() / den;
    nonzero_dp(&fn_, s, "f_{s+1}")?;
    let one_minus = one.clone() - fn_.clone();
    nonzero_dp(&one_minus, s, "1 - f_{s+1}")?;
    let gn = tau.clone() / fn_.clone() - (sf.clone() + one) / one_minus - g.clone() - k
        + T::int(2) * sf
        + T::int(3);
    let en = e.clone() * tau.clone() / (f.clone() * g2);
    Ok(DPState {
        s: s + 1,
        f: fn_,
        g: gn,
        e: en,
        ..st.clone()
    })
}

/// dPV parameters `(a0, .., a4)` at step `s` with `θ = τ/ξ`.
pub fn sakai_dpv<T: Real>(s: usize, k: usize, theta: &T) -> [T; 5] {
    let s = T::int(s as i64);
    let k = T::int(k as i64);
    [
        theta.clone() + s.clone() + T::one(),
        s.clone(),
        -s,
        -(k.clone() + theta.clone()),
        k,
    ]
}

/// `a1 + 2 a2 + a3 + a4 + a0`, which must equal 1.
pub fn sakai_dpv_lambda<T: Real>(a: &[T; 5]) -> T {
    a[1].clone() + T::int(2) * a[2].clone() + a[3].clone() + a[4].clone() + a[0].clone()
}

/// dPIV parameters `(a0, .., a3)` at step `s`.
pub fn sakai_dpiv<T: Real>(s: usize, k: usize) -> [T; 4] {
    let s = T::int(s as i64);
    let k = T::int(k as i64);
    [
        -s.clone() - T::int(2),
        T::one(),
        k.clone(),
        s + T::int(2) - k,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{make_family, FamilyName};
    use crate::lax::init_state;

    #[test]
    fn charlier_k1_variables() {
        let a = 2.0f64;
        let f = make_family(FamilyName::Charlier, &[("a", a)]).unwrap();
        let dp = dp_from_lax(&init_state(&f, 1).unwrap(), &f).unwrap();
        assert!((dp.f + a).abs() < 1e-12);
        assert!((dp.g - a / (1.0 + a)).abs() < 1e-12);
        assert!((dp.e - a).abs() < 1e-12);
    }

    #[test]
    fn round_trip() {
        let f = make_family(FamilyName::Meixner, &[("beta", 1.5f64), ("c", 0.3)]).unwrap();
        let st = init_state(&f, 3).unwrap();
        let dp = dp_from_lax(&st, &f).unwrap();
        let back = dp_to_lax(&dp, &f).unwrap();
        for (x, y) in [(&st.p, &back.p), (&st.q, &back.q), (&st.r, &back.r), (&st.c21, &back.c21)] {
            assert!(f64::rel_diff(x, y) < 1e-10);
        }
    }

    #[test]
    fn sakai_sums() {
        for s in 0..20 {
            let a = sakai_dpv(s, 4, &2.5f64);
            assert_eq!(sakai_dpv_lambda(&a), 1.0);
            assert_eq!(sakai_dpiv::<f64>(s, 4).iter().sum::<f64>(), 1.0);
        }
    }
}
