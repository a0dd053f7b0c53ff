//! q-Charlier: the recurrence with `κ2 = 0` and the constant entry `C_22 = a q^{-k}`,
//! started from `2φ0` sums.

use crate::error::{Error, Result};
use crate::family::{FamilyName, FamilySpec};
use crate::scalar::Real;
use crate::special::{q_pochhammer, q_pochhammer_inf, qhyp2phi0};

/// `A_s = [[p, qs], [r, -p]]`, `C_s = [[α, β], [γ, a q^{-k}]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QCharlierState<T> {
    pub s: usize,
    pub k: usize,
    pub p: T,
    pub qs: T,
    pub r: T,
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
    pub h: T,
    pub d_prev: T,
    pub d_cur: T,
}

fn params<T: Real>(f: &FamilySpec<T>) -> Result<(T, T)> {
    if f.name != FamilyName::QCharlier {
        return Err(Error::UnsupportedFamily {
            family: f.name.key().to_string(),
            what: "the q-Charlier recurrence".to_string(),
        });
    }
    Ok((f.param("a"), f.q().expect("q-family")))
}

fn tri(n: usize) -> i32 {
    (n * (n.saturating_sub(1)) / 2) as i32
}

pub fn qcharlier_init<T: Real>(f: &FamilySpec<T>, k: usize) -> Result<QCharlierState<T>> {
    let (a, q) = params(f)?;
    if k == 0 {
        return Err(Error::InvalidParameter {
            family: f.name.key().to_string(),
            name: "k".to_string(),
            reason: "must be at least 1".to_string(),
        });
    }
    let one = T::one();
    let ki = k as i32;
    let qk = q.powi(-ki);
    let g = |u: &T, v: &T, z: T| qhyp2phi0(u, v, &q, &z);
    let g0 = g(&qk, &qk, -q.powi(2 * ki) / a.clone())?;
    let g1 = g(&qk, &(qk.clone() * q.clone()), -q.powi(2 * ki - 1) / a.clone())?;
    let q1k = q.powi(1 - ki);
    let g2 = g(&q1k, &q1k, -q.powi(2 * ki - 2) / a.clone())?;
    if g0.abs() <= T::tolerance() {
        return Err(Error::DegenerateParameterization { s: k, expr: "2φ0(q^{-k}, q^{-k}; -q^{2k}/a)" });
    }
    let tail = T::tolerance().powi(4);
    let inf = q_pochhammer_inf(&(-a.clone()), &q, &tail)?.value;
    let mut prod = one.clone();
    for n in 0..k {
        prod = prod * q.powi(tri(n + 1)) / q_pochhammer(&(-q.clone() / a.clone()), &q, n);
    }
    let base = inf.powi(-ki) * prod;
    let d_prev = base.clone() * a.powi(-tri(k));
    let qqk = q_pochhammer(&q, &q, k);
    let qqk1 = q_pochhammer(&q, &q, k - 1);
    let d_cur = base * a.powi(ki - tri(k)) / qqk.clone() * q.powi(-tri(k)) * g0.clone();
    let p = (one.clone() - qk) * g1 / g0.clone();
    let qs = qqk.clone() * qqk.clone() * q.powi(-ki * (ki + 1)) / g0;
    let r = -p.clone() * p.clone() / qs.clone();
    let qkk = q.powi(ki);
    Ok(QCharlierState {
        s: k,
        k,
        alpha: -one - qkk.clone() * p.clone(),
        beta: -qkk * qs.clone(),
        gamma: q.powi(ki * ki - 1) / (qqk1.clone() * qqk1) * g2,
        p,
        qs,
        r,
        h: q.powi(-ki * ki) * qqk,
        d_prev,
        d_cur,
    })
}

pub fn qcharlier_step<T: Real>(f: &FamilySpec<T>, st: &QCharlierState<T>) -> Result<QCharlierState<T>> {
    let (a, q) = params(f)?;
    let s = st.s;
    let ki = st.k as i32;
    let one = T::one();
    let qk = q.powi(ki);
    let qk1 = q.powi(ki - 1);
    let delta = a.clone() * q.powi(-ki);
    let (p, qs, r) = (st.p.clone(), st.qs.clone(), st.r.clone());
    let eps = a.clone() * (q.powi(-(s as i32) - 1) - one.clone())
        + qk1.clone() * (delta.clone() * p.clone() - r.clone() * st.beta.clone());
    if eps.abs() <= T::tolerance().powi(2) * (a.abs() + one.clone()) {
        return Err(Error::EpsilonSingular {
            s,
            magnitude: eps.to_f64_lossy(),
            hint: T::working_precision().saturating_mul(2),
        });
    }
    let x = p.clone() * st.beta.clone() + delta * qs.clone();
    let y = r.clone() * st.alpha.clone() - p.clone() * st.gamma.clone()
        + q.powi(ki - s as i32 - 1) * r.clone();
    let pn = -(x.clone() * y.clone()) / (q.clone() * p.clone() * eps.clone());
    let qn = x.clone() * x.clone() / (q.clone() * qs.clone() * eps.clone());
    let rn = y.clone() * y / (q.clone() * r.clone() * eps);
    let u = qk.clone() * p.clone() / (qs.clone() * qs.clone()) * x.clone();
    let h2 = st.h.clone() * st.h.clone();
    let s1 = s + 1;
    let dr = a.powi(s as i32 - 1) * q.powi((s1 * s / 2) as i32) / q_pochhammer(&q, &q, s1) * u * h2;
    if st.d_prev.is_zero() {
        return Err(Error::DPSingular { s, expr: "D_s" });
    }
    let next = QCharlierState {
        s: s1,
        k: st.k,
        alpha: st.alpha.clone() + qk1.clone() * p - qk.clone() * pn.clone(),
        beta: st.beta.clone() - qk * qn.clone(),
        gamma: st.gamma.clone() + qk1 * r,
        p: pn,
        qs: qn,
        r: rn,
        h: x / (a * qs) * st.h.clone(),
        d_prev: st.d_cur.clone(),
        d_cur: st.d_cur.clone() * (st.d_cur.clone() / st.d_prev.clone() + dr),
    };
    let vals = [&next.p, &next.qs, &next.r, &next.alpha, &next.beta, &next.gamma, &next.h, &next.d_cur];
    if vals.iter().all(|v| v.is_finite()) {
        Ok(next)
    } else {
        Err(Error::NonFinite { s: s1 })
    }
}

pub fn gap_values_qcharlier<T: Real>(f: &FamilySpec<T>, k: usize, s_max: usize) -> Result<Vec<T>> {
    if s_max < k {
        return Err(Error::EmptyRange { k, s_max });
    }
    let mut st = qcharlier_init(f, k)?;
    let mut out = vec![st.d_prev.clone()];
    if s_max > k {
        out.push(st.d_cur.clone());
    }
    while st.s + 2 <= s_max {
        st = qcharlier_step(f, &st)?;
        out.push(st.d_cur.clone());
    }
    Ok(out)
}
