//! Closed-form recurrences for Charlier (dPIV), Meixner and Krawtchouk (dPV).
//!
//! Each carries `(e, f, g, h)` together with `D_s`, `D_{s+1}` and updates
//! `D_{s+2} = D_{s+1} (D_{s+1}/D_s + ΔR_s)` with `ΔR_s` written in the Painlevé variables.

use super::dp::{dp_from_lax, dp_to_lax, dpiv_step, dpv_step, DPState};
use super::{recoverable, PainleveRun};
use crate::lax::{step_general, LaxState};
use crate::error::{Error, Result};
use crate::family::{FamilyName, FamilySpec};
use crate::scalar::Real;
use crate::special::{binomial, factorial, hyp1f1, hyp2f1, pochhammer};

pub fn supports_closed(name: FamilyName) -> bool {
    matches!(
        name,
        FamilyName::Charlier | FamilyName::Meixner | FamilyName::Krawtchouk
    )
}

fn unsupported<T>(f: &FamilySpec<T>) -> Error {
    Error::UnsupportedFamily {
        family: f.name.key().to_string(),
        what: "a closed Painlevé recurrence".to_string(),
    }
}

fn guard<T: Real>(v: T, s: usize, expr: &'static str) -> Result<T> {
    if v.abs() <= T::tolerance() {
        Err(Error::DegenerateParameterization { s, expr })
    } else {
        Ok(v)
    }
}

/// Initial values at `s = k` from terminating hypergeometric sums. Requires `k >= 1`.
pub fn closed_init<T: Real>(f: &FamilySpec<T>, k: usize) -> Result<DPState<T>> {
    if k == 0 {
        return Err(Error::InvalidParameter {
            family: f.name.key().to_string(),
            name: "k".to_string(),
            reason: "must be at least 1".to_string(),
        });
    }
    let one = T::one();
    let kf = T::int(k as i64);
    let km = T::int(k as i64 - 1);
    let h = factorial::<T>(k);
    let fk1 = factorial::<T>(k - 1);
    let st = match f.name {
        FamilyName::Charlier => {
            let a = f.param("a");
            let z = -a.clone();
            let phi = |u: i64, w: i64| hyp1f1(&T::int(u), &T::int(w), &z);
            let k0 = k as i64;
            let (p11, p01, p12, p02) = (phi(1 - k0, 1)?, phi(-k0, 1)?, phi(1 - k0, 2)?, phi(-k0, 2)?);
            let d_prev = (-(a.clone() * kf.clone())).exp();
            let d_cur = d_prev.clone() * p01.clone();
            let e = a.powi(k as i32) * fk1 / guard(p11.clone(), k, "1F1(1-k; 1; -a)")?;
            let f_ = -a * p12.clone() / p11.clone();
            let den = guard(p01 * p12, k, "1F1(-k; 1; -a) 1F1(1-k; 2; -a)")?;
            let g = kf.clone() + one.clone() - (kf + one) * p11 * p02 / den;
            DPState { s: k, k, f: f_, g, e, h, d_prev, d_cur }
        }
        FamilyName::Meixner => {
            let (beta, c) = (f.param("beta"), f.param("c"));
            let z = one.clone() / c.clone();
            let f1 = hyp2f1(&(-km.clone()), &(-km.clone()), &(beta.clone() + one.clone()), &z)?;
            let f2 = hyp2f1(&(-kf.clone()), &(-km.clone()), &beta, &z)?;
            let f0 = hyp2f1(&(-kf.clone()), &(-kf.clone()), &beta, &z)?;
            let d_prev = (one.clone() - c.clone())
                .powf(&(kf.clone() * (beta.clone() + km.clone())));
            let d_cur = pochhammer(&beta, k) / factorial::<T>(k) * c.powi(k as i32)
                * d_prev.clone()
                * f0;
            let e = beta.clone() * c.clone() * fk1.clone() * fk1
                / guard(f1.clone(), k, "2F1(1-k, 1-k; 1+β; 1/c)")?;
            let g = kf / (beta * c) * f1 / guard(f2, k, "2F1(-k, 1-k; β; 1/c)")?;
            DPState { s: k, k, f: T::zero(), g, e, h, d_prev, d_cur }
        }
        FamilyName::Krawtchouk => {
            let p = f.param("p");
            let n = f.n().expect("finite lattice");
            if k > n {
                return Err(Error::IndexOutOfRange { x: k, n });
            }
            let nf = T::int(n as i64);
            let z = one.clone() - one.clone() / p.clone();
            let mn = -nf.clone();
            let f1 = hyp2f1(&(-km.clone()), &(-km.clone()), &(one.clone() - nf.clone()), &z)?;
            let f2 = hyp2f1(&(-kf.clone()), &(-km.clone()), &mn, &z)?;
            let f0 = hyp2f1(&(-kf.clone()), &(-kf.clone()), &mn, &z)?;
            let q = one.clone() - p.clone();
            let d_prev = q.powi((k * (n + 1 - k)) as i32);
            let d_cur = binomial::<T>(n, k) * p.powi(k as i32) * q.powi((k * (n - k)) as i32) * f0;
            let e = nf.clone() * p.clone() * q.powi(n as i32 - 1) * fk1.clone() * fk1
                / guard(f1.clone(), k, "2F1(1-k, 1-k; 1-N; 1-1/p)")?;
            let g = kf * q / (nf * p) * f1 / guard(f2, k, "2F1(-k, 1-k; -N; 1-1/p)")?;
            DPState { s: k, k, f: T::zero(), g, e, h, d_prev, d_cur }
        }
        _ => return Err(unsupported(f)),
    };
    Ok(st)
}

/// `ΔR_s = D_{s+2}/D_{s+1} - D_{s+1}/D_s` and `h_{s+1}` from states `s` and `s+1`.
pub fn closed_increment<T: Real>(f: &FamilySpec<T>, st: &DPState<T>, next: &DPState<T>) -> Result<(T, T)> {
    let s = st.s;
    let one = T::one();
    let sf = T::int(s as i64);
    let s1 = sf.clone() + one.clone();
    let (e, f_, g, h) = (&st.e, &st.f, &st.g, &st.h);
    let h2 = h.clone() * h.clone();
    match f.name {
        FamilyName::Charlier => {
            let a = f.param("a");
            let w = a.powi(s as i32 - 1) / factorial::<T>(s + 1);
            let gs = g.clone() - s1;
            let dr = w * f_.clone() * f_.clone() / e.clone() * gs.clone() * h2;
            let hn = f_.clone() * gs / a * h.clone();
            Ok((dr, hn))
        }
        FamilyName::Meixner => {
            let (beta, c) = (f.param("beta"), f.param("c"));
            let bs = beta.clone() + sf;
            let w = pochhammer(&beta, s) / bs.clone() * c.powi(s as i32 - 1) / factorial::<T>(s + 1);
            let cg = one + c.clone() * g.clone();
            let fs = cg.clone() * next.f.clone() - s1.clone();
            let dr = w * cg.clone() / (e.clone() * g.clone() * g.clone()) * fs * h2;
            let hn = cg * (s1 - next.f.clone()) / (c * bs * g.clone()) * h.clone();
            Ok((dr, hn))
        }
        FamilyName::Krawtchouk => {
            let p = f.param("p");
            let n = f.n().expect("finite lattice");
            if s >= n {
                return Err(Error::IndexOutOfRange { x: s + 1, n });
            }
            let q = one.clone() - p.clone();
            let ns = T::int((n - s) as i64);
            let w = binomial::<T>(n, s + 1) * p.powi(s as i32 - 1) * q.powi((n - s + 1) as i32)
                / (ns.clone() * ns.clone());
            let pg = one + p.clone() * g.clone() / (p.clone() - T::one());
            let fs = pg.clone() * next.f.clone() - s1.clone();
            let dr = w * pg.clone() / (e.clone() * g.clone() * g.clone()) * fs * h2;
            let hn = (p.clone() - T::one() + p.clone() * g.clone()) * (next.f.clone() - s1)
                / (p * ns * g.clone())
                * h.clone();
            Ok((dr, hn))
        }
        _ => Err(unsupported(f)),
    }
}

/// Advances `(e, f, g)` by the family's Painlevé map and `h`, `D` by the closed formulas.
pub fn closed_step<T: Real>(f: &FamilySpec<T>, st: &DPState<T>) -> Result<DPState<T>> {
    let mut next = match f.name {
        FamilyName::Charlier => dpiv_step(st, &f.param("a"))?,
        FamilyName::Meixner => {
            let (beta, c) = (f.param("beta"), f.param("c"));
            dpv_step(st, &c, &(c.clone() * (beta - T::one())))?
        }
        FamilyName::Krawtchouk => {
            let p = f.param("p");
            let n = T::int(f.n().expect("finite lattice") as i64);
            let pm = p.clone() - T::one();
            dpv_step(st, &(p.clone() / pm.clone()), &(-p * (n + T::one()) / pm))?
        }
        _ => return Err(unsupported(f)),
    };
    let (dr, hn) = closed_increment(f, st, &next)?;
    if st.d_prev.is_zero() {
        return Err(Error::DPSingular { s: st.s, expr: "D_s" });
    }
    next.h = hn;
    next.d_prev = st.d_cur.clone();
    next.d_cur = st.d_cur.clone() * (st.d_cur.clone() / st.d_prev.clone() + dr);
    if !next.d_cur.is_finite() || !next.e.is_finite() {
        return Err(Error::NonFinite { s: next.s });
    }
    Ok(next)
}

/// `D_k..=D_{s_max}` by the closed recurrence.
pub fn gap_values_closed<T: Real>(f: &FamilySpec<T>, k: usize, s_max: usize) -> Result<Vec<T>> {
    Ok(run_closed(f, k, s_max)?.values)
}

enum Cursor<T> {
    Dp(DPState<T>),
    Lax(LaxState<T>),
}

/// Closed recurrence with fallback: when the scalar parameterization breaks down the run
/// continues with the general matrix step and re-enters `(e, f, g)` as soon as it can.
pub fn run_closed<T: Real>(f: &FamilySpec<T>, k: usize, s_max: usize) -> Result<PainleveRun<T>> {
    if s_max < k {
        return Err(Error::EmptyRange { k, s_max });
    }
    let top = s_max.min(crate::lax::last_nontrivial(f));
    let st = closed_init(f, k)?;
    let mut run = PainleveRun::start(&st.d_prev, &st.d_cur, top > k);
    let mut cur = Cursor::Dp(st);
    loop {
        let s = match &cur {
            Cursor::Dp(st) => st.s,
            Cursor::Lax(st) => st.s,
        };
        if s + 2 > top {
            break;
        }
        cur = match cur {
            Cursor::Dp(st) => match closed_step(f, &st) {
                Ok(next) => Cursor::Dp(next),
                Err(e) if recoverable(&e) => {
                    run.fallback_steps.push(s);
                    reenter(f, step_general(&dp_to_lax(&st, f)?, f)?)
                }
                Err(e) => return Err(e),
            },
            Cursor::Lax(st) => {
                run.fallback_steps.push(s);
                reenter(f, step_general(&st, f)?)
            }
        };
        run.values.push(match &cur {
            Cursor::Dp(st) => st.d_cur.clone(),
            Cursor::Lax(st) => st.d_cur.clone(),
        });
    }
    run.values.resize(s_max - k + 1, T::one());
    Ok(run)
}

fn reenter<T: Real>(f: &FamilySpec<T>, st: LaxState<T>) -> Cursor<T> {
    match dp_from_lax(&st, f) {
        Ok(dp) => Cursor::Dp(dp),
        Err(_) => Cursor::Lax(st),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::make_family;
    use crate::lax::gap_values_general;

    #[test]
    fn charlier_k1_start() {
        let f = make_family(FamilyName::Charlier, &[("a", 1.0f64)]).unwrap();
        let st = closed_init(&f, 1).unwrap();
        assert!((st.d_prev - (-1f64).exp()).abs() < 1e-15);
        assert!((st.d_cur - 2.0 * (-1f64).exp()).abs() < 1e-15);
        assert_eq!((st.f, st.e, st.h), (-1.0, 1.0, 1.0));
    }

    #[test]
    fn agrees_with_general() {
        let fams = [
            make_family(FamilyName::Charlier, &[("a", 3.0f64)]).unwrap(),
            make_family(FamilyName::Meixner, &[("beta", 2.5f64), ("c", 0.4)]).unwrap(),
            make_family(FamilyName::Krawtchouk, &[("p", 0.3f64), ("N", 12.0)]).unwrap(),
        ];
        for f in &fams {
            for k in 1..4 {
                let a = gap_values_closed(f, k, 14).unwrap();
                let b = gap_values_general(f, k, 14).unwrap();
                for (x, y) in a.iter().zip(&b) {
                    assert!(f64::rel_diff(x, y) < 1e-8, "{} k={k}: {x} vs {y}", f.name);
                }
            }
        }
    }
}
