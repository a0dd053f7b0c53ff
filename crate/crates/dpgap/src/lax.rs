//! The general recurrence for `(A_s, C_s)` when `d1`, `d2` are linear, together with the
//! Fredholm-determinant update and the invariants every step must respect.

use crate::error::{Error, Result};
use crate::family::{FamilySpec, LatticeKind};
use crate::mat2::Mat2;
use crate::oracle::{compute_ak, compute_mk_linear, partition_function, truncation_length};
use crate::scalar::Real;

/// State at step `s`: `A_s = [[p, q], [r, -p]]`, `M_s(ζ) = diag(κ1, κ2) ζ + C_s`,
/// `h = m_s^{11}(π_s)`, and `D_s`, `D_{s+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaxState<T> {
    pub s: usize,
    pub k: usize,
    pub p: T,
    pub q: T,
    pub r: T,
    pub c11: T,
    pub c12: T,
    pub c21: T,
    pub c22: T,
    pub kappa1: T,
    pub kappa2: T,
    pub h: T,
    pub d_prev: T,
    pub d_cur: T,
}

impl<T: Real> LaxState<T> {
    pub fn a(&self) -> Mat2<T> {
        Mat2::new(self.p.clone(), self.q.clone(), self.r.clone(), -self.p.clone())
    }

    pub fn c(&self) -> Mat2<T> {
        Mat2::new(
            self.c11.clone(),
            self.c12.clone(),
            self.c21.clone(),
            self.c22.clone(),
        )
    }

    pub fn lambda(&self) -> Mat2<T> {
        Mat2::diag(self.kappa1.clone(), self.kappa2.clone())
    }

    /// `M_s(ζ) = Λζ + C_s`.
    pub fn m_at(&self, zeta: &T) -> Mat2<T> {
        self.lambda().scale(zeta) + self.c()
    }

    fn values(&self) -> [&T; 9] {
        [
            &self.p, &self.q, &self.r, &self.c11, &self.c12, &self.c21, &self.c22, &self.h,
            &self.d_cur,
        ]
    }

    fn ensure_finite(&self) -> Result<()> {
        if self.values().iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite { s: self.s })
        }
    }
}

/// `Π_{j<k} (π_k - π_j)`.
fn vandermonde_row<T: Real>(f: &FamilySpec<T>, k: usize) -> T {
    let pk = f.pi(k);
    (0..k).fold(T::one(), |acc, j| acc * (pk.clone() - f.pi(j)))
}

/// `D_k = Π_{i<j<k} (π_i - π_j)^2 Π_{l<k} ω(l) / Z` with `Z` a Hankel determinant of moments.
pub fn initial_gap<T: Real>(f: &FamilySpec<T>, k: usize) -> Result<T> {
    let tail = T::tolerance().powi(4);
    let len = truncation_length(f, k, &tail)?;
    let z = partition_function(f, k, len);
    let mut num = T::one();
    for j in 0..k {
        let v = vandermonde_row(f, j);
        num = num * v.clone() * v * f.weight(j)?;
    }
    Ok(num / z)
}

pub fn init_state<T: Real>(f: &FamilySpec<T>, k: usize) -> Result<LaxState<T>> {
    if let Some(n) = f.n() {
        if k > n {
            return Err(Error::IndexOutOfRange { x: k, n });
        }
    }
    let (lam, c) = compute_mk_linear(f, k)?;
    let a = compute_ak(f, k)?;
    let h = vandermonde_row(f, k);
    let d_k = initial_gap(f, k)?;
    let d_k1 = f.weight(k)? / a.a12.clone() * d_k.clone() * h.clone() * h.clone();
    let st = LaxState {
        s: k,
        k,
        p: a.a11,
        q: a.a12,
        r: a.a21,
        c11: c.a11,
        c12: c.a12,
        c21: c.a21,
        c22: c.a22,
        kappa1: lam.a11,
        kappa2: lam.a22,
        h,
        d_prev: d_k,
        d_cur: d_k1,
    };
    st.ensure_finite()?;
    Ok(st)
}

/// `ε_s` from its scalar expression.
pub fn epsilon<T: Real>(st: &LaxState<T>, f: &FamilySpec<T>) -> T {
    let eta = f.eta();
    let x = f.pi(st.s + 1);
    let base = f.d1(&x) * f.d2(&x);
    base + st.kappa1.clone() / eta.clone()
        * (st.p.clone() * st.c22.clone() - st.r.clone() * st.c12.clone())
        - st.kappa2.clone() / eta
            * (st.p.clone() * st.c11.clone() + st.q.clone() * st.c21.clone())
}

/// `ε_s = det(π_{s+1} Λ + C_s + η^{-1} A_s Λ)`.
pub fn epsilon_matrix<T: Real>(st: &LaxState<T>, f: &FamilySpec<T>) -> T {
    e_matrix(st, f).det()
}

fn e_matrix<T: Real>(st: &LaxState<T>, f: &FamilySpec<T>) -> Mat2<T> {
    let x = f.pi(st.s + 1);
    let inv_eta = T::one() / f.eta();
    st.m_at(&x) + (&st.a() * &st.lambda()).scale(&inv_eta)
}

/// `u_s` entering the Fredholm recurrence.
pub fn u_value<T: Real>(st: &LaxState<T>) -> T {
    let t = st.p.clone() / st.q.clone();
    -st.kappa2.clone() * st.c21.clone()
        + t.clone() * (st.kappa1.clone() * st.c22.clone() - st.kappa2.clone() * st.c11.clone())
        + t.clone() * t * st.kappa1.clone() * st.c12.clone()
}

/// `D_{s+2}` from `D_s`, `D_{s+1}`, `u_s` and `h_s`.
pub fn fredholm_next<T: Real>(f: &FamilySpec<T>, s: usize, d_prev: &T, d_cur: &T, u: &T, h: &T) -> Result<T> {
    let x = f.pi(s + 1);
    let w = f.weight(s).or_else(|_| Ok::<T, Error>(T::zero()))?;
    let denom = f.eta() * f.d1(&x) * f.d2(&x);
    if denom.is_zero() {
        return Err(Error::DPSingular {
            s,
            expr: "d1(π_{s+1}) d2(π_{s+1})",
        });
    }
    let incr = w * u.clone() * h.clone() * h.clone() / denom;
    Ok(d_cur.clone() * (d_cur.clone() / d_prev.clone() + incr))
}

pub fn fredholm_step<T: Real>(st: &LaxState<T>, f: &FamilySpec<T>) -> Result<T> {
    fredholm_next(f, st.s, &st.d_prev, &st.d_cur, &u_value(st), &st.h)
}

/// Tolerance below which `|ε_s|` relative to its terms counts as zero.
fn singular_eps<T: Real>() -> T {
    T::tolerance().powi(2) * T::int(1 << 20)
}

fn check_epsilon<T: Real>(st: &LaxState<T>, f: &FamilySpec<T>, eps: &T) -> Result<()> {
    let x = f.pi(st.s + 1);
    let eta = f.eta().abs();
    // magnitudes of the individual terms of ε_s, so the test measures cancellation
    let scale = (f.d1(&x) * f.d2(&x)).abs()
        + st.kappa1.abs() / eta.clone()
            * ((st.p.clone() * st.c22.clone()).abs() + (st.r.clone() * st.c12.clone()).abs())
        + st.kappa2.abs() / eta
            * ((st.p.clone() * st.c11.clone()).abs() + (st.q.clone() * st.c21.clone()).abs());
    if eps.abs() <= singular_eps::<T>() * scale {
        return Err(Error::EpsilonSingular {
            s: st.s,
            magnitude: eps.to_f64_lossy(),
            hint: T::working_precision().saturating_mul(2),
        });
    }
    Ok(())
}

/// Pushes `(p, q, r)` back onto `p^2 = -qr` when rounding has moved it off.
pub fn project_nilpotent<T: Real>(st: &mut LaxState<T>) {
    let prod = -st.q.clone() * st.r.clone();
    if prod <= T::zero() {
        return;
    }
    let drift = (st.p.clone() * st.p.clone() - prod.clone()).abs();
    let scale = st.a().norm().powi(2);
    if drift > T::tolerance().powi(2) * scale {
        let root = prod.sqrt();
        st.p = if st.p < T::zero() { -root } else { root };
    }
}

/// One step of the general recurrence including `h` and `D`.
pub fn step_general<T: Real>(st: &LaxState<T>, f: &FamilySpec<T>) -> Result<LaxState<T>> {
    let eps = epsilon(st, f);
    check_epsilon(st, f, &eps)?;
    let eta = f.eta();
    let x = f.pi(st.s + 1);
    let (k1, k2) = (st.kappa1.clone(), st.kappa2.clone());
    let (p, q, r) = (st.p.clone(), st.q.clone(), st.r.clone());
    let (al, be, ga, de) = (st.c11.clone(), st.c12.clone(), st.c21.clone(), st.c22.clone());
    let xx = p.clone() * be.clone() + q.clone() * de.clone() + k2.clone() * x.clone() * q.clone();
    let yy = r.clone() * al.clone() - p.clone() * ga.clone() + k1.clone() * x.clone() * r.clone();
    let pn = -(xx.clone() * yy.clone()) / (eta.clone() * p.clone() * eps.clone());
    let qn = xx.clone() * xx / (eta.clone() * q.clone() * eps.clone());
    let rn = yy.clone() * yy / (eta.clone() * r.clone() * eps);
    let c11 = al + k1.clone() * p.clone() / eta.clone() - k1.clone() * pn.clone();
    let c12 = be.clone() + k2.clone() * q.clone() / eta.clone() - k1.clone() * qn.clone();
    let c21 = ga + k1.clone() * r / eta.clone() - k2.clone() * rn.clone();
    let c22 = de - k2.clone() * p / eta + k2 * pn.clone();
    let a_next = Mat2::new(pn.clone(), qn, rn, -pn);
    let mut next = assemble_next(st, f, a_next, Mat2::new(c11, c12, c21, c22))?;
    project_nilpotent(&mut next);
    next.ensure_finite()?;
    Ok(next)
}

/// `h_{s+1} = (μ22 + (p/q) μ12) / d2(π_{s+1}) · h_s` with `μ = M_s(π_{s+1})`.
pub fn h_next<T: Real>(st: &LaxState<T>, f: &FamilySpec<T>) -> Result<T> {
    let x = f.pi(st.s + 1);
    let d2x = f.d2(&x);
    if d2x.is_zero() {
        return Err(Error::DPSingular {
            s: st.s,
            expr: "d2(π_{s+1})",
        });
    }
    let mu = st.m_at(&x);
    Ok((mu.a22 + st.p.clone() / st.q.clone() * mu.a12) / d2x * st.h.clone())
}

/// State `s+1` from state `s` and the next matrices `A_{s+1}`, `C_{s+1}`, however obtained.
pub fn assemble_next<T: Real>(
    st: &LaxState<T>,
    f: &FamilySpec<T>,
    a_next: Mat2<T>,
    c_next: Mat2<T>,
) -> Result<LaxState<T>> {
    let h = h_next(st, f)?;
    let d_next = fredholm_step(st, f)?;
    let next = LaxState {
        s: st.s + 1,
        k: st.k,
        p: a_next.a11,
        q: a_next.a12,
        r: a_next.a21,
        c11: c_next.a11,
        c12: c_next.a12,
        c21: c_next.a21,
        c22: c_next.a22,
        kappa1: st.kappa1.clone(),
        kappa2: st.kappa2.clone(),
        h,
        d_prev: st.d_cur.clone(),
        d_cur: d_next,
    };
    next.ensure_finite()?;
    Ok(next)
}

/// `(A_{s+1}, C_{s+1})` by solving the compatibility condition as a matrix equation.
pub fn step_matrix<T: Real>(st: &LaxState<T>, f: &FamilySpec<T>) -> Result<(Mat2<T>, Mat2<T>)> {
    let e = e_matrix(st, f);
    let inv_eta = T::one() / f.eta();
    let tau = singular_eps::<T>()
        * ((e.a11.clone() * e.a22.clone()).abs() + (e.a12.clone() * e.a21.clone()).abs());
    let e_inv = e.inv(&tau).map_err(|_| Error::EpsilonSingular {
        s: st.s,
        magnitude: e.det().to_f64_lossy(),
        hint: T::working_precision().saturating_mul(2),
    })?;
    let x = f.pi(st.s + 1);
    let a = st.a();
    let lam = st.lambda();
    let a_next = (&(&e_inv * &a) * &st.m_at(&x)).scale(&inv_eta);
    let c_next = st.c() + (&a * &lam).scale(&inv_eta) - &lam * &a_next;
    Ok((a_next, c_next))
}

/// All states `s = k..=s_last`.
pub fn run_states<T: Real>(f: &FamilySpec<T>, k: usize, s_last: usize) -> Result<Vec<LaxState<T>>> {
    let mut st = init_state(f, k)?;
    let mut out = Vec::with_capacity(s_last.saturating_sub(k) + 1);
    while st.s < s_last {
        let next = step_general(&st, f)?;
        out.push(std::mem::replace(&mut st, next));
    }
    out.push(st);
    Ok(out)
}

/// Largest `s` for which `D_s` is not trivially one.
pub fn last_nontrivial<T: Real>(f: &FamilySpec<T>) -> usize {
    f.n().map_or(usize::MAX, |n| n + 1)
}

/// `D_k..=D_{s_max}` from the general recurrence.
pub fn gap_values_general<T: Real>(f: &FamilySpec<T>, k: usize, s_max: usize) -> Result<Vec<T>> {
    if s_max < k {
        return Err(Error::EmptyRange { k, s_max });
    }
    let top = s_max.min(last_nontrivial(f));
    let mut out = Vec::with_capacity(s_max - k + 1);
    let mut st = init_state(f, k)?;
    out.push(st.d_prev.clone());
    if top > k {
        out.push(st.d_cur.clone());
    }
    while st.s + 2 <= top {
        st = step_general(&st, f)?;
        out.push(st.d_cur.clone());
    }
    out.resize(s_max - k + 1, T::one());
    Ok(out)
}

/// Worst residuals of the step invariants over a run.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantReport<T> {
    /// `|p^2 + qr| / ‖A‖^2`.
    pub nilpotency: T,
    /// `|c11 + p + k|` and `|c22 - ξp - ξk - τ|` (linear lattice only).
    pub trace: Option<T>,
    /// `|det(Λζ + C_s) - d1 d2| / |d1 d2|` at sample points.
    pub determinant: T,
    /// Relative residual of the compatibility condition at sample points.
    pub compatibility: T,
    /// `|ε_s - det(E_s)|` relative to the larger magnitude.
    pub epsilon: T,
}

impl<T: Real> InvariantReport<T> {
    fn zero(linear: bool) -> Self {
        InvariantReport {
            nilpotency: T::zero(),
            trace: linear.then(T::zero),
            determinant: T::zero(),
            compatibility: T::zero(),
            epsilon: T::zero(),
        }
    }

    fn merge(&mut self, o: &InvariantReport<T>) {
        self.nilpotency = T::max_of(self.nilpotency.clone(), o.nilpotency.clone());
        self.trace = match (self.trace.take(), o.trace.clone()) {
            (Some(a), Some(b)) => Some(T::max_of(a, b)),
            (a, b) => a.or(b),
        };
        self.determinant = T::max_of(self.determinant.clone(), o.determinant.clone());
        self.compatibility = T::max_of(self.compatibility.clone(), o.compatibility.clone());
        self.epsilon = T::max_of(self.epsilon.clone(), o.epsilon.clone());
    }
}

/// Sample points for identity checks: fixed, away from the lattice.
pub fn sample_points<T: Real>(f: &FamilySpec<T>, s: usize) -> Vec<T> {
    let scale = T::max_of(f.pi(s).abs(), T::one());
    ["0.3183098861837907", "-1.4142135623730951", "2.718281828459045"]
        .iter()
        .map(|v| T::parse(v).expect("literal") * scale.clone())
        .collect()
}

/// `‖(I + A_s/(σζ-π_s)) M_s(ζ) - M_{s+1}(ζ)(I + A_{s+1}/(ζ-π_{s+1}))‖` relative to the terms.
pub fn compatibility_residual<T: Real>(
    f: &FamilySpec<T>,
    cur: &LaxState<T>,
    next: &LaxState<T>,
    zeta: &T,
) -> T {
    let sz = f.lattice.sigma(zeta);
    let left_factor = Mat2::identity() + cur.a().scale(&(T::one() / (sz - f.pi(cur.s))));
    let right_factor =
        Mat2::identity() + next.a().scale(&(T::one() / (zeta.clone() - f.pi(next.s))));
    let lhs = &left_factor * &cur.m_at(zeta);
    let rhs = &next.m_at(zeta) * &right_factor;
    let scale = T::max_of(T::max_of(lhs.norm(), rhs.norm()), T::one());
    (lhs - rhs).norm() / scale
}

/// Invariants of a single state (and, given the successor, the compatibility condition).
pub fn check_state<T: Real>(
    f: &FamilySpec<T>,
    st: &LaxState<T>,
    next: Option<&LaxState<T>>,
) -> InvariantReport<T> {
    let linear = f.lattice.kind == LatticeKind::Linear;
    let mut rep = InvariantReport::zero(linear);
    let a = st.a();
    let an = T::max_of(a.norm().powi(2), T::tolerance().powi(4));
    rep.nilpotency = (st.p.clone() * st.p.clone() + st.q.clone() * st.r.clone()).abs() / an;
    if linear {
        let k = T::int(st.k as i64);
        let xi = f.d2.coeff(1);
        let tau = f.d2.coeff(0);
        let t1 = (st.c11.clone() + st.p.clone() + k.clone()).abs();
        let t2 = (st.c22.clone() - xi.clone() * st.p.clone() - xi * k - tau).abs();
        let scale = T::max_of(T::one(), T::max_of(st.c22.abs(), st.c11.abs()));
        rep.trace = Some(T::max_of(t1, t2) / scale);
    }
    for z in sample_points(f, st.s) {
        let lhs = st.m_at(&z).det();
        let rhs = f.d1(&z) * f.d2(&z);
        let scale = T::max_of(
            T::max_of(rhs.abs(), (st.m_at(&z).norm()).powi(2)),
            T::one(),
        );
        rep.determinant = T::max_of(rep.determinant.clone(), (lhs - rhs).abs() / scale);
        if let Some(n) = next {
            rep.compatibility =
                T::max_of(rep.compatibility.clone(), compatibility_residual(f, st, n, &z));
        }
    }
    let e1 = epsilon(st, f);
    let e2 = epsilon_matrix(st, f);
    rep.epsilon = T::rel_diff(&e1, &e2);
    rep
}

/// Runs `k..=s_last` and returns the worst invariant residuals.
pub fn check_run<T: Real>(f: &FamilySpec<T>, k: usize, s_last: usize) -> Result<InvariantReport<T>> {
    let states = run_states(f, k, s_last)?;
    let linear = f.lattice.kind == LatticeKind::Linear;
    let mut rep = InvariantReport::zero(linear);
    for (i, st) in states.iter().enumerate() {
        rep.merge(&check_state(f, st, states.get(i + 1)));
    }
    Ok(rep)
}
