//! Weight, lattice and Lax data for the supported orthogonal polynomial families.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::Real;
use crate::special::{binomial, factorial, pochhammer, q_pochhammer};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyName {
    Hahn,
    Meixner,
    Krawtchouk,
    Charlier,
    QHahn,
    LittleQJacobi,
    QMeixner,
    QuantumQKrawtchouk,
    QKrawtchouk,
    AffineQKrawtchouk,
    LittleQLaguerre,
    AlternativeQCharlier,
    QCharlier,
    AlSalamCarlitzII,
}

impl FamilyName {
    pub const ALL: [FamilyName; 14] = [
        FamilyName::Hahn,
        FamilyName::Meixner,
        FamilyName::Krawtchouk,
        FamilyName::Charlier,
        FamilyName::QHahn,
        FamilyName::LittleQJacobi,
        FamilyName::QMeixner,
        FamilyName::QuantumQKrawtchouk,
        FamilyName::QKrawtchouk,
        FamilyName::AffineQKrawtchouk,
        FamilyName::LittleQLaguerre,
        FamilyName::AlternativeQCharlier,
        FamilyName::QCharlier,
        FamilyName::AlSalamCarlitzII,
    ];

    /// Snake-case identifier used on the command line.
    pub fn key(self) -> &'static str {
        use FamilyName::*;
        match self {
            Hahn => "hahn",
            Meixner => "meixner",
            Krawtchouk => "krawtchouk",
            Charlier => "charlier",
            QHahn => "q_hahn",
            LittleQJacobi => "little_q_jacobi",
            QMeixner => "q_meixner",
            QuantumQKrawtchouk => "quantum_q_krawtchouk",
            QKrawtchouk => "q_krawtchouk",
            AffineQKrawtchouk => "affine_q_krawtchouk",
            LittleQLaguerre => "little_q_laguerre",
            AlternativeQCharlier => "alternative_q_charlier",
            QCharlier => "q_charlier",
            AlSalamCarlitzII => "al_salam_carlitz_ii",
        }
    }

    pub fn from_key(key: &str) -> Option<FamilyName> {
        let k = key.trim().to_ascii_lowercase().replace('-', "_");
        FamilyName::ALL.into_iter().find(|f| f.key() == k)
    }

    pub fn title(self) -> &'static str {
        use FamilyName::*;
        match self {
            Hahn => "Hahn",
            Meixner => "Meixner",
            Krawtchouk => "Krawtchouk",
            Charlier => "Charlier",
            QHahn => "q-Hahn",
            LittleQJacobi => "little q-Jacobi",
            QMeixner => "q-Meixner",
            QuantumQKrawtchouk => "quantum q-Krawtchouk",
            QKrawtchouk => "q-Krawtchouk",
            AffineQKrawtchouk => "affine q-Krawtchouk",
            LittleQLaguerre => "little q-Laguerre/Wall",
            AlternativeQCharlier => "alternative q-Charlier",
            QCharlier => "q-Charlier",
            AlSalamCarlitzII => "Al-Salam-Carlitz II",
        }
    }

    pub fn param_names(self) -> &'static [&'static str] {
        use FamilyName::*;
        match self {
            Hahn => &["alpha", "beta", "N"],
            Meixner => &["beta", "c"],
            Krawtchouk => &["p", "N"],
            Charlier => &["a"],
            QHahn => &["alpha", "beta", "N", "q"],
            LittleQJacobi => &["a", "b", "q"],
            QMeixner => &["b", "c", "q"],
            QuantumQKrawtchouk | QKrawtchouk | AffineQKrawtchouk => &["p", "N", "q"],
            LittleQLaguerre | AlternativeQCharlier | QCharlier | AlSalamCarlitzII => &["a", "q"],
        }
    }

    pub fn lattice_kind(self) -> LatticeKind {
        use FamilyName::*;
        match self {
            Hahn | Meixner | Krawtchouk | Charlier => LatticeKind::Linear,
            LittleQJacobi | LittleQLaguerre | AlternativeQCharlier => {
                LatticeKind::QGeometricDecreasing
            }
            _ => LatticeKind::QGeometricIncreasing,
        }
    }

    /// Whether `d1`, `d2` are at most linear, so the general recurrence applies.
    pub fn supports_linear_recurrence(self) -> bool {
        use FamilyName::*;
        matches!(
            self,
            Charlier
                | Meixner
                | Krawtchouk
                | QCharlier
                | LittleQLaguerre
                | AlternativeQCharlier
                | LittleQJacobi
                | QKrawtchouk
        )
    }

    pub fn is_finite(self) -> bool {
        self.param_names().contains(&"N")
    }
}

impl fmt::Display for FamilyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeKind {
    /// `π_x = x`, `σζ = ζ - 1`.
    Linear,
    /// `π_x = q^x`, `σζ = ζ / q`.
    QGeometricDecreasing,
    /// `π_x = q^{-x}`, `σζ = q ζ`.
    QGeometricIncreasing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSpec<T> {
    pub kind: LatticeKind,
    pub q: Option<T>,
    /// Largest index for finite lattices.
    pub n: Option<usize>,
}

impl<T: Real> LatticeSpec<T> {
    pub fn pi(&self, x: usize) -> T {
        match self.kind {
            LatticeKind::Linear => T::int(x as i64),
            LatticeKind::QGeometricDecreasing => self.q().powi(x as i32),
            LatticeKind::QGeometricIncreasing => self.q().powi(-(x as i32)),
        }
    }

    fn q(&self) -> T {
        self.q.clone().expect("q-lattice carries q")
    }

    /// Derivative of the affine map σ.
    pub fn eta(&self) -> T {
        match self.kind {
            LatticeKind::Linear => T::one(),
            LatticeKind::QGeometricDecreasing => T::one() / self.q(),
            LatticeKind::QGeometricIncreasing => self.q(),
        }
    }

    pub fn sigma(&self, z: &T) -> T {
        match self.kind {
            LatticeKind::Linear => z.clone() - T::one(),
            _ => self.eta() * z.clone(),
        }
    }

    pub fn sigma_inv(&self, z: &T) -> T {
        match self.kind {
            LatticeKind::Linear => z.clone() + T::one(),
            _ => z.clone() / self.eta(),
        }
    }

    pub fn increasing(&self) -> bool {
        self.kind != LatticeKind::QGeometricDecreasing
    }
}

/// Which event `D_s` measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapOrdering {
    /// `D_s = Prob{max x_i < π_s}`.
    MaxBelow,
    /// `D_s = Prob{min x_i > π_s}`.
    MinAbove,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FamilyOptions {
    /// Accept parameters where the weight changes sign; only structural ranges are enforced.
    pub allow_signed_weight: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec<T> {
    pub name: FamilyName,
    pub params: Vec<(String, T)>,
    pub lattice: LatticeSpec<T>,
    pub d1: Poly<T>,
    pub d2: Poly<T>,
    pub supports_linear_recurrence: bool,
    pub ordering: GapOrdering,
    pub signed_weight: bool,
}

/// Coefficients of `d1 = λ1 ζ + μ1`, `d2 = λ2 ζ + μ2`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearData<T> {
    pub lambda1: T,
    pub mu1: T,
    pub lambda2: T,
    pub mu2: T,
}

pub fn make_family<T: Real>(name: FamilyName, params: &[(&str, T)]) -> Result<FamilySpec<T>> {
    make_family_with(name, params, FamilyOptions::default())
}

pub fn make_family_with<T: Real>(
    name: FamilyName,
    params: &[(&str, T)],
    opts: FamilyOptions,
) -> Result<FamilySpec<T>> {
    let v = Validator { name, params };
    for (key, _) in params {
        if !name.param_names().contains(key) {
            return Err(v.err(key, "unknown parameter"));
        }
    }
    let strict = !opts.allow_signed_weight;
    let n = if name.is_finite() { Some(v.integer("N")?) } else { None };
    let q = if name.lattice_kind() != LatticeKind::Linear {
        let q = v.get("q")?;
        v.open_interval("q", &q, &T::zero(), &T::one())?;
        Some(q)
    } else {
        None
    };
    let one = T::one();
    let zeta = || Poly::linear(T::zero(), T::one());
    let zeta_minus = |c: T| Poly::linear(-c, T::one());
    use FamilyName::*;
    let (d1, d2) = match name {
        Hahn => {
            let (al, be) = (v.get("alpha")?, v.get("beta")?);
            let nn = T::int(n.unwrap_or(0) as i64);
            let lower = al > -T::one() && be > -T::one();
            let upper = al < -nn.clone() && be < -nn.clone();
            if !(lower || upper) {
                return Err(v.err("alpha", "need alpha, beta > -1 or alpha, beta < -N"));
            }
            (
                zeta().mul(&zeta_minus(be + nn.clone() + one.clone())),
                zeta_minus(nn + one).mul(&zeta_minus(-al)),
            )
        }
        Meixner => {
            let (be, c) = (v.get("beta")?, v.get("c")?);
            v.positive("beta", &be)?;
            v.open_interval("c", &c, &T::zero(), &one)?;
            (zeta(), Poly::linear(c.clone() * (be - one), c))
        }
        Krawtchouk => {
            let p = v.get("p")?;
            v.open_interval("p", &p, &T::zero(), &one)?;
            let ratio = p.clone() / (p - one.clone());
            let nn = T::int(n.unwrap_or(0) as i64);
            (zeta(), zeta_minus(nn + one).scale(&ratio))
        }
        Charlier => {
            let a = v.get("a")?;
            v.positive("a", &a)?;
            (zeta(), Poly::constant(a))
        }
        QHahn => {
            let q = q.clone().unwrap();
            let (al, be) = (v.get("alpha")?, v.get("beta")?);
            let qn = q.powi(-(n.unwrap_or(0) as i32));
            let low = |x: &T| *x > T::zero() && *x < one.clone() / q.clone();
            let high = |x: &T| *x > qn.clone();
            if !((low(&al) && low(&be)) || (high(&al) && high(&be))) {
                return Err(v.err("alpha", "need 0 < alpha, beta < 1/q or alpha, beta > q^-N"));
            }
            let qn1 = qn / q.clone();
            (
                zeta_minus(one.clone())
                    .mul(&zeta_minus(qn1.clone() / be.clone()))
                    .scale(&(al.clone() * be)),
                zeta_minus(al).mul(&zeta_minus(qn1)),
            )
        }
        LittleQJacobi => {
            let q = q.clone().unwrap();
            let (a, b) = (v.get("a")?, v.get("b")?);
            v.open_interval("a", &a, &T::zero(), &(one.clone() / q.clone()))?;
            if strict && b >= one.clone() / q {
                return Err(v.err("b", "need b < 1/q for a positive weight"));
            }
            (zeta_minus(one.clone()), Poly::linear(-a.clone(), a * b))
        }
        QMeixner => {
            let q = q.clone().unwrap();
            let (b, c) = (v.get("b")?, v.get("c")?);
            v.open_interval("b", &b, &T::zero(), &(one.clone() / q))?;
            v.positive("c", &c)?;
            (
                zeta_minus(one).mul(&zeta_minus(-(b.clone() * c.clone()))),
                zeta_minus(b).scale(&c),
            )
        }
        QuantumQKrawtchouk => {
            let q = q.clone().unwrap();
            let p = v.get("p")?;
            let nn = n.unwrap_or(0) as i32;
            if strict && p <= q.powi(-nn) {
                return Err(v.err("p", "need p > q^-N"));
            }
            let qn1 = q.powi(nn + 1);
            (
                zeta_minus(one.clone()).mul(&Poly::linear(-one.clone(), p * qn1.clone())),
                Poly::linear(one, -qn1),
            )
        }
        QKrawtchouk => {
            let q = q.clone().unwrap();
            let p = v.get("p")?;
            v.positive("p", &p)?;
            let nn = n.unwrap_or(0) as i32;
            (
                zeta_minus(one).scale(&p),
                Poly::linear(q.powi(-nn), -q),
            )
        }
        AffineQKrawtchouk => {
            let q = q.clone().unwrap();
            let p = v.get("p")?;
            v.open_interval("p", &p, &T::zero(), &(one.clone() / q.clone()))?;
            let qn1 = q.powi(n.unwrap_or(0) as i32 + 1);
            (
                zeta_minus(one.clone()).scale(&p),
                zeta_minus(p).mul(&Poly::linear(-one, qn1)),
            )
        }
        LittleQLaguerre => {
            let q = q.clone().unwrap();
            let a = v.get("a")?;
            v.open_interval("a", &a, &T::zero(), &(one.clone() / q))?;
            (zeta_minus(one), Poly::constant(-a))
        }
        AlternativeQCharlier => {
            let q = q.clone().unwrap();
            let a = v.get("a")?;
            v.positive("a", &a)?;
            (zeta_minus(one), Poly::linear(T::zero(), -a / q))
        }
        QCharlier => {
            let a = v.get("a")?;
            v.positive("a", &a)?;
            (zeta_minus(one), Poly::constant(a))
        }
        AlSalamCarlitzII => {
            let q = q.clone().unwrap();
            let a = v.get("a")?;
            v.positive("a", &a)?;
            if strict && a >= one.clone() / q {
                return Err(v.err("a", "need a < 1/q for a positive weight"));
            }
            (zeta_minus(one).mul(&zeta_minus(a.clone())), Poly::constant(a))
        }
    };
    let lattice = LatticeSpec {
        kind: name.lattice_kind(),
        q,
        n,
    };
    let ordering = if lattice.increasing() {
        GapOrdering::MaxBelow
    } else {
        GapOrdering::MinAbove
    };
    let params = name
        .param_names()
        .iter()
        .map(|k| Ok((k.to_string(), v.get(k)?)))
        .collect::<Result<Vec<_>>>()?;
    let spec = FamilySpec {
        name,
        params,
        lattice,
        d1,
        d2,
        supports_linear_recurrence: name.supports_linear_recurrence(),
        ordering,
        signed_weight: false,
    };
    let signed = opts.allow_signed_weight && spec.weight_changes_sign();
    Ok(FamilySpec {
        signed_weight: signed,
        ..spec
    })
}

struct Validator<'a, T> {
    name: FamilyName,
    params: &'a [(&'a str, T)],
}

impl<T: Real> Validator<'_, T> {
    fn err(&self, key: &str, reason: &str) -> Error {
        Error::InvalidParameter {
            family: self.name.key().to_string(),
            name: key.to_string(),
            reason: reason.to_string(),
        }
    }

    fn get(&self, key: &str) -> Result<T> {
        let v = self
            .params
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| v.clone())
            .ok_or_else(|| self.err(key, "missing"))?;
        if !v.is_finite() {
            return Err(self.err(key, "not finite"));
        }
        Ok(v)
    }

    fn integer(&self, key: &str) -> Result<usize> {
        let v = self.get(key)?;
        let f = v.to_f64_lossy();
        if f < 0.0 || f.fract() != 0.0 || f > 1.0e6 {
            return Err(self.err(key, "must be a nonnegative integer"));
        }
        Ok(f as usize)
    }

    fn positive(&self, key: &str, v: &T) -> Result<()> {
        if *v > T::zero() {
            Ok(())
        } else {
            Err(self.err(key, "must be positive"))
        }
    }

    fn open_interval(&self, key: &str, v: &T, lo: &T, hi: &T) -> Result<()> {
        if v > lo && v < hi {
            Ok(())
        } else {
            Err(self.err(
                key,
                &format!("must lie in ({}, {})", lo.to_f64_lossy(), hi.to_f64_lossy()),
            ))
        }
    }
}

impl<T: Real> FamilySpec<T> {
    pub fn param(&self, key: &str) -> T {
        self.params
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(|| panic!("{} has no parameter {key}", self.name))
    }

    pub fn q(&self) -> Option<T> {
        self.lattice.q.clone()
    }

    /// Largest lattice index, `None` for infinite lattices.
    pub fn n(&self) -> Option<usize> {
        self.lattice.n
    }

    pub fn pi(&self, x: usize) -> T {
        self.lattice.pi(x)
    }

    pub fn eta(&self) -> T {
        self.lattice.eta()
    }

    pub fn d1(&self, z: &T) -> T {
        self.d1.eval(z)
    }

    pub fn d2(&self, z: &T) -> T {
        self.d2.eval(z)
    }

    pub fn linear_data(&self) -> Result<LinearData<T>> {
        if !self.supports_linear_recurrence {
            return Err(Error::UnsupportedFamily {
                family: self.name.key().to_string(),
                what: "the linear recurrence".to_string(),
            });
        }
        Ok(LinearData {
            lambda1: self.d1.coeff(1),
            mu1: self.d1.coeff(0),
            lambda2: self.d2.coeff(1),
            mu2: self.d2.coeff(0),
        })
    }

    /// Weight `ω(x)` from its closed form.
    pub fn weight(&self, x: usize) -> Result<T> {
        if let Some(n) = self.n() {
            if x > n {
                return Err(Error::IndexOutOfRange { x, n });
            }
        }
        Ok(self.weight_unchecked(x))
    }

    fn weight_unchecked(&self, x: usize) -> T {
        use FamilyName::*;
        let p = |k: &str| self.param(k);
        let one = T::one();
        let xi = x as i32;
        let n = self.n().unwrap_or(0);
        let q = || self.q().expect("q-family");
        let qp = |a: T, m: usize| q_pochhammer(&a, &q(), m);
        let qbin2 = |m: i64| q().powi((m * (m - 1) / 2) as i32);
        match self.name {
            Hahn => {
                pochhammer(&(p("alpha") + one.clone()), x) / factorial::<T>(x)
                    * pochhammer(&(p("beta") + one), n - x)
                    / factorial::<T>(n - x)
            }
            Meixner => pochhammer(&p("beta"), x) * p("c").powi(xi) / factorial::<T>(x),
            Krawtchouk => {
                let pp = p("p");
                binomial::<T>(n, x) * pp.powi(xi) * (one - pp).powi((n - x) as i32)
            }
            Charlier => p("a").powi(xi) / factorial::<T>(x),
            QHahn => {
                let (al, be, q) = (p("alpha"), p("beta"), q());
                let qn = q.powi(-(n as i32));
                qp(al.clone() * q.clone(), x) * qp(qn.clone(), x)
                    / (qp(q.clone(), x) * qp(qn / be.clone(), x))
                    * (al * be * q).powi(-xi)
            }
            LittleQJacobi => {
                let q = q();
                qp(p("b") * q.clone(), x) / qp(q.clone(), x) * (p("a") * q).powi(xi)
            }
            QMeixner => {
                let (b, c, q) = (p("b"), p("c"), q());
                qp(b.clone() * q.clone(), x) / (qp(q.clone(), x) * qp(-(b * c.clone() * q), x))
                    * c.powi(xi)
                    * qbin2(x as i64)
            }
            QuantumQKrawtchouk => {
                let q = q();
                let sign = if (n - x).is_multiple_of(2) { one } else { -one };
                qp(p("p") * q.clone(), n - x) / (qp(q.clone(), x) * qp(q, n - x))
                    * sign
                    * qbin2(x as i64)
            }
            QKrawtchouk => {
                let q = q();
                qp(q.powi(-(n as i32)), x) / qp(q, x) * (-p("p")).powi(-xi)
            }
            AffineQKrawtchouk => {
                let (pp, q) = (p("p"), q());
                qp(pp.clone() * q.clone(), x) * qp(q.clone(), n)
                    / (qp(q.clone(), x) * qp(q.clone(), n - x))
                    * (pp * q).powi(-xi)
            }
            LittleQLaguerre => {
                let q = q();
                (p("a") * q.clone()).powi(xi) / qp(q, x)
            }
            AlternativeQCharlier => p("a").powi(xi) * qbin2(x as i64 + 1) / qp(q(), x),
            QCharlier => p("a").powi(xi) * qbin2(x as i64) / qp(q(), x),
            AlSalamCarlitzII => {
                let (a, q) = (p("a"), q());
                q.powi(xi * xi) * a.powi(xi) / (qp(q.clone(), x) * qp(a * q, x))
            }
        }
    }

    /// Weights `ω(0..len)`.
    pub fn weights(&self, len: usize) -> Vec<T> {
        self.weight_iter().take(len).collect()
    }

    /// `ω(0), ω(1), ..` through `ω(x) = ω(x-1) d2(π_x) / (η d1(π_x))`, re-anchored on the
    /// closed form every 128 points. Linear cost, where the closed forms are quadratic overall.
    pub fn weight_iter(&self) -> impl Iterator<Item = T> + '_ {
        let eta = self.eta();
        let mut prev: Option<T> = None;
        (0..).map(move |x: usize| {
            let w = match prev.take() {
                Some(w) if !x.is_multiple_of(128) && !w.is_zero() => {
                    let p = self.pi(x);
                    let den = eta.clone() * self.d1(&p);
                    if den.is_zero() {
                        self.weight_unchecked(x)
                    } else {
                        w * self.d2(&p) / den
                    }
                }
                _ => self.weight_unchecked(x),
            };
            prev = Some(w.clone());
            w
        })
    }

    /// True if some weight among the first 200 lattice points is nonpositive.
    pub fn weight_changes_sign(&self) -> bool {
        let len = self.n().map_or(200, |n| n + 1).min(200);
        (0..len).any(|x| self.weight_unchecked(x) <= T::zero())
    }

    /// `D_s` event orientation.
    pub fn ordering(&self) -> GapOrdering {
        self.ordering
    }
}

/// Checks `ω(x-1)/ω(x) = η d1(π_x)/d2(π_x)` to relative `tol` for `1 <= x <= x_max`.
pub fn check_ratio_identity<T: Real>(f: &FamilySpec<T>, x_max: usize, tol: &T) -> bool {
    let x_max = f.n().map_or(x_max, |n| x_max.min(n));
    let eta = f.eta();
    (1..=x_max).all(|x| {
        let lhs = f.weight_unchecked(x - 1) / f.weight_unchecked(x);
        let px = f.pi(x);
        let rhs = eta.clone() * f.d1(&px) / f.d2(&px);
        T::rel_diff(&lhs, &rhs) <= *tol
    })
}

/// `|d1(π_0)|`, which must vanish.
pub fn d1_at_origin<T: Real>(f: &FamilySpec<T>) -> T {
    f.d1(&f.pi(0)).abs()
}

/// `|d2(σ^{-1} π_N)|` for finite lattices.
pub fn d2_past_end<T: Real>(f: &FamilySpec<T>) -> Option<T> {
    f.n().map(|n| f.d2(&f.lattice.sigma_inv(&f.pi(n))).abs())
}
