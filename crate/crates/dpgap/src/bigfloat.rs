//! MPFR-backed arbitrary precision real.

use crate::scalar::Real;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};
use rug::ops::Pow;
use rug::Float;
use std::cell::Cell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 256;

thread_local! {
    static PRECISION: Cell<u32> = const { Cell::new(DEFAULT_PRECISION) };
}

/// Arbitrary precision real. Binary operations round to the larger operand precision.
#[derive(Clone)]
pub struct BigFloat(Float);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse `{0}` as a real number")]
pub struct ParseBigFloatError(pub String);

/// Sets the working precision of the current thread and returns the previous value.
pub fn set_working_precision(bits: u32) -> u32 {
    PRECISION.with(|p| p.replace(bits.max(2)))
}

fn current() -> u32 {
    PRECISION.with(|p| p.get())
}

struct Restore(u32);

impl Drop for Restore {
    fn drop(&mut self) {
        set_working_precision(self.0);
    }
}

/// Version string of the linked MPFR library.
pub fn mpfr_version() -> String {
    // SAFETY: mpfr_get_version returns a pointer to a static NUL-terminated string.
    let ptr = unsafe { gmp_mpfr_sys::mpfr::get_version() };
    unsafe { std::ffi::CStr::from_ptr(ptr) }.to_string_lossy().into_owned()
}

impl BigFloat {
    pub fn from_float(f: Float) -> Self {
        BigFloat(f)
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn prec(&self) -> u32 {
        self.0.prec()
    }

    /// Copy of `self` rounded or extended to `bits`.
    pub fn with_prec(&self, bits: u32) -> Self {
        BigFloat(Float::with_val(bits, &self.0))
    }

    fn wrap<T>(prec: u32, v: T) -> Self
    where
        Float: rug::Assign<T>,
    {
        BigFloat(Float::with_val(prec, v))
    }
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigFloat({})", self.to_sci(12))
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = (self.prec() as f64 / std::f64::consts::LOG2_10).ceil() as usize + 1;
        f.write_str(&self.to_sci(f.precision().unwrap_or(digits)))
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: BigFloat) -> BigFloat {
                let p = self.0.prec().max(rhs.0.prec());
                BigFloat::wrap(p, $tr::$m(&self.0, &rhs.0))
            }
        }
        impl<'a> $tr<&'a BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: &'a BigFloat) -> BigFloat {
                let p = self.0.prec().max(rhs.0.prec());
                BigFloat::wrap(p, $tr::$m(&self.0, &rhs.0))
            }
        }
        impl<'a> $tr<&'a BigFloat> for &'a BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: &'a BigFloat) -> BigFloat {
                let p = self.0.prec().max(rhs.0.prec());
                BigFloat::wrap(p, $tr::$m(&self.0, &rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);
binop!(Rem, rem);

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat(-self.0)
    }
}

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat(-self.0.clone())
    }
}

impl Zero for BigFloat {
    fn zero() -> Self {
        BigFloat::wrap(current(), 0)
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for BigFloat {
    fn one() -> Self {
        BigFloat::wrap(current(), 1)
    }
}

impl Num for BigFloat {
    type FromStrRadixErr = ParseBigFloatError;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        Float::parse_radix(s.trim(), radix as i32)
            .map(|v| BigFloat::wrap(current(), v))
            .map_err(|_| ParseBigFloatError(s.to_string()))
    }
}

impl Signed for BigFloat {
    fn abs(&self) -> Self {
        BigFloat(self.0.clone().abs())
    }
    fn abs_sub(&self, other: &Self) -> Self {
        let d = self - other;
        if d.0.is_sign_positive() {
            d
        } else {
            BigFloat::wrap(d.prec(), 0)
        }
    }
    fn signum(&self) -> Self {
        BigFloat(self.0.clone().signum())
    }
    fn is_positive(&self) -> bool {
        !self.0.is_zero() && self.0.is_sign_positive()
    }
    fn is_negative(&self) -> bool {
        !self.0.is_zero() && self.0.is_sign_negative()
    }
}

impl FromPrimitive for BigFloat {
    fn from_i64(n: i64) -> Option<Self> {
        Some(BigFloat::wrap(current(), n))
    }
    fn from_u64(n: u64) -> Option<Self> {
        Some(BigFloat::wrap(current(), n))
    }
    fn from_f64(x: f64) -> Option<Self> {
        x.is_finite().then(|| BigFloat::wrap(current(), x))
    }
}

impl ToPrimitive for BigFloat {
    fn to_i64(&self) -> Option<i64> {
        self.0.to_i32_saturating().map(i64::from)
    }
    fn to_u64(&self) -> Option<u64> {
        self.0.to_u32_saturating().map(u64::from)
    }
    fn to_f64(&self) -> Option<f64> {
        Some(self.0.to_f64())
    }
}

impl Real for BigFloat {
    fn working_precision() -> u32 {
        current()
    }

    fn with_precision<R>(bits: u32, f: impl FnOnce() -> R) -> R {
        let _restore = Restore(set_working_precision(bits));
        f()
    }

    fn parse(s: &str) -> Option<Self> {
        <Self as Num>::from_str_radix(s, 10).ok()
    }

    fn sqrt(&self) -> Self {
        BigFloat::wrap(self.prec(), self.0.sqrt_ref())
    }

    fn exp(&self) -> Self {
        BigFloat::wrap(self.prec(), self.0.exp_ref())
    }

    fn ln(&self) -> Self {
        BigFloat::wrap(self.prec(), self.0.ln_ref())
    }

    fn powi(&self, n: i32) -> Self {
        BigFloat::wrap(self.prec(), (&self.0).pow(n))
    }

    fn powf(&self, e: &Self) -> Self {
        BigFloat::wrap(self.prec().max(e.prec()), (&self.0).pow(&e.0))
    }

    fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    fn to_sci(&self, digits: usize) -> String {
        if self.0.is_zero() {
            return "0".to_string();
        }
        self.0.to_string_radix(10, Some(digits.max(1)))
    }
}
