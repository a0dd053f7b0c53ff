//! The scalar contract every numerical routine is generic over.

use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};
use std::fmt::{Debug, Display};

/// A real number type with a configurable working precision.
///
/// Values created through [`Real::lit`], [`Real::int`] or [`Real::parse`] carry the
/// precision active in the current scope. For the machine types the precision is fixed.
pub trait Real:
    Num
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Clone
    + PartialOrd
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Mantissa bits of newly created values.
    fn working_precision() -> u32;

    /// Runs `f` with newly created values carrying `bits` mantissa bits.
    fn with_precision<R>(bits: u32, f: impl FnOnce() -> R) -> R;

    /// Parses a decimal literal at the working precision.
    fn parse(s: &str) -> Option<Self>;

    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn powi(&self, n: i32) -> Self;
    fn powf(&self, e: &Self) -> Self;
    fn is_finite(&self) -> bool;

    /// Scientific notation with `digits` significant digits.
    fn to_sci(&self, digits: usize) -> String;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    fn int(n: i64) -> Self {
        Self::from_i64(n).expect("integer literal")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// The default tolerance `2^(-p/2)` for working precision `p`.
    fn tolerance() -> Self {
        Self::int(2).powi(-(Self::working_precision() as i32 / 2))
    }

    /// Decimal digits that round-trip the working precision.
    fn decimal_digits() -> usize {
        (Self::working_precision() as f64 / std::f64::consts::LOG2_10).ceil() as usize + 1
    }

    fn max_of(a: Self, b: Self) -> Self {
        if a >= b {
            a
        } else {
            b
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if a <= b {
            a
        } else {
            b
        }
    }

    /// `|a - b| / max(|a|, |b|)`, zero when both vanish.
    fn rel_diff(a: &Self, b: &Self) -> Self {
        let scale = Self::max_of(a.abs(), b.abs());
        if scale.is_zero() {
            Self::zero()
        } else {
            (a.clone() - b.clone()).abs() / scale
        }
    }
}

macro_rules! machine_real {
    ($t:ty, $bits:expr) => {
        impl Real for $t {
            fn working_precision() -> u32 {
                $bits
            }

            fn with_precision<R>(_bits: u32, f: impl FnOnce() -> R) -> R {
                f()
            }

            fn parse(s: &str) -> Option<Self> {
                s.trim().parse().ok()
            }

            fn sqrt(&self) -> Self {
                <$t>::sqrt(*self)
            }

            fn exp(&self) -> Self {
                <$t>::exp(*self)
            }

            fn ln(&self) -> Self {
                <$t>::ln(*self)
            }

            fn powi(&self, n: i32) -> Self {
                <$t>::powi(*self, n)
            }

            fn powf(&self, e: &Self) -> Self {
                <$t>::powf(*self, *e)
            }

            fn is_finite(&self) -> bool {
                <$t>::is_finite(*self)
            }

            fn to_sci(&self, digits: usize) -> String {
                format!("{:.*e}", digits.saturating_sub(1), self)
            }
        }
    };
}

machine_real!(f32, 24);
machine_real!(f64, 53);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn machine_tolerance() {
        assert_eq!(f64::tolerance(), 2f64.powi(-26));
        assert_eq!(f32::working_precision(), 24);
    }

    #[test]
    fn rel_diff_handles_zero() {
        assert_eq!(f64::rel_diff(&0.0, &0.0), 0.0);
        assert!((f64::rel_diff(&1.0, &1.5) - 1.0 / 3.0).abs() < 1e-15);
    }
}
