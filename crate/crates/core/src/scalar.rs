//! Scalar abstraction shared by the exact enumeration and the greedy
//! fractional colouring.
//!
//! Everything that only needs field operations and an ordering is written
//! against [`Scalar`], so the same code runs on `f64` (the default), `f32`,
//! and exact rationals. Transcendental code (Lambert W, the occupancy lower
//! bound, weight selection) is written against [`num_traits::Float`] instead.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational scalar.
pub type Rational = BigRational;

/// Ordered field element usable by the enumeration and colouring code.
pub trait Scalar: Clone + Debug + PartialOrd + Num + FromPrimitive + Send + Sync + 'static {
    /// `eps` for floating-point types, zero for exact types.
    ///
    /// Used wherever an exact equality from the analysis becomes a
    /// toleranced comparison.
    fn tolerance(eps: f64) -> Self;

    /// Lossy conversion, used for reports and logarithms.
    fn to_f64(&self) -> f64;

    /// `true` when arithmetic is exact.
    fn is_exact() -> bool;

    fn from_count(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("usize fits every scalar")
    }

    fn abs_diff(&self, other: &Self) -> Self {
        if self >= other {
            self.clone() - other.clone()
        } else {
            other.clone() - self.clone()
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// `self^exp` by repeated squaring.
    fn powu(&self, exp: usize) -> Self {
        num_traits::pow::pow(self.clone(), exp)
    }
}

macro_rules! float_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            fn tolerance(eps: f64) -> Self {
                eps as $t
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn is_exact() -> bool {
                false
            }
        }
    )*};
}

float_scalar!(f32, f64);

impl Scalar for Rational {
    fn tolerance(_eps: f64) -> Self {
        Self::zero()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            // numerator or denominator beyond f64 range
            let sign = if self.is_negative() { -1.0 } else { 1.0 };
            let bits = self.numer().bits() as i64 - self.denom().bits() as i64;
            sign * 2f64.powi(bits.clamp(-1100, 1100) as i32)
        })
    }

    fn is_exact() -> bool {
        true
    }
}

/// Builds a rational `num / den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Kahan-compensated running sum.
#[derive(Clone, Debug)]
pub struct CompensatedSum<S> {
    sum: S,
    carry: S,
}

impl<S: Scalar> Default for CompensatedSum<S> {
    fn default() -> Self {
        Self {
            sum: S::zero(),
            carry: S::zero(),
        }
    }
}

impl<S: Scalar> CompensatedSum<S> {
    pub fn add(&mut self, x: S) {
        if S::is_exact() {
            self.sum = self.sum.clone() + x;
            return;
        }
        let y = x - self.carry.clone();
        let t = self.sum.clone() + y.clone();
        self.carry = (t.clone() - self.sum.clone()) - y;
        self.sum = t;
    }

    pub fn value(&self) -> S {
        self.sum.clone()
    }
}

impl<S: Scalar> FromIterator<S> for CompensatedSum<S> {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        let mut acc = Self::default();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Sum of an iterator with compensation.
pub fn sum<S: Scalar>(iter: impl IntoIterator<Item = S>) -> S {
    iter.into_iter().collect::<CompensatedSum<S>>().value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_beats_naive() {
        let xs = std::iter::once(1.0f64).chain(std::iter::repeat_n(1e-16, 10_000));
        let s = sum(xs);
        assert!((s - (1.0 + 1e-12)).abs() < 1e-15);
    }

    #[test]
    fn rational_tolerance_is_zero() {
        assert!(Rational::tolerance(1e-9).is_zero());
        assert_eq!(f64::tolerance(1e-9), 1e-9);
    }

    #[test]
    fn rational_to_f64() {
        assert_eq!(Scalar::to_f64(&ratio(3, 11)), 3.0 / 11.0);
        assert_eq!(ratio(2, 3).powu(3), ratio(8, 27));
    }

    #[test]
    fn min_max_helpers() {
        assert_eq!(2.0f64.min_of(1.0), 1.0);
        assert_eq!(ratio(1, 2).max_of(ratio(2, 3)), ratio(2, 3));
        assert_eq!(ratio(1, 2).abs_diff(&ratio(2, 3)), ratio(1, 6));
    }
}
