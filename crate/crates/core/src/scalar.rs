//! Arithmetic abstraction shared by the matrix-game solver and the DP engine.
//!
//! Everything numeric in this crate is generic over [`Scalar`], which is
//! implemented for `f64` (fast, tolerance-based comparisons) and for
//! [`BigRational`] (exact, zero tolerance).

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive};

/// Comparison slack used by the float instantiation.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

pub trait Scalar:
    Num + Signed + Clone + PartialOrd + Debug + Display + Send + Sync + 'static
{
    /// True when arithmetic is exact and comparisons use zero slack.
    const EXACT: bool;
    const NAME: &'static str;

    /// Slack for pivoting, saddle detection and feasibility.
    fn tolerance() -> Self;

    fn from_int(v: i64) -> Self;

    /// A float tolerance in this arithmetic: itself for floats, zero when exact.
    fn slack(tol: f64) -> Self;

    fn to_f64(&self) -> f64;

    /// `self > other` beyond the tolerance.
    fn definitely_gt(&self, other: &Self) -> bool {
        self.clone() - other.clone() > Self::tolerance()
    }

    /// `self < other` beyond the tolerance.
    fn definitely_lt(&self, other: &Self) -> bool {
        other.definitely_gt(self)
    }

    fn approx_eq(&self, other: &Self) -> bool {
        !self.definitely_gt(other) && !self.definitely_lt(other)
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    const NAME: &'static str = "float64";

    #[inline]
    fn tolerance() -> Self {
        FLOAT_TOLERANCE
    }

    #[inline]
    fn from_int(v: i64) -> Self {
        v as f64
    }

    #[inline]
    fn slack(tol: f64) -> Self {
        tol
    }

    #[inline]
    fn to_f64(&self) -> f64 {
        *self
    }

    #[inline]
    fn definitely_gt(&self, other: &Self) -> bool {
        *self - *other > FLOAT_TOLERANCE
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;
    const NAME: &'static str = "rational";

    fn tolerance() -> Self {
        BigRational::from_integer(BigInt::from(0))
    }

    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn slack(_tol: f64) -> Self {
        Self::tolerance()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            // Huge numerator/denominator pairs can overflow the direct
            // conversion; scale both down first.
            let n = self.numer().bits() as i64;
            let d = self.denom().bits() as i64;
            let shift = (n.max(d) - 1000).max(0) as usize;
            let num = (self.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let den = (self.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            num / den
        })
    }

    fn definitely_gt(&self, other: &Self) -> bool {
        self > other
    }
}

/// Exact rational from a decimal-free ratio, mostly for tests and literals.
pub fn ratio(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Lossy conversion used when projecting exact results onto floats.
pub fn to_f64_vec<S: Scalar>(values: &[S]) -> Vec<f64> {
    values.iter().map(Scalar::to_f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_comparisons_use_slack() {
        assert!(!1.0f64.definitely_gt(&(1.0 - 1e-12)));
        assert!(1.0f64.definitely_gt(&(1.0 - 1e-6)));
        assert!(1.0f64.approx_eq(&(1.0 + 5e-10)));
    }

    #[test]
    fn rational_comparisons_are_exact() {
        let a = ratio(1, 3);
        let b = ratio(333_333_333_333, 1_000_000_000_000);
        assert!(a.definitely_gt(&b));
        assert!(!a.approx_eq(&b));
        assert_eq!(ratio(626, 50), ratio(313, 25));
    }

    #[test]
    fn huge_rational_to_f64() {
        let big = BigInt::from(10).pow(400);
        let r = BigRational::new(big.clone() * 3, big);
        assert!((Scalar::to_f64(&r) - 3.0).abs() < 1e-12);
    }
}
