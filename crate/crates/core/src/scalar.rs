//! Numeric back ends shared by the exact and floating-point code paths.

use core::fmt::{Debug, Display};
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

/// Exact rational number used for payoffs and rational strategy profiles.
pub type Q = Ratio<i128>;

/// Floating-point probabilities at or below this value are treated as outside
/// the support of a distribution.
pub const SUPPORT_THRESHOLD: f64 = 1e-9;

/// Tolerance on the total mass of a floating-point distribution.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// Shorthand for an exact rational `numer / denom`.
pub fn q(numer: i128, denom: i128) -> Q {
    Q::new(numer, denom)
}

/// Scalar field the game computations are generic over: `f64` for the
/// quantal-response paths, [`Q`] for exact Nash verification.
pub trait Scalar:
    Copy
    + PartialOrd
    + Debug
    + Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_q(value: Q) -> Self;
    fn to_f64(self) -> f64;
    fn abs(self) -> Self;

    /// Whether a probability of this size counts as being in the support.
    fn in_support(self) -> bool;

    /// Whether a probability of this size counts as zero when testing
    /// events such as "the low agent receives the object".
    fn negligible(self) -> bool;

    fn is_finite(self) -> bool;

    /// Selects the representation matching `Self` from a pair of
    /// precomputed exact and floating-point values.
    fn pick(exact: Q, float: f64) -> Self;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_q(value: Q) -> Self {
        *value.numer() as f64 / *value.denom() as f64
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn abs(self) -> Self {
        libm::fabs(self)
    }
    fn in_support(self) -> bool {
        self > SUPPORT_THRESHOLD
    }
    fn negligible(self) -> bool {
        self < SUPPORT_THRESHOLD
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn pick(_exact: Q, float: f64) -> Self {
        float
    }
}

impl Scalar for Q {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_q(value: Q) -> Self {
        value
    }
    fn to_f64(self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
    fn abs(self) -> Self {
        Signed::abs(&self)
    }
    fn in_support(self) -> bool {
        self > Zero::zero()
    }
    fn negligible(self) -> bool {
        self.is_zero()
    }
    fn is_finite(self) -> bool {
        true
    }
    fn pick(exact: Q, _float: f64) -> Self {
        exact
    }
}

/// Largest element of a non-empty slice under `PartialOrd`.
pub(crate) fn max_of<T: Scalar>(values: &[T]) -> T {
    let mut best = values[0];
    for &v in &values[1..] {
        if v > best {
            best = v;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_to_float() {
        assert_eq!(q(3, 4).to_f64(), 0.75);
        assert_eq!(<f64 as Scalar>::from_q(q(-1, 2)), -0.5);
    }

    #[test]
    fn support_rules() {
        assert!(!1e-10_f64.in_support());
        assert!(2e-9_f64.in_support());
        assert!(q(1, 1_000_000_000_000).in_support());
        assert!(!<Q as Scalar>::zero().in_support());
    }
}
