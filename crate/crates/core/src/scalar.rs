//! Scalar abstraction and the concrete exact rational scalar.

use num_traits::{Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision integer.
pub type Int = num_bigint::BigInt;

/// Arbitrary-precision rational in canonical form (reduced, positive
/// denominator).  `num_rational` maintains the canonical form after every
/// operation, so value equality is structural equality.
pub type Rat = num_rational::BigRational;

/// Coefficient scalar for the generic algebra layer.
///
/// Any signed field-like type works; the crate instantiates it with [`Rat`],
/// for which all operations are exact.  Approximate scalars satisfy the
/// bounds but void the exact-equality contracts of the canonical forms.
pub trait Scalar: Clone + Signed + PartialOrd {}

impl<T> Scalar for T where T: Clone + Signed + PartialOrd {}

/// Division by zero, reported as a value instead of a panic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("division by zero")]
pub struct DivisionByZero;

/// Exact rational with small integer parts. Panics if `den` is zero.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}

/// Exact rational from an integer.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// Exact division with an explicit error on a zero divisor.
pub fn checked_div(a: &Rat, b: &Rat) -> Result<Rat, DivisionByZero> {
    if b.is_zero() {
        return Err(DivisionByZero);
    }
    Ok(a / b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn addition_is_exact() {
        assert_eq!(rat(1, 6) + rat(1, 3), rat(1, 2));
    }

    #[test]
    fn construction_canonicalizes() {
        assert_eq!(rat(2, 4), rat(1, 2));
        assert_eq!(rat(3, -6), rat(-1, 2));
        assert_eq!(rat(-1, 2).to_string(), "-1/2");
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(checked_div(&rat(1, 3), &rat_int(0)), Err(DivisionByZero));
        assert_eq!(checked_div(&rat(1, 3), &rat(1, 2)), Ok(rat(2, 3)));
    }
}
