//! Exact arithmetic over `Q(√2)` and its complex extension `Q(√2)[j]`.
//!
//! Every design coefficient lives here, so Gram identities are checked as
//! decidable equalities. The rational components are generic over the
//! underlying integer type; the crate root fixes `BigInt` for the default
//! aliases, while `i64` is available for quick experiments.

mod complex;
mod real;

pub use complex::ComplexSqrt2;
pub use real::RealSqrt2;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};
use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

/// Integer types usable as the numerator/denominator of the exact scalars.
pub trait ExactInt:
    Integer
    + Signed
    + Clone
    + Hash
    + Debug
    + Display
    + FromStr
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
}

impl<T> ExactInt for T where
    T: Integer
        + Signed
        + Clone
        + Hash
        + Debug
        + Display
        + FromStr
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

/// Rational number over an [`ExactInt`].
pub type Rational<I> = num_rational::Ratio<I>;

pub(crate) fn ratio_to_f64<I: ExactInt>(r: &Rational<I>) -> f64 {
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Lowest terms with a positive denominator.
#[cfg(test)]
pub(crate) fn is_canonical<I: ExactInt>(r: &Rational<I>) -> bool {
    r.denom().is_positive() && r.numer().gcd(r.denom()).is_one()
}
