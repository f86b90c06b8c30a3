pub mod construct;
pub mod design;
pub mod exact;
pub mod index;
pub mod io;
pub mod metrics;
pub mod sim;

use num_bigint::BigInt;

/// `a + b√2` over arbitrary-precision rationals.
pub type Sqrt2Rational = exact::RealSqrt2<BigInt>;
/// Complex extension of [`Sqrt2Rational`].
pub type Sqrt2Complex = exact::ComplexSqrt2<BigInt>;
pub type Entry = design::LinearEntry<BigInt>;
pub type Design = design::DesignMatrix<BigInt>;
pub type Form = design::QuadraticForm<BigInt>;
