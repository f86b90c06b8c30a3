use super::real::{forward_owned, RealSqrt2};
use super::ExactInt;
use num_complex::Complex;
use num_traits::{Float, FromPrimitive, One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// `re + j·im` with both parts in `Q(√2)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ComplexSqrt2<I: ExactInt> {
    pub re: RealSqrt2<I>,
    pub im: RealSqrt2<I>,
}

impl<I: ExactInt> ComplexSqrt2<I> {
    pub fn new(re: RealSqrt2<I>, im: RealSqrt2<I>) -> Self {
        Self { re, im }
    }

    pub fn real(re: RealSqrt2<I>) -> Self {
        Self::new(re, RealSqrt2::zero())
    }

    pub fn imag(im: RealSqrt2<I>) -> Self {
        Self::new(RealSqrt2::zero(), im)
    }

    /// The imaginary unit `j`.
    pub fn j() -> Self {
        Self::imag(RealSqrt2::one())
    }

    pub fn from_integer(v: i64) -> Self {
        Self::real(RealSqrt2::from_integer(v))
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    /// Multiplication by `j`.
    pub fn mul_j(&self) -> Self {
        Self::new(-&self.im, self.re.clone())
    }

    pub fn scale(&self, s: &RealSqrt2<I>) -> Self {
        Self::new(&self.re * s, &self.im * s)
    }

    /// `|z|² = z·conj(z)`, always real.
    pub fn norm_sqr(&self) -> RealSqrt2<I> {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_imaginary(&self) -> bool {
        self.re.is_zero()
    }

    pub fn to_complex<F: Float + FromPrimitive>(&self) -> Complex<F> {
        let cast = |x: f64| F::from_f64(x).unwrap_or_else(F::nan);
        Complex::new(cast(self.re.to_f64()), cast(self.im.to_f64()))
    }

    #[cfg(test)]
    pub(crate) fn is_canonical(&self) -> bool {
        self.re.is_canonical() && self.im.is_canonical()
    }
}

impl<I: ExactInt> Zero for ComplexSqrt2<I> {
    fn zero() -> Self {
        Self::new(RealSqrt2::zero(), RealSqrt2::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl<I: ExactInt> One for ComplexSqrt2<I> {
    fn one() -> Self {
        Self::real(RealSqrt2::one())
    }
}

impl<'a, I: ExactInt> Add<&'a ComplexSqrt2<I>> for &'a ComplexSqrt2<I> {
    type Output = ComplexSqrt2<I>;
    fn add(self, rhs: &'a ComplexSqrt2<I>) -> ComplexSqrt2<I> {
        ComplexSqrt2::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a, I: ExactInt> Sub<&'a ComplexSqrt2<I>> for &'a ComplexSqrt2<I> {
    type Output = ComplexSqrt2<I>;
    fn sub(self, rhs: &'a ComplexSqrt2<I>) -> ComplexSqrt2<I> {
        ComplexSqrt2::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a, I: ExactInt> Mul<&'a ComplexSqrt2<I>> for &'a ComplexSqrt2<I> {
    type Output = ComplexSqrt2<I>;
    fn mul(self, rhs: &'a ComplexSqrt2<I>) -> ComplexSqrt2<I> {
        // design coefficients are almost always purely real or purely imaginary
        match (
            self.is_real(),
            rhs.is_real(),
            self.is_imaginary(),
            rhs.is_imaginary(),
        ) {
            (true, true, _, _) => ComplexSqrt2::real(&self.re * &rhs.re),
            (_, _, true, true) => ComplexSqrt2::real(-(&self.im * &rhs.im)),
            (true, _, _, true) => ComplexSqrt2::imag(&self.re * &rhs.im),
            (_, true, true, _) => ComplexSqrt2::imag(&self.im * &rhs.re),
            _ => ComplexSqrt2::new(
                &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
                &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
            ),
        }
    }
}

impl<I: ExactInt> Neg for &ComplexSqrt2<I> {
    type Output = ComplexSqrt2<I>;
    fn neg(self) -> ComplexSqrt2<I> {
        ComplexSqrt2::new(-&self.re, -&self.im)
    }
}

impl<I: ExactInt> Neg for ComplexSqrt2<I> {
    type Output = ComplexSqrt2<I>;
    fn neg(self) -> ComplexSqrt2<I> {
        ComplexSqrt2::new(-self.re, -self.im)
    }
}

forward_owned!(ComplexSqrt2, Add::add, Sub::sub, Mul::mul);

impl<I: ExactInt> AddAssign<&ComplexSqrt2<I>> for ComplexSqrt2<I> {
    fn add_assign(&mut self, rhs: &ComplexSqrt2<I>) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl<I: ExactInt> fmt::Display for ComplexSqrt2<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "j({})", self.im),
            (false, false) => write!(f, "({})+j({})", self.re, self.im),
        }
    }
}
