use super::{ratio_to_f64, ExactInt, Rational};
use num_traits::{One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// `a + b·√2` with rational `a`, `b`.
///
/// `1/√2` is `(0, 1/2)`. Components are always in lowest terms because
/// [`Rational`] reduces on every operation, so equality is componentwise.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RealSqrt2<I: ExactInt> {
    a: Rational<I>,
    b: Rational<I>,
}

impl<I: ExactInt> RealSqrt2<I> {
    pub fn new(a: Rational<I>, b: Rational<I>) -> Self {
        Self { a, b }
    }

    pub fn from_integer(a: i64) -> Self {
        Self::new(int::<I>(a).into(), Rational::zero())
    }

    pub fn from_rational(a: Rational<I>) -> Self {
        Self::new(a, Rational::zero())
    }

    pub fn sqrt2() -> Self {
        Self::new(Rational::zero(), Rational::one())
    }

    /// `1/√2 = √2/2`.
    pub fn frac_1_sqrt2() -> Self {
        Self::new(Rational::zero(), Rational::new(I::one(), int(2)))
    }

    /// Rational part.
    pub fn a(&self) -> &Rational<I> {
        &self.a
    }

    /// Coefficient of `√2`.
    pub fn b(&self) -> &Rational<I> {
        &self.b
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Sign of `a + b√2`, decided exactly.
    pub fn signum(&self) -> Ordering {
        let sa = sign(&self.a);
        let sb = sign(&self.b);
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            _ => {
                // opposite signs: compare a² with 2b²
                let a2 = &self.a * &self.a;
                let b2 = &self.b * &self.b * Rational::from_integer(int(2));
                match a2.cmp(&b2) {
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        // (a + b√2)^{-1} = (a - b√2) / (a² - 2b²); the norm vanishes only at 0
        let norm = &self.a * &self.a - &self.b * &self.b * Rational::from_integer(int(2));
        if norm.is_zero() {
            return None;
        }
        Some(Self::new(&self.a / &norm, -(&self.b / &norm)))
    }

    /// Galois conjugate `a - b√2`.
    pub fn galois(&self) -> Self {
        Self::new(self.a.clone(), -self.b.clone())
    }

    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.a) + ratio_to_f64(&self.b) * std::f64::consts::SQRT_2
    }

    #[cfg(test)]
    pub(crate) fn is_canonical(&self) -> bool {
        super::is_canonical(&self.a) && super::is_canonical(&self.b)
    }
}

pub(crate) fn int<I: ExactInt>(v: i64) -> I {
    I::from_i64(v).expect("small integer fits every ExactInt")
}

fn sign<I: ExactInt>(r: &Rational<I>) -> Ordering {
    if r.is_zero() {
        Ordering::Equal
    } else if r.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

impl<I: ExactInt> Zero for RealSqrt2<I> {
    fn zero() -> Self {
        Self::new(Rational::zero(), Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl<I: ExactInt> One for RealSqrt2<I> {
    fn one() -> Self {
        Self::new(Rational::one(), Rational::zero())
    }
}

impl<I: ExactInt> PartialOrd for RealSqrt2<I> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<I: ExactInt> Ord for RealSqrt2<I> {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl<'a, I: ExactInt> Add<&'a RealSqrt2<I>> for &'a RealSqrt2<I> {
    type Output = RealSqrt2<I>;
    fn add(self, rhs: &'a RealSqrt2<I>) -> RealSqrt2<I> {
        RealSqrt2::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl<'a, I: ExactInt> Sub<&'a RealSqrt2<I>> for &'a RealSqrt2<I> {
    type Output = RealSqrt2<I>;
    fn sub(self, rhs: &'a RealSqrt2<I>) -> RealSqrt2<I> {
        RealSqrt2::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl<'a, I: ExactInt> Mul<&'a RealSqrt2<I>> for &'a RealSqrt2<I> {
    type Output = RealSqrt2<I>;
    fn mul(self, rhs: &'a RealSqrt2<I>) -> RealSqrt2<I> {
        // most coefficients are purely rational or purely irrational
        match (self.b.is_zero(), rhs.b.is_zero()) {
            (true, true) => RealSqrt2::new(&self.a * &rhs.a, Rational::zero()),
            (true, false) => RealSqrt2::new(&self.a * &rhs.a, &self.a * &rhs.b),
            (false, true) => RealSqrt2::new(&self.a * &rhs.a, &self.b * &rhs.a),
            (false, false) => {
                let two = Rational::from_integer(int::<I>(2));
                RealSqrt2::new(
                    &self.a * &rhs.a + &self.b * &rhs.b * two,
                    &self.a * &rhs.b + &rhs.a * &self.b,
                )
            }
        }
    }
}

impl<I: ExactInt> Neg for &RealSqrt2<I> {
    type Output = RealSqrt2<I>;
    fn neg(self) -> RealSqrt2<I> {
        RealSqrt2::new(-self.a.clone(), -self.b.clone())
    }
}

impl<I: ExactInt> Neg for RealSqrt2<I> {
    type Output = RealSqrt2<I>;
    fn neg(self) -> RealSqrt2<I> {
        RealSqrt2::new(-self.a, -self.b)
    }
}

macro_rules! forward_owned {
    ($ty:ident, $($tr:ident :: $m:ident),*) => {$(
        impl<I: ExactInt> $tr<$ty<I>> for $ty<I> {
            type Output = $ty<I>;
            fn $m(self, rhs: $ty<I>) -> $ty<I> {
                (&self).$m(&rhs)
            }
        }
        impl<'a, I: ExactInt> $tr<&'a $ty<I>> for $ty<I> {
            type Output = $ty<I>;
            fn $m(self, rhs: &'a $ty<I>) -> $ty<I> {
                (&self).$m(rhs)
            }
        }
    )*};
}
pub(crate) use forward_owned;

forward_owned!(RealSqrt2, Add::add, Sub::sub, Mul::mul);

impl<I: ExactInt> AddAssign<&RealSqrt2<I>> for RealSqrt2<I> {
    fn add_assign(&mut self, rhs: &RealSqrt2<I>) {
        self.a = &self.a + &rhs.a;
        self.b = &self.b + &rhs.b;
    }
}

impl<I: ExactInt> fmt::Display for RealSqrt2<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}√2", self.b),
            (false, false) => write!(f, "{}+{}√2", self.a, self.b),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    a: String,
    b: String,
}

impl<I: ExactInt> Serialize for RealSqrt2<I> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Wire {
            a: self.a.to_string(),
            b: self.b.to_string(),
        }
        .serialize(s)
    }
}

impl<'de, I: ExactInt> Deserialize<'de> for RealSqrt2<I> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = Wire::deserialize(d)?;
        let parse = |s: &str| {
            s.trim()
                .parse::<Rational<I>>()
                .map_err(|_| de::Error::custom(format!("invalid rational `{s}`")))
        };
        Ok(Self::new(parse(&w.a)?, parse(&w.b)?))
    }
}
