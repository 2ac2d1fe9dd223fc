use std::fmt::Debug;
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Rational = BigRational;

/// Gaussian rational `a + b i`.
pub type Gaussian = Complex<BigRational>;

/// Exact coefficient ring for [`Poly`](super::Poly).
pub trait Coeff:
    Clone
    + Debug
    + PartialEq
    + Eq
    + Hash
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_int(n: i64) -> Self;
    fn from_bigint(n: BigInt) -> Self;
}

impl Coeff for BigRational {
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_bigint(n: BigInt) -> Self {
        BigRational::from_integer(n)
    }
}

impl Coeff for Gaussian {
    fn from_int(n: i64) -> Self {
        Complex::new(BigRational::from_int(n), BigRational::zero())
    }

    fn from_bigint(n: BigInt) -> Self {
        Complex::new(BigRational::from_integer(n), BigRational::zero())
    }
}
