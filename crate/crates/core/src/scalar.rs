//! Scalar abstraction over `f64` and [`Dd`](crate::dd::Dd) so the spectral
//! kernels can run in either working precision.

use crate::dd::Dd;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

pub trait Real:
    Copy
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + std::fmt::Debug
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;
    fn from_usize(n: usize) -> Self {
        Self::from_f64(n as f64)
    }
    fn to_f64(self) -> f64;
    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn cosh(self) -> Self;
    fn sinh(self) -> Self;
    /// Cosine, used only to seed quadrature-node Newton iterations.
    fn cos_seed(x: f64) -> Self {
        Self::from_f64(x.cos())
    }
}

impl Real for f64 {
    #[inline]
    fn zero() -> f64 {
        0.0
    }
    #[inline]
    fn one() -> f64 {
        1.0
    }
    #[inline]
    fn from_f64(x: f64) -> f64 {
        x
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
    #[inline]
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    #[inline]
    fn sqrt(self) -> f64 {
        f64::sqrt(self)
    }
    #[inline]
    fn exp(self) -> f64 {
        f64::exp(self)
    }
    #[inline]
    fn ln(self) -> f64 {
        f64::ln(self)
    }
    #[inline]
    fn cosh(self) -> f64 {
        f64::cosh(self)
    }
    #[inline]
    fn sinh(self) -> f64 {
        f64::sinh(self)
    }
}

impl Real for Dd {
    #[inline]
    fn zero() -> Dd {
        Dd::ZERO
    }
    #[inline]
    fn one() -> Dd {
        Dd::ONE
    }
    #[inline]
    fn from_f64(x: f64) -> Dd {
        Dd::from_f64(x)
    }
    #[inline]
    fn to_f64(self) -> f64 {
        Dd::to_f64(self)
    }
    #[inline]
    fn abs(self) -> Dd {
        Dd::abs(self)
    }
    #[inline]
    fn sqrt(self) -> Dd {
        Dd::sqrt(self)
    }
    #[inline]
    fn exp(self) -> Dd {
        Dd::exp(self)
    }
    #[inline]
    fn ln(self) -> Dd {
        Dd::ln(self)
    }
    #[inline]
    fn cosh(self) -> Dd {
        Dd::cosh(self)
    }
    #[inline]
    fn sinh(self) -> Dd {
        Dd::sinh(self)
    }
}
