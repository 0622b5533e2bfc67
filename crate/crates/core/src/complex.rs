//! Minimal complex arithmetic for the gamma and zeta kernels.

use core::ops::{Add, Div, Mul, Neg, Sub};

use crate::math;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    #[inline]
    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    #[inline]
    pub fn abs(self) -> f64 {
        math::sqrt(self.norm_sqr())
    }

    #[inline]
    pub fn arg(self) -> f64 {
        math::atan2(self.im, self.re)
    }

    #[inline]
    pub fn recip(self) -> Self {
        let d = self.norm_sqr();
        Self::new(self.re / d, -self.im / d)
    }

    #[inline]
    pub fn scale(self, k: f64) -> Self {
        Self::new(self.re * k, self.im * k)
    }

    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    /// e^{iφ}
    #[inline]
    pub fn cis(phi: f64) -> Self {
        let (s, c) = math::sin_cos(phi);
        Self::new(c, s)
    }

    pub fn exp(self) -> Self {
        Self::cis(self.im).scale(math::exp(self.re))
    }

    pub fn ln(self) -> Self {
        Self::new(math::ln(self.abs()), self.arg())
    }

    pub fn cos(self) -> Self {
        Self::new(
            math::cos(self.re) * math::cosh(self.im),
            -math::sin(self.re) * math::sinh(self.im),
        )
    }
}

impl Add for Complex {
    type Output = Self;
    #[inline]
    fn add(self, b: Self) -> Self {
        Self::new(self.re + b.re, self.im + b.im)
    }
}

impl Sub for Complex {
    type Output = Self;
    #[inline]
    fn sub(self, b: Self) -> Self {
        Self::new(self.re - b.re, self.im - b.im)
    }
}

impl Mul for Complex {
    type Output = Self;
    #[inline]
    fn mul(self, b: Self) -> Self {
        Self::new(self.re * b.re - self.im * b.im, self.re * b.im + self.im * b.re)
    }
}

impl Div for Complex {
    type Output = Self;
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, b: Self) -> Self {
        self * b.recip()
    }
}

impl Neg for Complex {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}
