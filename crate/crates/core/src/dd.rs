//! Double-double arithmetic (about 106 significand bits).
//!
//! Phases such as `2θ(t) − t ln n` reach 10⁷ radians at the top of the
//! working range; they are formed in double-double and reduced modulo 2π
//! before the final cosine, so the reduced angle keeps full f64 accuracy.

use core::ops::{Add, Div, Mul, Neg, Sub};

use crate::math;

/// An unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

const SPLITTER: f64 = 134_217_729.0; // 2^27 + 1

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    let t = SPLITTER * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

/// Exact product `a·b = p + e` (Dekker).
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let e = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, e)
}

/// A double cut into two halves of at most 26 significant bits each, so that
/// products of two halves are exact. Hoisting the split out of a loop makes
/// repeated exact products with the same factor cheap.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Split {
    pub value: f64,
    hi: f64,
    lo: f64,
}

impl Split {
    #[inline]
    pub fn new(value: f64) -> Self {
        let (hi, lo) = split(value);
        Self { value, hi, lo }
    }

    /// Exact product with another split double.
    #[inline]
    pub fn prod(self, b: Split) -> DoubleDouble {
        let p = self.value * b.value;
        let e = ((self.hi * b.hi - p) + self.hi * b.lo + self.lo * b.hi) + self.lo * b.lo;
        DoubleDouble { hi: p, lo: e }
    }
}

const TAU_SPLIT_HI: f64 = 6.283_185_362_815_857; // leading 26 bits of 2π
const INV_TAU: f64 = 1.0 / core::f64::consts::TAU;

/// `(base − factor·ℓ) mod 2π` in `[−π, π]`, where `ℓ = ℓ.hi + ℓ.lo` is a
/// double-double whose high part has been pre-split. The reduction is exact
/// for phases below 2⁵² radians up to the final rounding.
#[inline]
pub fn reduced_phase(base: DoubleDouble, factor: Split, ell_hi: Split, ell_lo: f64) -> f64 {
    let prod = factor.prod(ell_hi);
    let (s, se) = two_sum(base.hi, -prod.hi);
    let lo = se + base.lo - prod.lo - factor.value * ell_lo;
    let k = round_small(s * INV_TAU);
    // k < 2^26 here, so k·TAU_SPLIT_HI is exact and the subtraction from s
    // is exact by Sterbenz.
    let r = s - k * TAU_SPLIT_HI;
    let tail = k * (DoubleDouble::TAU.hi - TAU_SPLIT_HI) + k * DoubleDouble::TAU.lo;
    r + (lo - tail)
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };
    pub const PI: Self = Self {
        hi: core::f64::consts::PI,
        lo: 1.224_646_799_147_353_2e-16,
    };
    pub const TAU: Self = Self {
        hi: core::f64::consts::TAU,
        lo: 2.449_293_598_294_706_4e-16,
    };
    pub const FRAC_PI_4: Self = Self {
        hi: core::f64::consts::FRAC_PI_4,
        lo: 3.061_616_997_868_383e-17,
    };
    pub const LN_2: Self = Self {
        hi: core::f64::consts::LN_2,
        lo: 2.319_046_813_846_299_6e-17,
    };
    pub const LN_PI: Self = Self {
        hi: 1.144_729_885_849_400_2,
        lo: 1.026_595_116_270_782_6e-17,
    };
    pub const LN_TAU: Self = Self {
        hi: 1.837_877_066_409_345_6,
        lo: -7.756_588_316_134_483e-17,
    };

    #[inline]
    pub const fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = quick_two_sum(hi, lo);
        Self { hi, lo }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// Exact sum of two doubles.
    #[inline]
    pub fn sum(a: f64, b: f64) -> Self {
        let (hi, lo) = two_sum(a, b);
        Self { hi, lo }
    }

    /// Exact product of two doubles.
    #[inline]
    pub fn prod(a: f64, b: f64) -> Self {
        let (hi, lo) = two_prod(a, b);
        Self { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        Self::new(p, e)
    }

    #[inline]
    pub fn add_f64(self, b: f64) -> Self {
        let (s, e) = two_sum(self.hi, b);
        Self::new(s, e + self.lo)
    }

    /// Multiplication by an exact power of two.
    #[inline]
    pub fn scale(self, pow2: f64) -> Self {
        Self {
            hi: self.hi * pow2,
            lo: self.lo * pow2,
        }
    }

    /// Reduces into `[−π, π]` and rounds to f64.
    #[inline]
    pub fn rem_tau(self) -> f64 {
        let k = round_small(self.hi / Self::TAU.hi);
        if k == 0.0 {
            return self.to_f64();
        }
        (self - Self::TAU.mul_f64(k)).to_f64()
    }

    pub fn exp(self) -> Self {
        if self.hi > 709.0 {
            return Self::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Self::ZERO;
        }
        let k = math::round(self.hi / Self::LN_2.hi);
        let r = self - Self::LN_2.mul_f64(k);
        // Shrink further so a short Taylor series suffices, then square back.
        const SQUARINGS: i32 = 10;
        let r = r.scale(1.0 / 1024.0);
        // expm1(r) by Taylor to degree 9; |r| < 3.4e-4.
        let mut power = r;
        let mut acc = r;
        for c in INV_FACTORIALS {
            power = power * r;
            acc = acc + power * c;
        }
        // expm1(2r) = expm1(r)·(2 + expm1(r))
        for _ in 0..SQUARINGS {
            acc = acc * acc.add_f64(2.0);
        }
        let e = acc.add_f64(1.0);
        e.scale(pow2i(k as i32))
    }

    /// Natural logarithm for positive arguments, one Newton step on `exp`.
    pub fn ln(self) -> Self {
        debug_assert!(self.hi > 0.0);
        let y0 = Self::from_f64(math::ln(self.hi));
        let correction = (self * (-y0).exp()).add_f64(-1.0);
        y0 + correction
    }
}

/// Round to nearest for |x| < 2⁵¹ without a libm call.
#[inline]
fn round_small(x: f64) -> f64 {
    const MAGIC: f64 = 6_755_399_441_055_744.0; // 1.5 · 2^52
    (x + MAGIC) - MAGIC
}

/// 1/k! for k = 2..=9.
const INV_FACTORIALS: [DoubleDouble; 8] = [
    DoubleDouble { hi: 0.5, lo: 0.0 },
    DoubleDouble {
        hi: 0.166_666_666_666_666_66,
        lo: 9.251_858_538_542_97e-18,
    },
    DoubleDouble {
        hi: 0.041_666_666_666_666_664,
        lo: 2.312_964_634_635_742_7e-18,
    },
    DoubleDouble {
        hi: 0.008_333_333_333_333_333,
        lo: 1.156_482_317_317_871_4e-19,
    },
    DoubleDouble {
        hi: 0.001_388_888_888_888_889,
        lo: -5.300_543_954_373_577e-20,
    },
    DoubleDouble {
        hi: 1.984_126_984_126_984e-4,
        lo: 1.720_955_829_342_070_5e-22,
    },
    DoubleDouble {
        hi: 2.480_158_730_158_73e-5,
        lo: 2.151_194_786_677_588_2e-23,
    },
    DoubleDouble {
        hi: 2.755_731_922_398_589_3e-6,
        lo: -1.858_393_274_046_472e-22,
    },
];

fn pow2i(k: i32) -> f64 {
    // k stays within the normal exponent range for the arguments used here.
    f64::from_bits(((k + 1023) as u64) << 52)
}

impl Add for DoubleDouble {
    type Output = Self;
    #[inline]
    fn add(self, b: Self) -> Self {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    #[inline]
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    #[inline]
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        Self::new(p, e)
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        Self::new(q1, q2) + Self::from_f64(q3)
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_are_normalised() {
        for c in [
            DoubleDouble::PI,
            DoubleDouble::TAU,
            DoubleDouble::LN_2,
            DoubleDouble::LN_PI,
            DoubleDouble::LN_TAU,
            DoubleDouble::FRAC_PI_4,
        ] {
            assert_eq!(c.hi + c.lo, c.hi);
        }
        assert_eq!(DoubleDouble::TAU, DoubleDouble::PI.scale(2.0));
    }

    #[test]
    fn ln_recovers_constants() {
        let ln2 = DoubleDouble::from_f64(2.0).ln();
        assert!((ln2 - DoubleDouble::LN_2).to_f64().abs() < 1e-30);
        let ln_pi = DoubleDouble::PI.ln();
        assert!((ln_pi - DoubleDouble::LN_PI).to_f64().abs() < 1e-30);
        let ln_tau = DoubleDouble::TAU.ln();
        assert!((ln_tau - DoubleDouble::LN_TAU).to_f64().abs() < 1e-30);
    }

    #[test]
    fn exp_ln_round_trip() {
        for x in [1e-3, 0.5, 3.0, 17.25, 1234.5, 1e6] {
            let d = DoubleDouble::from_f64(x);
            let back = d.ln().exp();
            assert!(((back - d).to_f64() / x).abs() < 1e-29, "x = {x}");
        }
    }

    #[test]
    fn rem_tau_reduces_large_phase() {
        // 10^7 is 1591549 full turns plus 2.98... radians.
        let r = DoubleDouble::from_f64(1.0e7).rem_tau();
        let expected = 1.0e7 - 1_591_549.0 * core::f64::consts::TAU;
        assert!((r - expected).abs() < 1e-8);
        assert!(r.abs() <= core::f64::consts::PI);
    }

    #[test]
    fn reduced_phase_matches_generic_path() {
        let base = DoubleDouble::from_f64(12_345.678).ln().mul_f64(4.0e5);
        for n in [2.0, 3.0, 17.0, 399.0] {
            let ell = DoubleDouble::from_f64(n).ln();
            for t in [31.5, 1.0e4 + 0.125, 9.9e5] {
                let generic = (base - ell.mul_f64(t)).rem_tau();
                let fast = reduced_phase(base, Split::new(t), Split::new(ell.hi), ell.lo);
                let d = (generic - fast).abs();
                assert!(d < 1e-12 || (d - core::f64::consts::TAU).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn tau_split_has_26_bits() {
        assert_eq!(split(DoubleDouble::TAU.hi).0, TAU_SPLIT_HI);
    }

    #[test]
    fn split_product_is_exact() {
        let a = Split::new(core::f64::consts::PI);
        let b = Split::new(1.0e5 / 3.0);
        let p = a.prod(b);
        assert_eq!(p, DoubleDouble::prod(a.value, b.value));
    }

    #[test]
    fn div_is_inverse_of_mul() {
        let a = DoubleDouble::PI;
        let b = DoubleDouble::LN_2;
        let q = a / b;
        assert!(((q * b) - a).to_f64().abs() < 1e-30);
    }
}
