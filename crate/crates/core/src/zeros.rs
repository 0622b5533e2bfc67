//! Zeros of Z(t) by Gram blocks.
//!
//! Gram points gₖ solve ϑ(gₖ) = kπ; gₖ is good when (−1)ᵏZ(gₖ) > 0. Between
//! two consecutive good Gram points gⱼ < gₖ, Rosser's rule (which has no
//! exception below t ≈ 7·10⁶) says there are exactly k − j zeros. Each
//! block is sampled at its Gram points; if fewer sign changes than expected
//! turn up, the block is resampled 4× finer, up to [`MAX_REFINE`] times.
//! Every sign change is then bisected down to [`ZERO_TOL`].

use alloc::format;
use alloc::vec::Vec;

use crate::dd::DoubleDouble;
use crate::error::{Error, Result};
use crate::math::{self, PI};
use crate::special_fn::{dtheta, theta_dd, ZFunction};

/// Width of the final bisection bracket.
pub const ZERO_TOL: f64 = 1e-9;
/// Lowest admissible table bound.
pub const T_LOW: f64 = 50.0;
/// Highest admissible table bound.
pub const T_HIGH: f64 = 1e6;
/// Rounds of 4× resampling tried on a block that is short of zeros.
pub const MAX_REFINE: u32 = 4;

/// Sorted zeros of Z on (lo, hi).
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroTable {
    pub lo: f64,
    pub hi: f64,
    pub zeros: Vec<f64>,
    /// Every Gram block touching (lo, hi) showed its full count.
    pub complete: bool,
    /// Blocks whose count fell short, as (start, end).
    pub suspects: Vec<(f64, f64)>,
}

impl ZeroTable {
    /// round(ϑ(hi)/π + 1) − round(ϑ(lo)/π + 1); the Riemann–von Mangoldt
    /// estimate of the count, off by at most one at either end.
    pub fn theta_count(&self) -> i64 {
        theta_count(self.lo, self.hi)
    }

    /// Smallest γ ≥ t.
    pub fn nearest_zero_at_or_above(&self, t: f64) -> Result<f64> {
        if !(t >= self.lo && t <= self.hi) {
            return Err(Error::Range {
                what: "t outside the zero table",
                value: t,
                covered: (self.lo, self.hi),
            });
        }
        let i = self.zeros.partition_point(|&g| g < t);
        self.zeros.get(i).copied().ok_or(Error::Range {
            what: "no tabulated zero at or above t",
            value: t,
            covered: (self.lo, self.hi),
        })
    }
}

/// See [`ZeroTable::theta_count`].
pub fn theta_count(lo: f64, hi: f64) -> i64 {
    let n = |t: f64| math::round(theta_dd(t).to_f64() / PI + 1.0) as i64;
    n(hi) - n(lo)
}

/// The Gram point gₖ, by Newton's method from `guess`.
pub fn gram_point(k: i64, guess: f64) -> f64 {
    let target = DoubleDouble::PI.mul_f64(k as f64);
    let mut t = guess;
    for _ in 0..50 {
        let f = (theta_dd(t) - target).to_f64();
        let step = f / dtheta(t);
        t -= step;
        if step.abs() <= 1e-14 * t {
            break;
        }
    }
    t
}

/// Rounds to 12 decimals the same way the zero cache writes them, so that
/// a table survives a write/read cycle bit for bit.
pub fn quantize(x: f64) -> f64 {
    format!("{x:.12}").parse().unwrap_or(x)
}

struct Gram {
    k: i64,
    t: f64,
    z: f64,
}

impl Gram {
    fn good(&self) -> bool {
        let sign = if self.k % 2 == 0 { 1.0 } else { -1.0 };
        sign * self.z > 0.0
    }
}

/// All zeros of Z in (lo, hi), 50 ≤ lo < hi ≤ 10⁶.
pub fn find_zeros(z: &ZFunction, lo: f64, hi: f64) -> Result<ZeroTable> {
    if !(lo >= T_LOW) || !(hi <= T_HIGH) || !(lo < hi) {
        return Err(Error::Domain {
            what: "zero search needs 50 <= lo < hi <= 1e6",
            value: if lo >= T_LOW { hi } else { lo },
        });
    }
    let grams = gram_cover(z, lo, hi);

    let mut zeros = Vec::new();
    let mut suspects = Vec::new();
    let mut start = 0;
    while start + 1 < grams.len() {
        let mut end = start + 1;
        while end + 1 < grams.len() && !grams[end].good() {
            end += 1;
        }
        let block = &grams[start..=end];
        let (a, b) = (block[0].t, block[block.len() - 1].t);
        if b > lo && a < hi {
            let expected = (block[block.len() - 1].k - block[0].k) as usize;
            let brackets = block_brackets(z, block, expected);
            if brackets.len() < expected {
                suspects.push((a, b));
            }
            for (x0, x1, z0) in brackets {
                let gamma = bisect(z, x0, x1, z0)?;
                if gamma > lo && gamma < hi {
                    zeros.push(quantize(gamma));
                }
            }
        }
        start = end;
    }
    zeros.sort_by(|a, b| a.total_cmp(b));
    zeros.dedup_by(|a, b| (*a - *b).abs() < ZERO_TOL);
    Ok(ZeroTable {
        lo,
        hi,
        zeros,
        complete: suspects.is_empty(),
        suspects,
    })
}

/// Gram points from a good one at or below `lo` to a good one at or
/// above `hi`. Below t = 20, where ϑ stops being monotone, the walk stops
/// at the first Gram point reached regardless of its type.
fn gram_cover(z: &ZFunction, lo: f64, hi: f64) -> Vec<Gram> {
    let at = |k: i64, guess: f64| {
        let t = gram_point(k, guess);
        Gram { k, t, z: z.eval(t) }
    };
    let mut k = math::floor(theta_dd(lo).to_f64() / PI) as i64;
    let mut first = at(k, lo);
    while !first.good() && first.t > 20.0 {
        k -= 1;
        let guess = first.t - PI / dtheta(first.t);
        first = at(k, guess);
    }
    let mut grams = alloc::vec![first];
    loop {
        let last = &grams[grams.len() - 1];
        if last.t >= hi && last.good() {
            break;
        }
        let guess = last.t + PI / dtheta(last.t);
        let next = at(last.k + 1, guess);
        grams.push(next);
    }
    grams
}

/// Sign-change brackets (a, b, Z(a)) in one Gram block.
fn block_brackets(z: &ZFunction, block: &[Gram], expected: usize) -> Vec<(f64, f64, f64)> {
    let mut samples: Vec<(f64, f64)> = block.iter().map(|g| (g.t, g.z)).collect();
    let mut found = sign_changes(&samples);
    let mut round = 0;
    while found.len() < expected && round < MAX_REFINE {
        let mut finer = Vec::with_capacity(4 * samples.len());
        for w in samples.windows(2) {
            let (a, za) = w[0];
            let h = (w[1].0 - a) / 4.0;
            finer.push((a, za));
            for i in 1..4 {
                let t = a + i as f64 * h;
                finer.push((t, z.eval(t)));
            }
        }
        finer.push(samples[samples.len() - 1]);
        samples = finer;
        found = sign_changes(&samples);
        round += 1;
    }
    found
}

fn sign_changes(samples: &[(f64, f64)]) -> Vec<(f64, f64, f64)> {
    samples
        .windows(2)
        .filter(|w| (w[0].1 < 0.0) != (w[1].1 < 0.0))
        .map(|w| (w[0].0, w[1].0, w[0].1))
        .collect()
}

fn bisect(z: &ZFunction, mut a: f64, mut b: f64, mut za: f64) -> Result<f64> {
    for _ in 0..200 {
        if b - a <= ZERO_TOL {
            return Ok(0.5 * (a + b));
        }
        let m = 0.5 * (a + b);
        let zm = z.eval(m);
        if zm.is_nan() {
            break;
        }
        if (zm < 0.0) == (za < 0.0) {
            a = m;
            za = zm;
        } else {
            b = m;
        }
    }
    Err(Error::Solver {
        what: "zero refinement did not converge",
        lo: (a, za),
        hi: (b, z.eval(b)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gram_points_solve_theta() {
        let g = gram_point(100, 280.0);
        assert!((theta_dd(g).to_f64() - 100.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn quantize_is_idempotent() {
        for x in [50.123_456_789_012_35, 14_134.725_141_734_69, 999_999.123_456_789] {
            let q = quantize(x);
            assert_eq!(quantize(q), q);
            assert!((q - x).abs() <= 5e-13 + x * 1e-16);
        }
    }

    #[test]
    fn domain_is_checked() {
        let z = ZFunction::new();
        assert!(find_zeros(&z, 10.0, 100.0).is_err());
        assert!(find_zeros(&z, 100.0, 100.0).is_err());
        assert!(find_zeros(&z, 100.0, 2e6).is_err());
    }

    #[test]
    fn lookup_includes_the_boundary() {
        let table = ZeroTable {
            lo: 50.0,
            hi: 60.0,
            zeros: alloc::vec![52.970_321_477_715, 56.446_247_697_064, 59.347_044_002_603],
            complete: true,
            suspects: Vec::new(),
        };
        assert_eq!(
            table.nearest_zero_at_or_above(56.446_247_697_064).unwrap(),
            56.446_247_697_064
        );
        assert_eq!(table.nearest_zero_at_or_above(50.0).unwrap(), 52.970_321_477_715);
        assert!(table.nearest_zero_at_or_above(59.5).is_err());
        assert!(table.nearest_zero_at_or_above(61.0).is_err());
    }
}
