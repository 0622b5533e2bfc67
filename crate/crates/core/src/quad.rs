//! Composite Gauss–Legendre quadrature with per-panel bisection.
//!
//! An interval is cut into equal panels no wider than a caller-supplied
//! width. Each panel is integrated once with the n-point rule (coarse) and
//! once with the same rule on its two halves (fine); the fine value is kept
//! when the two agree to the requested tolerance, otherwise the halves are
//! treated as panels in their own right.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{self, PI};

/// n-point Gauss–Legendre rule on [−1, 1].
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton's method on Pₙ from the Chebyshev-like guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a quadrature rule needs at least one node");
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = math::cos(PI * (i as f64 + 0.75) / (nf + 0.5));
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Plain n-point estimate of ∫ₐᵇ f.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// Writes the scaled nodes and weights for [a, b] into `out`.
    fn panel(&self, a: f64, b: f64, out: &mut Vec<(f64, f64)>) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            out.push((mid + half * x, w * half));
        }
    }
}

/// (Pₙ(x), Pₙ′(x)) by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Settings for [`integrate_adaptive`].
#[derive(Clone, Copy, Debug)]
pub struct Adaptive {
    /// Largest initial panel.
    pub panel_width: f64,
    /// Accept a panel when |fine − coarse| ≤ rel_tol·max(|fine|, floor·h),
    /// plus an allowance for the rounding of the nodes.
    pub rel_tol: f64,
    /// Integrand magnitude below which the test becomes absolute.
    pub floor: f64,
    /// Bisection levels per initial panel.
    pub max_depth: u32,
}

impl Adaptive {
    pub fn new(panel_width: f64, rel_tol: f64) -> Self {
        Self {
            panel_width,
            rel_tol,
            floor: 1e-3,
            max_depth: 24,
        }
    }
}

/// ∫ₐᵇ f with panel bisection. `visit(t, w·f(t))` sees every node of every
/// accepted fine estimate, which lets callers accumulate moments alongside
/// the integral; the returned value is the sum of those products.
pub fn integrate_adaptive<F, V>(
    rule: &GaussLegendre,
    settings: &Adaptive,
    mut f: F,
    a: f64,
    b: f64,
    visit: V,
) -> Result<f64>
where
    F: FnMut(f64) -> f64,
    V: FnMut(f64, f64),
{
    integrate_adaptive_batch(
        rule,
        settings,
        |ts, out| {
            for (t, o) in ts.iter().zip(out.iter_mut()) {
                *o = f(*t);
            }
        },
        a,
        b,
        visit,
    )
}

/// [`integrate_adaptive`] for an integrand that fills a slice of values at
/// once; each call covers the nodes of a single panel.
pub fn integrate_adaptive_batch<F, V>(
    rule: &GaussLegendre,
    settings: &Adaptive,
    mut f: F,
    a: f64,
    b: f64,
    mut visit: V,
) -> Result<f64>
where
    F: FnMut(&[f64], &mut [f64]),
    V: FnMut(f64, f64),
{
    if b <= a {
        return Ok(0.0);
    }
    let panels = math::ceil((b - a) / settings.panel_width).max(1.0) as usize;
    let width = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(2 * rule.len());
    let mut ts = alloc::vec![0.0; 2 * rule.len()];
    let mut values = alloc::vec![0.0; 2 * rule.len()];
    let mut stack: Vec<(f64, f64, f64, u32)> = Vec::new();
    let mut total = 0.0;
    let n = rule.len();

    for i in (0..panels).rev() {
        let lo = a + i as f64 * width;
        let hi = if i + 1 == panels { b } else { lo + width };
        nodes.clear();
        rule.panel(lo, hi, &mut nodes);
        for (t, &(x, _)) in ts.iter_mut().zip(&nodes) {
            *t = x;
        }
        f(&ts[..n], &mut values[..n]);
        let coarse = nodes.iter().zip(&values).map(|(&(_, w), v)| w * v).sum();
        stack.push((lo, hi, coarse, 0));
    }

    while let Some((lo, hi, coarse, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        nodes.clear();
        rule.panel(lo, mid, &mut nodes);
        rule.panel(mid, hi, &mut nodes);
        for (t, &(x, _)) in ts.iter_mut().zip(&nodes) {
            *t = x;
        }
        f(&ts, &mut values);
        // The abscissae are themselves rounded, which moves each value by
        // about ulp(t)·|f′|; no rule can resolve the panel beyond that.
        let variation: f64 = values.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
        let rounding = 4.0 * f64::EPSILON * hi.abs().max(lo.abs()) * variation;
        for (v, &(_, w)) in values.iter_mut().zip(&nodes) {
            *v *= w;
        }
        let left: f64 = values[..rule.len()].iter().sum();
        let right: f64 = values[rule.len()..].iter().sum();
        let fine = left + right;
        let scale = fine.abs().max(settings.floor * (hi - lo));
        if (fine - coarse).abs() <= settings.rel_tol * scale + rounding {
            for (&(t, _), &v) in nodes.iter().zip(&values) {
                visit(t, v);
            }
            total += fine;
        } else if depth >= settings.max_depth {
            return Err(Error::Quadrature {
                a: lo,
                b: hi,
                coarse,
                fine,
            });
        } else {
            stack.push((mid, hi, right, depth + 1));
            stack.push((lo, mid, left, depth + 1));
        }
    }
    Ok(total)
}
