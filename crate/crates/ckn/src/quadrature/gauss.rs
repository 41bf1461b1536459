//! Gauss-Legendre rules and adaptive bisection on finite intervals.

use std::sync::OnceLock;

use super::QuadError;

/// Nodes and weights of the `n`-point rule on `[−1, 1]`.
pub fn legendre_rule(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out.reverse();
    out
}

fn rule20() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| legendre_rule(20))
}

/// 20-point rule on `[a, b]`.
pub fn fixed<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let h = 0.5 * (b - a);
    let m = 0.5 * (a + b);
    rule20().iter().map(|&(x, w)| w * f(m + h * x)).sum::<f64>() * h
}

/// Integral with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl std::ops::Add for Estimate {
    type Output = Estimate;
    fn add(self, o: Estimate) -> Estimate {
        Estimate { value: self.value + o.value, error: self.error + o.error }
    }
}

/// Adaptive bisection: an interval is accepted when the 20-point value and the sum over
/// its halves agree to `rel_tol` (or `abs_tol`), measured against the larger of the piece
/// and its length share of the whole. At most `max_splits` bisections.
pub fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_splits: usize,
) -> Result<Estimate, QuadError> {
    if a >= b {
        return Ok(Estimate::default());
    }
    let mut total = Estimate::default();
    let first = fixed(f, a, b);
    let density = first.abs() / (b - a);
    let mut stack = vec![(a, b, first)];
    let mut splits = 0;
    while let Some((lo, hi, whole)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = fixed(f, lo, mid);
        let right = fixed(f, mid, hi);
        let halves = left + right;
        let err = (halves - whole).abs();
        if !halves.is_finite() {
            return Err(QuadError::NonFinite { at: mid });
        }
        if err <= abs_tol.max(rel_tol * halves.abs().max(density * (hi - lo))) || mid <= lo || mid >= hi {
            total.value += halves;
            total.error += err;
            continue;
        }
        splits += 1;
        if splits > max_splits {
            return Err(QuadError::NonConvergence { lo: a, hi: b, splits: max_splits });
        }
        stack.push((lo, mid, left));
        stack.push((mid, hi, right));
    }
    Ok(total)
}
