//! Integration over `(0, ∞)` in the logarithmic variable `σ = ln t`, on dyadic panels
//! `[k ln 2, (k+1) ln 2]` that are added outward until the tails are negligible.

use std::f64::consts::LN_2;

use super::gauss::{adaptive, Estimate};
use super::{QuadError, QuadratureConfig};

/// Integral of `f` over one panel, split at interior breakpoints.
fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, breaks: &[f64], cfg: &QuadratureConfig) -> Result<Estimate, QuadError> {
    let mut total = Estimate::default();
    let mut lo = a;
    for &x in breaks.iter().filter(|&&x| x > a && x < b) {
        total = total + adaptive(f, lo, x, cfg.local_tol(), cfg.abs_tol, cfg.max_subdivisions)?;
        lo = x;
    }
    total = total + adaptive(f, lo, b, cfg.local_tol(), cfg.abs_tol, cfg.max_subdivisions)?;
    if !total.value.is_finite() {
        return Err(QuadError::NonFinite { at: a.exp() });
    }
    Ok(total)
}

fn panel_index(sigma: f64) -> i64 {
    (sigma / LN_2).floor() as i64
}

/// `∫_lo^hi f(σ) dσ` for `f ≥ 0`, where `lo` may be `−∞` and `hi` may be `+∞`.
/// `breaks` are the (finite) points where `f` is not smooth.
pub fn integrate_log<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Estimate, QuadError> {
    if lo >= hi {
        return Ok(Estimate::default());
    }
    let mut anchors: Vec<f64> = breaks.iter().copied().filter(|b| b.is_finite()).collect();
    anchors.extend([lo, hi].into_iter().filter(|x| x.is_finite()));
    if anchors.is_empty() {
        anchors.push(0.0);
    }
    let amin = anchors.iter().copied().fold(f64::INFINITY, f64::min).max(lo);
    let amax = anchors.iter().copied().fold(f64::NEG_INFINITY, f64::max).min(hi);
    let (ka, kb) = (panel_index(amin), panel_index(amax));
    if ka < cfg.k_min || kb > cfg.k_max {
        return Err(QuadError::PanelRange { k: if ka < cfg.k_min { ka } else { kb } });
    }
    let mut total = Estimate::default();
    for k in ka..=kb {
        let a = (k as f64 * LN_2).max(lo);
        let b = ((k + 1) as f64 * LN_2).min(hi);
        if a < b {
            total = total + panel(f, a, b, breaks, cfg)?;
        }
    }
    if lo == f64::NEG_INFINITY {
        total = tail(f, ka - 1, -1, total, cfg)?;
    }
    if hi == f64::INFINITY {
        total = tail(f, kb + 1, 1, total, cfg)?;
    }
    Ok(total)
}

/// Adds panels `start, start + dir, …` until the remainder of a geometric tail is below
/// tolerance, extrapolating once the panel ratio has settled.
fn tail<F: Fn(f64) -> f64>(f: &F, start: i64, dir: i64, mut total: Estimate, cfg: &QuadratureConfig) -> Result<Estimate, QuadError> {
    let mut prev: Option<f64> = None;
    let mut prev_ratio: Option<f64> = None;
    let mut zeros = 0;
    for j in 0.. {
        let k = start + dir * j;
        if k < cfg.k_min || k > cfg.k_max {
            return Err(QuadError::PanelRange { k });
        }
        let c = panel(f, k as f64 * LN_2, (k + 1) as f64 * LN_2, &[], cfg)?;
        total = total + c;
        if c.value == 0.0 {
            zeros += 1;
            if zeros >= 4 {
                break;
            }
            prev = None;
            prev_ratio = None;
            continue;
        }
        zeros = 0;
        if let Some(p) = prev {
            let rho = c.value / p;
            if rho < 1.0 {
                let rem = c.value * rho / (1.0 - rho);
                if rem <= 1e-3 * cfg.rel_tol * total.value.abs() {
                    total.value += rem;
                    total.error += rem;
                    break;
                }
                if let Some(pr) = prev_ratio {
                    let drift = (rho - pr).abs();
                    if j >= 6 && drift <= 1e-10 * rho {
                        total.value += rem;
                        total.error += rem * (drift / (1.0 - rho)).max(1e-13);
                        break;
                    }
                }
            }
            prev_ratio = Some(rho);
        }
        prev = Some(c.value);
    }
    Ok(total)
}

/// Whether the ten panels beyond `start` (moving by `dir`) form a non-summable pattern:
/// positive contributions with successive ratios at least `1 − rel_tol`.
pub fn non_summable<F: Fn(f64) -> f64>(f: &F, start: i64, dir: i64, cfg: &QuadratureConfig) -> bool {
    let mut prev: Option<f64> = None;
    for j in 0..=10 {
        let k = start + dir * j;
        let c = match panel(f, k as f64 * LN_2, (k + 1) as f64 * LN_2, &[], cfg) {
            Ok(c) if c.value > 0.0 => c.value,
            _ => return false,
        };
        if let Some(p) = prev {
            if c / p < 1.0 - cfg.rel_tol {
                return false;
            }
        }
        prev = Some(c);
    }
    true
}
