//! Weighted norms of test functions, reduced to one- or two-dimensional integrals.

use std::f64::consts::PI;

use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use super::gauss::adaptive;
use super::panels::{integrate_log, non_summable};
use super::{QuadError, QuadratureConfig};
use crate::exact::{Params, Rational};
use crate::functions::{bump, bump_deriv, ln_power_integral, Angular, RadialProfile, Scalar, Tail, TestFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum End {
    Origin,
    Infinity,
}

/// A divergent norm: the exact exponent test failed at `end`; `panel_pattern` records
/// whether the quadrature cross-check saw a non-summable panel sequence there too.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Divergence {
    pub end: End,
    pub panel_pattern: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Norm {
    /// `+∞` (serialized as `null`) when divergent.
    pub value: f64,
    pub ln_value: f64,
    pub rel_error: f64,
    pub divergence: Option<Divergence>,
}

impl Norm {
    fn divergent(d: Divergence) -> Norm {
        Norm { value: f64::INFINITY, ln_value: f64::INFINITY, rel_error: 0.0, divergence: Some(d) }
    }

    /// Norm from `ln ∫` (already including angular factors), the exponent `s` and the
    /// relative error of the integral.
    fn from_ln(ln_integral: f64, s: f64, rel_error: f64) -> Norm {
        let ln_value = ln_integral / s;
        Norm { value: ln_value.exp(), ln_value, rel_error: rel_error / s, divergence: None }
    }

    pub fn is_finite(&self) -> bool {
        self.divergence.is_none()
    }

    pub fn is_positive(&self) -> bool {
        self.ln_value > f64::NEG_INFINITY
    }
}

/// `|S^{n−1}| = N ω_N = 2π^{N/2} / Γ(N/2)`.
pub fn surface_area(n: u32) -> f64 {
    ln_surface(n).exp()
}

fn ln_surface(n: u32) -> f64 {
    let h = n as f64 / 2.0;
    std::f64::consts::LN_2 + h * PI.ln() - ln_gamma(h)
}

fn ln_beta(x: f64, y: f64) -> f64 {
    ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y)
}

/// `∫_{S^{N−1}} |σ₁|^s dσ`, for `N ≥ 2`.
pub fn harmonic_factor(s: f64, n: u32) -> f64 {
    ln_harmonic_factor(s, n).exp()
}

fn ln_harmonic_factor(s: f64, n: u32) -> f64 {
    ln_surface(n - 1) + ln_beta((s + 1.0) / 2.0, (n as f64 - 1.0) / 2.0)
}

/// `ln ∫_{S^{N−1}} (A σ₁² + B (1 − σ₁²))^{p/2} dσ`.
fn ln_harmonic_gradient_density(a2: f64, b2: f64, p: f64, n: u32, cfg: &QuadratureConfig) -> Result<f64, QuadError> {
    let m = a2.max(b2);
    if m == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let (al, be) = (a2 / m, b2 / m);
    let scale = 0.5 * p * m.ln();
    let nf = n as f64;
    if al == be {
        return Ok(scale + ln_surface(n));
    }
    if be < 1e-14 {
        return Ok(scale + ln_harmonic_factor(p, n));
    }
    if al < 1e-14 {
        return Ok(scale + ln_surface(n - 1) + ln_beta(0.5, (p + nf - 1.0) / 2.0));
    }
    let g = |phi: f64| {
        let (c, s) = (phi.cos(), phi.sin());
        (al * c * c + be * s * s).powf(0.5 * p) * s.powi(n as i32 - 2)
    };
    let half = adaptive(&g, 0.0, PI / 2.0, 1e-13, 0.0, cfg.max_subdivisions)?;
    Ok(scale + (2.0 * half.value).ln() + ln_surface(n - 1))
}

fn exact_sign(d: &Rational, n: u32, e: &Scalar, s: &Rational) -> i32 {
    match e {
        Scalar::Exact(e) => (d + Rational::from(n) + e * s).signum(),
        Scalar::Approx(x) => {
            let k = d.to_f64() + n as f64 + x * s.to_f64();
            if k > 0.0 {
                1
            } else if k < 0.0 {
                -1
            } else {
                0
            }
        }
    }
}

fn pick_tail(x: Tail, y: Tail, at_zero: bool) -> Tail {
    match (x, y) {
        (Tail::Vanishes, t) | (t, Tail::Vanishes) => t,
        (Tail::Power(a), Tail::Power(b)) => {
            let less = match (&a, &b) {
                (Scalar::Exact(p), Scalar::Exact(q)) => p < q,
                _ => a.to_f64() < b.to_f64(),
            };
            // the more singular term dominates: smaller exponent at 0, larger at ∞
            if less == at_zero {
                Tail::Power(a)
            } else {
                Tail::Power(b)
            }
        }
    }
}

fn shift_down(t: Tail) -> Tail {
    match t {
        Tail::Vanishes => Tail::Vanishes,
        Tail::Power(Scalar::Exact(e)) => Tail::Power(Scalar::Exact(e - Rational::one())),
        Tail::Power(Scalar::Approx(x)) => Tail::Power(Scalar::Approx(x - 1.0)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    RadialValue,
    RadialGradient,
    HarmonicValue,
    HarmonicGradient,
}

impl Mode {
    fn gradient(self) -> bool {
        matches!(self, Mode::RadialGradient | Mode::HarmonicGradient)
    }

    fn tails(self, f: &RadialProfile) -> (Tail, Tail) {
        match self {
            Mode::RadialValue | Mode::HarmonicValue => (f.tail_zero(), f.tail_infinity()),
            Mode::RadialGradient => (f.deriv_tail_zero(), f.deriv_tail_infinity()),
            Mode::HarmonicGradient => (
                pick_tail(f.deriv_tail_zero(), shift_down(f.tail_zero()), true),
                pick_tail(f.deriv_tail_infinity(), shift_down(f.tail_infinity()), false),
            ),
        }
    }

    fn ln_factor(self, s: f64, n: u32) -> f64 {
        match self {
            Mode::RadialValue | Mode::RadialGradient => ln_surface(n),
            Mode::HarmonicValue => ln_harmonic_factor(s, n),
            Mode::HarmonicGradient => 0.0,
        }
    }
}

fn ln_abs_pow(x: f64, s: f64) -> f64 {
    if x == 0.0 {
        f64::NEG_INFINITY
    } else {
        s * x.abs().ln()
    }
}

/// `ln` of the angular integral of `|u|^s` (or `|∇u|^s`) on the sphere of radius `t`,
/// without the constant factor from `Mode::ln_factor`.
fn ln_density(f: &RadialProfile, t: f64, s: f64, n: u32, mode: Mode, cfg: &QuadratureConfig) -> Result<f64, QuadError> {
    let (v, d) = f.eval(t);
    Ok(match mode {
        Mode::RadialValue | Mode::HarmonicValue => ln_abs_pow(v, s),
        Mode::RadialGradient => ln_abs_pow(d, s),
        Mode::HarmonicGradient => ln_harmonic_gradient_density(d * d, (v / t) * (v / t), s, n, cfg)?,
    })
}

fn profile_norm(
    f: &RadialProfile,
    d: &Rational,
    s: &Rational,
    n: u32,
    mode: Mode,
    cfg: &QuadratureConfig,
) -> Result<Norm, QuadError> {
    let sf = s.to_f64();
    let dn = d.to_f64() + n as f64;
    if f.is_zero() {
        return Ok(Norm::from_ln(f64::NEG_INFINITY, sf, 0.0));
    }

    // exact exponent test at both ends
    let (t0, tinf) = mode.tails(f);
    let diverges_at = if matches!(&t0, Tail::Power(e) if exact_sign(d, n, e, s) <= 0) {
        Some(End::Origin)
    } else if matches!(&tinf, Tail::Power(e) if exact_sign(d, n, e, s) >= 0) {
        Some(End::Infinity)
    } else {
        None
    };
    let integrand = |sigma: f64| -> f64 {
        match ln_density(f, sigma.exp(), sf, n, mode, cfg) {
            Ok(l) if l == f64::NEG_INFINITY => 0.0,
            Ok(l) => (dn * sigma + l).exp(),
            Err(_) => f64::NAN,
        }
    };
    if let Some(end) = diverges_at {
        let bps = f.breakpoints();
        let (start, dir) = match end {
            End::Origin => {
                let lo = bps.first().map_or(0, |b| b.log2().floor() as i64);
                ((lo - 2).min(-20), -1)
            }
            End::Infinity => {
                let hi = bps.last().map_or(0, |b| b.log2().ceil() as i64);
                ((hi + 2).max(20), 1)
            }
        };
        let panel_pattern = non_summable(&integrand, start, dir, cfg);
        return Ok(Norm::divergent(Divergence { end, panel_pattern }));
    }

    let ln_factor = mode.ln_factor(sf, n);

    if let Some(w) = f.power_window() {
        let (k, ln_coef) = if mode.gradient() {
            if w.coef == 0.0 || (w.exponent.is_zero() && mode == Mode::RadialGradient) {
                return Ok(Norm::from_ln(f64::NEG_INFINITY, sf, 0.0));
            }
            let k = (d + Rational::from(n) + (&w.exponent - Rational::one()) * s).to_f64();
            let e = w.exponent.to_f64();
            let ln_coef = match mode {
                Mode::RadialGradient => ln_abs_pow(w.coef * e, sf),
                _ => ln_abs_pow(w.coef, sf) + ln_harmonic_gradient_density(e * e, 1.0, sf, n, cfg)?,
            };
            (k, ln_coef)
        } else {
            ((d + Rational::from(n) + &w.exponent * s).to_f64(), ln_abs_pow(w.coef, sf))
        };
        let ln_int = ln_power_integral(k, w.lo, w.hi).ok_or(QuadError::Unsupported("window integral diverges"))?;
        return Ok(Norm::from_ln(ln_factor + ln_coef + ln_int, sf, 1e-15));
    }

    if let Some((eta, lambda, mu)) = f.log_modulated_view() {
        return log_modulated_norm(&eta, lambda, mu, d, s, n, mode, cfg);
    }

    let (lo, hi) = f.support();
    let breaks: Vec<f64> = f.breakpoints().iter().map(|b| b.ln()).collect();
    let est = integrate_log(&integrand, lo.ln(), hi.ln(), &breaks, cfg)?;
    if est.value.is_nan() {
        return Err(QuadError::NonFinite { at: f64::NAN });
    }
    let rel = if est.value > 0.0 { est.error / est.value } else { 0.0 };
    Ok(Norm::from_ln(ln_factor + est.value.ln(), sf, rel))
}

/// Norm of `t ↦ (μt)^{−η} bump(λ ln(μt))` (or its gradient) after the substitution
/// `v = λ ln(μt)`, which maps the support onto `(−1, 1)` for every `λ`.
#[allow(clippy::too_many_arguments)]
fn log_modulated_norm(
    eta: &Rational,
    lambda: f64,
    mu: f64,
    d: &Rational,
    s: &Rational,
    n: u32,
    mode: Mode,
    cfg: &QuadratureConfig,
) -> Result<Norm, QuadError> {
    let sf = s.to_f64();
    let e = eta.to_f64();
    let (m, j) = if mode.gradient() { (eta + Rational::one(), 1.0) } else { (eta.clone(), 0.0) };
    let kappa = (d + Rational::from(n) - &m * s).to_f64();
    let rate = kappa / lambda;
    let shift = rate.abs();
    let dens = |v: f64| -> Result<f64, QuadError> {
        let g = bump(v);
        if g == 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        let h = -e * g + lambda * bump_deriv(v);
        Ok(match mode {
            Mode::RadialValue | Mode::HarmonicValue => ln_abs_pow(g, sf),
            Mode::RadialGradient => ln_abs_pow(h, sf),
            Mode::HarmonicGradient => ln_harmonic_gradient_density(h * h, g * g, sf, n, cfg)?,
        })
    };
    let integrand = |v: f64| match dens(v) {
        Ok(l) if l == f64::NEG_INFINITY => 0.0,
        Ok(l) => (rate * v - shift + l).exp(),
        Err(_) => f64::NAN,
    };
    let pieces = 64;
    let mut value = 0.0;
    let mut error = 0.0;
    for i in 0..pieces {
        let a = -1.0 + 2.0 * i as f64 / pieces as f64;
        let b = -1.0 + 2.0 * (i + 1) as f64 / pieces as f64;
        let est = adaptive(&integrand, a, b, cfg.local_tol(), cfg.abs_tol, cfg.max_subdivisions)?;
        value += est.value;
        error += est.error;
    }
    if value.is_nan() {
        return Err(QuadError::NonFinite { at: f64::NAN });
    }
    let dn = d.to_f64() + n as f64;
    let ln_int = mode.ln_factor(sf, n) + (j * sf - dn) * mu.ln() - lambda.ln() + shift + value.ln();
    let rel = if value > 0.0 { error / value } else { 0.0 };
    Ok(Norm::from_ln(ln_int, sf, rel))
}

/// `∫_{S^{N−1}} (1 + x² + 2x σ₁)^{d/2} dσ` for `0 ≤ x < 1`.
fn ln_shell_weight(x: f64, d: f64, n: u32, cfg: &QuadratureConfig) -> Result<f64, QuadError> {
    if n == 1 {
        return Ok(((1.0 + x).powf(d) + (1.0 - x).powf(d)).ln());
    }
    let g = |psi: f64| (1.0 + x * x + 2.0 * x * psi.cos()).powf(d / 2.0) * psi.sin().powi(n as i32 - 2);
    let est = adaptive(&g, 0.0, PI, 1e-13, 0.0, cfg.max_subdivisions)?;
    Ok(est.value.ln() + ln_surface(n - 1))
}

/// Norm of `x ↦ φ(|x − x₀|)` with `|x₀| = R`, integrating in the distance `ρ` to `x₀`.
fn translated_norm(
    f: &RadialProfile,
    offset: f64,
    d: &Rational,
    s: &Rational,
    n: u32,
    gradient: bool,
    cfg: &QuadratureConfig,
) -> Result<Norm, QuadError> {
    let (sf, df) = (s.to_f64(), d.to_f64());
    let (_, hi) = f.support();
    if hi.partial_cmp(&offset) != Some(std::cmp::Ordering::Less) {
        return Err(QuadError::Unsupported("translated profile must vanish near the origin"));
    }
    let integrand = |sigma: f64| -> f64 {
        let rho = sigma.exp();
        let (v, dv) = f.eval(rho);
        let l = ln_abs_pow(if gradient { dv } else { v }, sf);
        if l == f64::NEG_INFINITY {
            return 0.0;
        }
        match ln_shell_weight(rho / offset, df, n, cfg) {
            Ok(w) => (n as f64 * sigma + l + w).exp(),
            Err(_) => f64::NAN,
        }
    };
    let breaks: Vec<f64> = f.breakpoints().iter().map(|b| b.ln()).collect();
    let (lo, _) = f.support();
    let est = integrate_log(&integrand, lo.ln(), hi.ln(), &breaks, cfg)?;
    if est.value.is_nan() {
        return Err(QuadError::NonFinite { at: f64::NAN });
    }
    let rel = if est.value > 0.0 { est.error / est.value } else { 0.0 };
    Ok(Norm::from_ln(df * offset.ln() + est.value.ln(), sf, rel))
}

fn check_exponents(s: &Rational, n: u32) -> Result<(), QuadError> {
    if !s.is_positive() {
        return Err(QuadError::Unsupported("the integrability exponent must be positive"));
    }
    if n == 0 {
        return Err(QuadError::Unsupported("dimension must be at least 1"));
    }
    Ok(())
}

/// `||u||_{d,s} = (∫_{ℝ^N} |x|^d |u|^s dx)^{1/s}`.
pub fn weighted_norm(u: &TestFunction, d: &Rational, s: &Rational, n: u32, cfg: &QuadratureConfig) -> Result<Norm, QuadError> {
    check_exponents(s, n)?;
    match u.angular {
        Angular::Radial => profile_norm(&u.radial, d, s, n, Mode::RadialValue, cfg),
        Angular::FirstHarmonic if n == 1 => Err(QuadError::Unsupported("first harmonics need N ≥ 2")),
        Angular::FirstHarmonic => profile_norm(&u.radial, d, s, n, Mode::HarmonicValue, cfg),
        Angular::TranslatedRadial { offset } => translated_norm(&u.radial, offset, d, s, n, false, cfg),
    }
}

/// `(N ω_N ∫_0^∞ t^{d+N−1} |f(t)|^s dt)^{1/s}`.
pub fn weighted_norm_radial(f: &RadialProfile, d: &Rational, s: &Rational, n: u32, cfg: &QuadratureConfig) -> Result<Norm, QuadError> {
    check_exponents(s, n)?;
    profile_norm(f, d, s, n, Mode::RadialValue, cfg)
}

/// `||∇u||_{b,p}`; for radial `u` this is the norm of `f′`.
pub fn weighted_norm_gradient(u: &TestFunction, b: &Rational, p: &Rational, n: u32, cfg: &QuadratureConfig) -> Result<Norm, QuadError> {
    check_exponents(p, n)?;
    match u.angular {
        Angular::Radial => profile_norm(&u.radial, b, p, n, Mode::RadialGradient, cfg),
        Angular::FirstHarmonic if n == 1 => Err(QuadError::Unsupported("first harmonics need N ≥ 2")),
        Angular::FirstHarmonic => profile_norm(&u.radial, b, p, n, Mode::HarmonicGradient, cfg),
        Angular::TranslatedRadial { offset } => translated_norm(&u.radial, offset, b, p, n, true, cfg),
    }
}

/// Radial norm of an arbitrary closure `f` with no divergence analysis; `breaks` are the
/// points in `(0, ∞)` where `f` is not smooth.
pub fn weighted_norm_fn<F: Fn(f64) -> f64>(
    f: F,
    d: f64,
    s: f64,
    n: u32,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Result<f64, QuadError> {
    let dn = d + n as f64;
    let integrand = |sigma: f64| {
        let l = ln_abs_pow(f(sigma.exp()), s);
        if l == f64::NEG_INFINITY {
            0.0
        } else {
            (dn * sigma + l).exp()
        }
    };
    let lb: Vec<f64> = breaks.iter().map(|b| b.ln()).collect();
    let est = integrate_log(&integrand, f64::NEG_INFINITY, f64::INFINITY, &lb, cfg)?;
    Ok(((ln_surface(n) + est.value.ln()) / s).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NormStatus {
    Finite,
    DivergentTarget,
    DivergentSource,
}

/// The three norms entering `||u||_{c,r} ≤ C(||u||_{a,q} + ||∇u||_{b,p})` and the ratios built from them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormReport {
    pub norm_target: Norm,
    pub norm_source_q: Norm,
    pub norm_grad: Norm,
    pub additive_ratio: Option<f64>,
    pub theta: Option<Rational>,
    pub multiplicative_ratio: Option<f64>,
    pub status: NormStatus,
    pub error_estimate: f64,
}

impl NormReport {
    /// `ln` of the additive ratio, when the denominator is finite and nonzero.
    pub fn ln_additive(&self) -> Option<f64> {
        let (t, a, g) = (&self.norm_target, &self.norm_source_q, &self.norm_grad);
        if !(t.is_finite() && a.is_finite() && g.is_finite()) || !(a.is_positive() || g.is_positive()) {
            return None;
        }
        let m = a.ln_value.max(g.ln_value);
        let ln_den = m + ((a.ln_value - m).exp() + (g.ln_value - m).exp()).ln();
        Some(t.ln_value - ln_den)
    }

    /// `ln (||u||_{c,r} / (||∇u||_{b,p}^θ ||u||_{a,q}^{1−θ}))`; a factor with exponent 0 is left out.
    pub fn ln_multiplicative(&self, theta: &Rational) -> Option<f64> {
        let (t, a, g) = (&self.norm_target, &self.norm_source_q, &self.norm_grad);
        if !t.is_finite() {
            return None;
        }
        let th = theta.to_f64();
        let mut ln = t.ln_value;
        if !theta.is_zero() {
            if !(g.is_finite() && g.is_positive()) {
                return None;
            }
            ln -= th * g.ln_value;
        }
        if *theta != Rational::one() {
            if !(a.is_finite() && a.is_positive()) {
                return None;
            }
            ln -= (1.0 - th) * a.ln_value;
        }
        Some(ln)
    }
}

/// Evaluates target, source and gradient norms of `u` for `params`.
pub fn norm_report(
    u: &TestFunction,
    params: &Params,
    theta: Option<&Rational>,
    cfg: &QuadratureConfig,
) -> Result<NormReport, QuadError> {
    let n = params.n;
    let norm_target = weighted_norm(u, &params.c, &params.r, n, cfg)?;
    let norm_source_q = weighted_norm(u, &params.a, &params.q, n, cfg)?;
    let norm_grad = weighted_norm_gradient(u, &params.b, &params.p, n, cfg)?;
    let status = if !(norm_source_q.is_finite() && norm_grad.is_finite()) {
        NormStatus::DivergentSource
    } else if !norm_target.is_finite() {
        NormStatus::DivergentTarget
    } else {
        NormStatus::Finite
    };
    let mut report = NormReport {
        error_estimate: norm_target.rel_error + norm_source_q.rel_error + norm_grad.rel_error,
        norm_target,
        norm_source_q,
        norm_grad,
        additive_ratio: None,
        theta: theta.cloned(),
        multiplicative_ratio: None,
        status,
    };
    report.additive_ratio = report.ln_additive().map(f64::exp);
    report.multiplicative_ratio = theta.and_then(|t| report.ln_multiplicative(t)).map(f64::exp);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn closed_form_examples() {
        let one = weighted_norm_fn(|t| (-t).exp(), 0.0, 1.0, 1, &[], &cfg()).unwrap();
        assert!((one - 2.0).abs() < 1e-10, "{one}");
        let g = weighted_norm_fn(|t| t * (-t).exp(), -1.0, 2.0, 3, &[], &cfg()).unwrap();
        assert!((g - (1.5 * PI).sqrt()).abs() < 1e-10, "{g}");
    }

    #[test]
    fn sphere_constants() {
        assert!((surface_area(1) - 2.0).abs() < 1e-14);
        assert!((surface_area(2) - 2.0 * PI).abs() < 1e-13);
        assert!((surface_area(3) - 4.0 * PI).abs() < 1e-13);
        // ∫_{S^1} cos² = π, ∫_{S^2} σ₁² = 4π/3
        assert!((harmonic_factor(2.0, 2) - PI).abs() < 1e-13);
        assert!((harmonic_factor(2.0, 3) - 4.0 * PI / 3.0).abs() < 1e-13);
    }

    #[test]
    fn gradient_density_cases_agree() {
        let c = cfg();
        for n in [2, 3, 5] {
            for p in [1.0, 1.5, 2.0, 3.0] {
                // A = B reduces to the sphere area
                let same = ln_harmonic_gradient_density(2.0, 2.0, p, n, &c).unwrap();
                assert!((same - (0.5 * p * 2f64.ln() + ln_surface(n))).abs() < 1e-12);
                // continuity into the closed-form edge cases
                let near = ln_harmonic_gradient_density(1.0, 1e-9, p, n, &c).unwrap();
                let edge = ln_harmonic_gradient_density(1.0, 0.0, p, n, &c).unwrap();
                assert!((near - edge).abs() < 1e-6, "n={n} p={p}");
                let near = ln_harmonic_gradient_density(1e-9, 1.0, p, n, &c).unwrap();
                let edge = ln_harmonic_gradient_density(0.0, 1.0, p, n, &c).unwrap();
                assert!((near - edge).abs() < 1e-6, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn cutoff_power_target_diverges_with_certificate() {
        // c = −3 < min{c⁰, c¹}: |x|^c |u|^r = |x|^{−3} near 0
        let f = RadialProfile::power_cutoff_inner(q("0"));
        let n = weighted_norm_radial(&f, &q("-3"), &q("2"), 3, &cfg()).unwrap();
        assert_eq!(n.divergence, Some(Divergence { end: End::Origin, panel_pattern: true }));
        let f = RadialProfile::power_cutoff_inner(q("1/2"));
        let n = weighted_norm_radial(&f, &q("-2"), &q("2"), 3, &cfg()).unwrap();
        assert!(n.divergence.is_some());
        // a convergent case
        let ok = weighted_norm_radial(&f, &q("0"), &q("2"), 3, &cfg()).unwrap();
        assert!(ok.is_finite() && ok.value > 0.0);
    }

    #[test]
    fn radial_gradient_is_the_norm_of_the_derivative() {
        let f = RadialProfile::power_tail(q("-1/2"), q("5/2"));
        let u = TestFunction::radial(f.clone());
        let g = weighted_norm_gradient(&u, &q("1"), &q("3/2"), 3, &cfg()).unwrap();
        let direct = weighted_norm_fn(|t| f.deriv(t), 1.0, 1.5, 3, &[], &cfg()).unwrap();
        assert!((g.value / direct - 1.0).abs() < 1e-9);
    }

    #[test]
    fn harmonic_annulus_check() {
        // f ≡ 1 on (1, 2): f′ = 0, |∇u|² = (1/t)²(1 − σ₁²)
        let f = RadialProfile::Indicator1D { lo: 1.0, hi: 2.0, lift: q("0") };
        let u = TestFunction::first_harmonic(f);
        let (b, p, n) = (q("1/2"), q("3"), 3u32);
        let g = weighted_norm_gradient(&u, &b, &p, n, &cfg()).unwrap();
        // ∫_1^2 t^{b+N−1−p} dt = ∫_1^2 t^{−1/2} dt
        let radial = 2.0 * (2f64.sqrt() - 1.0);
        let angular = surface_area(2) * (ln_gamma(0.5) + ln_gamma(2.5) - ln_gamma(3.0)).exp();
        let expect = (radial * angular).powf(1.0 / 3.0);
        assert!((g.value / expect - 1.0).abs() < 1e-12, "{} vs {expect}", g.value);
    }

    #[test]
    fn harmonic_quadrature_reduces_to_the_radial_form() {
        // smooth, nonconstant profile: compare against an explicit 2D integration
        let f = RadialProfile::smooth_bump(2.0, 1.0);
        let u = TestFunction::first_harmonic(f.clone());
        let (b, p, n) = (0.0, 2.0, 3u32);
        let g = weighted_norm_gradient(&u, &q("0"), &q("2"), n, &cfg()).unwrap();
        // p = 2, N = 3: ∫_S σ₁² = 4π/3, ∫_S (1 − σ₁²) = 8π/3
        let radial = |w: f64, z: f64| {
            adaptive(&|t: f64| {
                let (v, d) = f.eval(t);
                t.powf(b + n as f64 - 1.0) * (w * d * d + z * (v / t) * (v / t))
            }, 1.0, 3.0, 1e-13, 0.0, 1000)
            .unwrap()
            .value
        };
        let expect = (radial(4.0 * PI / 3.0, 8.0 * PI / 3.0)).powf(1.0 / p);
        assert!((g.value / expect - 1.0).abs() < 1e-9, "{} vs {expect}", g.value);
    }

    #[test]
    fn log_path_matches_generic_quadrature() {
        let f = RadialProfile::LogModulated { eta: q("1/3"), log_scale: 0.8 };
        let (d, s, n) = (q("-1/2"), q("3/2"), 2u32);
        let fast = weighted_norm_radial(&f, &d, &s, n, &cfg()).unwrap();
        let (lo, hi) = f.support();
        let slow = weighted_norm_fn(|t| f.value(t), -0.5, 1.5, n, &[lo, hi], &cfg()).unwrap();
        assert!((fast.value / slow - 1.0).abs() < 1e-9, "{} vs {slow}", fast.value);
        let u = TestFunction::radial(f.dilated(3.0));
        let gfast = weighted_norm_gradient(&u, &d, &s, n, &cfg()).unwrap();
        let (lo, hi) = u.radial.support();
        let gslow = weighted_norm_fn(|t| u.radial.deriv(t), -0.5, 1.5, n, &[lo, hi], &cfg()).unwrap();
        assert!((gfast.value / gslow - 1.0).abs() < 1e-9, "{} vs {gslow}", gfast.value);
    }

    #[test]
    fn translated_far_away_behaves_like_a_point_mass() {
        let f = RadialProfile::smooth_bump(0.0, 1.0);
        let (d, s, n) = (q("2"), q("2"), 3u32);
        let near0 = weighted_norm(&TestFunction::radial(f.clone()), &q("0"), &s, n, &cfg()).unwrap();
        let r = 1e6;
        let far = weighted_norm(&TestFunction::translated(f, r).unwrap(), &d, &s, n, &cfg()).unwrap();
        // ∫ |x|^2 |φ(x − x₀)|² ≈ R² ∫ |φ|²
        assert!((far.value / (r * near0.value) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn translated_line_case() {
        // N = 1, d = 0: translation does not change the norm
        let f = RadialProfile::smooth_bump(0.0, 1.0);
        let here = weighted_norm(&TestFunction::radial(f.clone()), &q("0"), &q("2"), 1, &cfg()).unwrap();
        let there = weighted_norm(&TestFunction::translated(f, 5.0).unwrap(), &q("0"), &q("2"), 1, &cfg()).unwrap();
        assert!((here.value / there.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn first_harmonic_rejected_on_the_line() {
        let u = TestFunction::first_harmonic(RadialProfile::smooth_bump(2.0, 1.0));
        assert!(weighted_norm_gradient(&u, &q("0"), &q("2"), 1, &cfg()).is_err());
    }

    #[test]
    fn report_ratios() {
        let p = Params::parse(3, "2", "2", "2", "0", "0", "-1");
        let u = TestFunction::radial(RadialProfile::smooth_bump(2.0, 1.0));
        let r = norm_report(&u, &p, Some(&q("1/2")), &cfg()).unwrap();
        assert_eq!(r.status, NormStatus::Finite);
        let (t, a, g) = (r.norm_target.value, r.norm_source_q.value, r.norm_grad.value);
        assert!((r.additive_ratio.unwrap() - t / (a + g)).abs() < 1e-12 * t / (a + g));
        assert!((r.multiplicative_ratio.unwrap() - t / (a * g).sqrt()).abs() < 1e-12 * t);
    }
}
