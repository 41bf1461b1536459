//! Closed-form radial profiles `f: (0, ∞) → ℝ` with analytic derivatives.

use serde::{Deserialize, Serialize};

use crate::exact::Rational;

fn psi(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

fn dpsi(x: f64) -> f64 {
    if x > 0.0 {
        psi(x) / (x * x)
    } else {
        0.0
    }
}

/// Smooth monotone step: 0 for `x ≤ 0`, 1 for `x ≥ 1`, built from `e^{−1/x}`.
pub fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let (u, v) = (psi(x), psi(1.0 - x));
        u / (u + v)
    }
}

pub fn smooth_step_deriv(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    let (u, v) = (psi(x), psi(1.0 - x));
    let s = u + v;
    (dpsi(x) * v + u * dpsi(1.0 - x)) / (s * s)
}

/// The fixed cutoff: `ζ = 1` on `[0, 1/2]`, `ζ = 0` on `[1, ∞)`.
pub fn zeta(t: f64) -> f64 {
    smooth_step(2.0 * (1.0 - t))
}

pub fn zeta_deriv(t: f64) -> f64 {
    -2.0 * smooth_step_deriv(2.0 * (1.0 - t))
}

/// Standard bump `exp(−1/(1−s²))` on `(−1, 1)`.
pub fn bump(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - s * s)).exp()
    }
}

pub fn bump_deriv(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        return 0.0;
    }
    let w = 1.0 - s * s;
    bump(s) * (-2.0 * s / (w * w))
}

/// An exponent known exactly or only as a float.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Approx(f64),
}

impl Scalar {
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64(),
            Scalar::Approx(x) => *x,
        }
    }

    fn map(&self, exact: impl Fn(&Rational) -> Rational, approx: impl Fn(f64) -> f64) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(exact(r)),
            Scalar::Approx(x) => Scalar::Approx(approx(*x)),
        }
    }
}

/// Behaviour of `|f|` near an end of `(0, ∞)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Tail {
    /// Zero near that end, or decaying faster than every power.
    Vanishes,
    /// `|f(t)| ≍ t^e`.
    Power(Scalar),
}

impl Tail {
    fn exact(e: Rational) -> Tail {
        Tail::Power(Scalar::Exact(e))
    }

    /// Tail of `t ↦ f(1/t)` at the opposite end, given `g(t) ≍ t^e`; `extra` is added
    /// to the negated exponent (−2 for the chain-rule factor of a derivative).
    fn mirrored(&self, extra: i64) -> Tail {
        match self {
            Tail::Vanishes => Tail::Vanishes,
            Tail::Power(s) => Tail::Power(s.map(|r| -r + Rational::from_int(extra), |x| -x + extra as f64)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum RadialProfile {
    Zero,
    /// `t^{−α} ζ(t)`
    PowerCutoffInner { alpha: Rational },
    /// `t^{−α} (1 − ζ(t))`
    PowerCutoffOuter { alpha: Rational },
    /// `bump((t − center)/width)`; `center < width` gives a profile not vanishing at 0.
    SmoothBump { center: f64, width: f64 },
    /// `t^{−α} (1 + t)^{α − β}`
    PowerTail { alpha: Rational, beta: Rational },
    /// `t^{−η} bump(λ ln t)`
    LogModulated { eta: Rational, log_scale: f64 },
    /// `t^{lift}` on `(lo, hi)`, zero elsewhere.
    Indicator1D { lo: f64, hi: f64, lift: Rational },
    /// `t^{lift + ε − 1/r}` on `(0, 1)`, zero elsewhere.
    PowerOnUnit { eps: Rational, r: Rational, lift: Rational },
    /// `t^{−decay} ∫_1^{min(t, upper)} τ^{−β} dτ` for `t > 1`, zero on `(0, 1]`.
    HardyPrimitive { beta: Rational, upper: f64, decay: f64 },
    /// `inner(factor · t)`
    Dilated { inner: Box<RadialProfile>, factor: f64 },
    /// `inner(1/t)`
    Inverted { inner: Box<RadialProfile> },
}

/// A profile of the form `coef · t^{exponent}` on `(lo, hi)` and zero elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerWindow {
    pub coef: f64,
    pub exponent: Rational,
    pub lo: f64,
    pub hi: f64,
}

/// `∫_lo^hi t^{k−1} dt` computed as a logarithm, or `None` when it diverges.
pub fn ln_power_integral(k: f64, lo: f64, hi: f64) -> Option<f64> {
    if hi.partial_cmp(&lo) != Some(std::cmp::Ordering::Greater) {
        return Some(f64::NEG_INFINITY);
    }
    if lo == 0.0 {
        return if k > 0.0 && hi.is_finite() { Some(k * hi.ln() - k.ln()) } else { None };
    }
    if hi.is_infinite() {
        return if k < 0.0 { Some(k * lo.ln() - (-k).ln()) } else { None };
    }
    let span = ((hi - lo) / lo).ln_1p();
    if k == 0.0 {
        return Some(span.ln());
    }
    // lo^k · expm1(k·span)/k, kept positive
    let m = (k * span).exp_m1() / k;
    Some(k * lo.ln() + m.ln())
}

impl RadialProfile {
    pub fn power_cutoff_inner(alpha: Rational) -> Self {
        RadialProfile::PowerCutoffInner { alpha }
    }

    pub fn power_cutoff_outer(alpha: Rational) -> Self {
        RadialProfile::PowerCutoffOuter { alpha }
    }

    pub fn power_tail(alpha: Rational, beta: Rational) -> Self {
        RadialProfile::PowerTail { alpha, beta }
    }

    pub fn smooth_bump(center: f64, width: f64) -> Self {
        RadialProfile::SmoothBump { center, width }
    }

    /// `(f(t), f′(t))`; one-sided values at seams.
    pub fn eval(&self, t: f64) -> (f64, f64) {
        use RadialProfile::*;
        match self {
            Zero => (0.0, 0.0),
            PowerCutoffInner { alpha } => {
                let a = alpha.to_f64();
                let pw = t.powf(-a);
                let z = zeta(t);
                (pw * z, -a * pw / t * z + pw * zeta_deriv(t))
            }
            PowerCutoffOuter { alpha } => {
                let a = alpha.to_f64();
                let pw = t.powf(-a);
                let z = 1.0 - zeta(t);
                (pw * z, -a * pw / t * z - pw * zeta_deriv(t))
            }
            SmoothBump { center, width } => {
                let s = (t - center) / width;
                (bump(s), bump_deriv(s) / width)
            }
            PowerTail { alpha, beta } => {
                let (a, b) = (alpha.to_f64(), beta.to_f64());
                let f = (-a * t.ln() + (a - b) * t.ln_1p()).exp();
                (f, f * (-a - b * t) / (t * (1.0 + t)))
            }
            LogModulated { eta, log_scale } => {
                let e = eta.to_f64();
                let v = log_scale * t.ln();
                let pw = t.powf(-e);
                (pw * bump(v), pw / t * (-e * bump(v) + log_scale * bump_deriv(v)))
            }
            Indicator1D { lo, hi, lift } => {
                if t > *lo && t < *hi {
                    let l = lift.to_f64();
                    let f = t.powf(l);
                    (f, l * f / t)
                } else {
                    (0.0, 0.0)
                }
            }
            PowerOnUnit { .. } => {
                if t > 0.0 && t < 1.0 {
                    let e = self.window_exponent().to_f64();
                    let f = t.powf(e);
                    (f, e * f / t)
                } else {
                    (0.0, 0.0)
                }
            }
            HardyPrimitive { beta, upper, decay } => {
                if t <= 1.0 {
                    return (0.0, 0.0);
                }
                let big = hardy_primitive(beta, t.min(*upper));
                let g = if t < *upper { t.powf(-beta.to_f64()) } else { 0.0 };
                let pw = t.powf(-decay);
                (pw * big, pw * (g - decay * big / t))
            }
            Dilated { inner, factor } => {
                let (f, d) = inner.eval(factor * t);
                (f, factor * d)
            }
            Inverted { inner } => {
                let s = 1.0 / t;
                let (f, d) = inner.eval(s);
                (f, -d * s * s)
            }
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.eval(t).0
    }

    pub fn deriv(&self, t: f64) -> f64 {
        self.eval(t).1
    }

    /// Closure of the set where `f` may be nonzero, as `(lo, hi)` with `0` and `∞` allowed.
    pub fn support(&self) -> (f64, f64) {
        use RadialProfile::*;
        match self {
            Zero => (1.0, 1.0),
            PowerCutoffInner { .. } => (0.0, 1.0),
            PowerCutoffOuter { .. } => (0.5, f64::INFINITY),
            SmoothBump { center, width } => ((center - width).max(0.0), center + width),
            PowerTail { .. } => (0.0, f64::INFINITY),
            LogModulated { log_scale, .. } => ((-1.0 / log_scale).exp(), (1.0 / log_scale).exp()),
            Indicator1D { lo, hi, .. } => (*lo, *hi),
            PowerOnUnit { .. } => (0.0, 1.0),
            HardyPrimitive { .. } => (1.0, f64::INFINITY),
            Dilated { inner, factor } => {
                let (lo, hi) = inner.support();
                (lo / factor, hi / factor)
            }
            Inverted { inner } => {
                let (lo, hi) = inner.support();
                (recip(hi), recip(lo))
            }
        }
    }

    /// Points where `f` or `f′` is not smooth, plus the support ends.
    pub fn breakpoints(&self) -> Vec<f64> {
        use RadialProfile::*;
        let (lo, hi) = self.support();
        let mut pts: Vec<f64> = match self {
            PowerCutoffInner { .. } | PowerCutoffOuter { .. } => vec![0.5, 1.0],
            SmoothBump { center, .. } => vec![*center],
            HardyPrimitive { upper, .. } => vec![1.0, *upper],
            Dilated { inner, factor } => inner.breakpoints().into_iter().map(|b| b / factor).collect(),
            Inverted { inner } => inner.breakpoints().into_iter().map(recip).collect(),
            _ => vec![],
        };
        pts.push(lo);
        pts.push(hi);
        pts.retain(|b| b.is_finite() && *b > 0.0);
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// Behaviour of `|f|` as `t → 0`.
    pub fn tail_zero(&self) -> Tail {
        use RadialProfile::*;
        match self {
            PowerCutoffInner { alpha } => Tail::exact(-alpha),
            SmoothBump { center, width } if center < width => Tail::exact(Rational::zero()),
            PowerTail { alpha, .. } => Tail::exact(-alpha),
            Indicator1D { lo, lift, .. } if *lo == 0.0 => Tail::exact(lift.clone()),
            PowerOnUnit { .. } => Tail::Power(self.window_exponent()),
            Dilated { inner, .. } => inner.tail_zero(),
            Inverted { inner } => inner.tail_infinity().mirrored(0),
            _ => Tail::Vanishes,
        }
    }

    /// Behaviour of `|f|` as `t → ∞`.
    pub fn tail_infinity(&self) -> Tail {
        use RadialProfile::*;
        match self {
            PowerCutoffOuter { alpha } => Tail::exact(-alpha),
            PowerTail { beta, .. } => Tail::exact(-beta),
            Indicator1D { hi, lift, .. } if hi.is_infinite() => Tail::exact(lift.clone()),
            HardyPrimitive { decay, .. } => {
                if *decay == 0.0 {
                    Tail::exact(Rational::zero())
                } else {
                    Tail::Power(Scalar::Approx(-decay))
                }
            }
            Dilated { inner, .. } => inner.tail_infinity(),
            Inverted { inner } => inner.tail_zero().mirrored(0),
            _ => Tail::Vanishes,
        }
    }

    /// Behaviour of `|f′|` as `t → 0`.
    pub fn deriv_tail_zero(&self) -> Tail {
        use RadialProfile::*;
        let one = Rational::one();
        match self {
            PowerCutoffInner { alpha } if !alpha.is_zero() => Tail::exact(-alpha - one),
            SmoothBump { center, width } if center < width => {
                let e = if *center == 0.0 { 1 } else { 0 };
                Tail::exact(Rational::from_int(e))
            }
            PowerTail { alpha, beta } => {
                if !alpha.is_zero() {
                    Tail::exact(-alpha - one)
                } else if !beta.is_zero() {
                    Tail::exact(Rational::zero())
                } else {
                    Tail::Vanishes
                }
            }
            Indicator1D { lo, lift, .. } if *lo == 0.0 && !lift.is_zero() => Tail::exact(lift - one),
            PowerOnUnit { .. } => match self.window_exponent() {
                Scalar::Exact(e) if e.is_zero() => Tail::Vanishes,
                e => Tail::Power(e.map(|r| r - Rational::one(), |x| x - 1.0)),
            },
            Dilated { inner, .. } => inner.deriv_tail_zero(),
            Inverted { inner } => inner.deriv_tail_infinity().mirrored(-2),
            _ => Tail::Vanishes,
        }
    }

    /// Behaviour of `|f′|` as `t → ∞`.
    pub fn deriv_tail_infinity(&self) -> Tail {
        use RadialProfile::*;
        let one = Rational::one();
        match self {
            PowerCutoffOuter { alpha } if !alpha.is_zero() => Tail::exact(-alpha - one),
            PowerTail { alpha, beta } => {
                if !beta.is_zero() {
                    Tail::exact(-beta - one)
                } else if !alpha.is_zero() {
                    Tail::exact(Rational::from_int(-2))
                } else {
                    Tail::Vanishes
                }
            }
            Indicator1D { hi, lift, .. } if hi.is_infinite() && !lift.is_zero() => Tail::exact(lift - one),
            HardyPrimitive { decay, .. } if *decay != 0.0 => Tail::Power(Scalar::Approx(-decay - 1.0)),
            Dilated { inner, .. } => inner.deriv_tail_infinity(),
            Inverted { inner } => inner.deriv_tail_zero().mirrored(-2),
            _ => Tail::Vanishes,
        }
    }

    fn window_exponent(&self) -> Scalar {
        match self {
            RadialProfile::PowerOnUnit { eps, r, lift } => Scalar::Exact(lift + eps - r.recip().expect("r > 0")),
            _ => unreachable!("not a power-on-unit profile"),
        }
    }

    /// Exact `coef · t^e` window form for indicator-type profiles, through dilations and inversions.
    pub fn power_window(&self) -> Option<PowerWindow> {
        use RadialProfile::*;
        match self {
            Indicator1D { lo, hi, lift } => Some(PowerWindow { coef: 1.0, exponent: lift.clone(), lo: *lo, hi: *hi }),
            PowerOnUnit { eps, r, lift } => Some(PowerWindow {
                coef: 1.0,
                exponent: lift + eps - r.recip().expect("r > 0"),
                lo: 0.0,
                hi: 1.0,
            }),
            Dilated { inner, factor } => inner.power_window().map(|w| PowerWindow {
                coef: w.coef * factor.powf(w.exponent.to_f64()),
                exponent: w.exponent,
                lo: w.lo / factor,
                hi: w.hi / factor,
            }),
            Inverted { inner } => inner.power_window().map(|w| PowerWindow {
                coef: w.coef,
                exponent: -w.exponent,
                lo: recip(w.hi),
                hi: recip(w.lo),
            }),
            _ => None,
        }
    }

    /// `(η, λ, μ)` when the profile is `t ↦ (μt)^{−η} bump(λ ln(μt))`.
    pub fn log_modulated_view(&self) -> Option<(Rational, f64, f64)> {
        match self {
            RadialProfile::LogModulated { eta, log_scale } => Some((eta.clone(), *log_scale, 1.0)),
            RadialProfile::Dilated { inner, factor } => {
                inner.log_modulated_view().map(|(e, l, m)| (e, l, m * factor))
            }
            _ => None,
        }
    }

    /// `t ↦ f(λt)`.
    pub fn dilated(&self, lambda: f64) -> RadialProfile {
        match self {
            RadialProfile::Zero => RadialProfile::Zero,
            _ if lambda == 1.0 => self.clone(),
            RadialProfile::Dilated { inner, factor } => {
                let f = factor * lambda;
                if f == 1.0 {
                    (**inner).clone()
                } else {
                    RadialProfile::Dilated { inner: inner.clone(), factor: f }
                }
            }
            _ => RadialProfile::Dilated { inner: Box::new(self.clone()), factor: lambda },
        }
    }

    /// `t ↦ f(1/t)`, simplified where the catalog is closed under inversion.
    pub fn inverted(&self) -> RadialProfile {
        use RadialProfile::*;
        match self {
            Zero => Zero,
            PowerTail { alpha, beta } => PowerTail { alpha: -beta, beta: -alpha },
            LogModulated { eta, log_scale } => LogModulated { eta: -eta, log_scale: *log_scale },
            Inverted { inner } => (**inner).clone(),
            Dilated { inner, factor } => inner.inverted().dilated(1.0 / factor),
            _ => Inverted { inner: Box::new(self.clone()) },
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, RadialProfile::Zero)
    }
}

fn recip(x: f64) -> f64 {
    if x == 0.0 {
        f64::INFINITY
    } else if x.is_infinite() {
        0.0
    } else {
        1.0 / x
    }
}

/// `∫_1^x τ^{−β} dτ`.
fn hardy_primitive(beta: &Rational, x: f64) -> f64 {
    let one = Rational::one();
    if *beta == one {
        x.ln()
    } else {
        let k = (&one - beta).to_f64();
        (k * x.ln()).exp_m1() / k
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    fn catalog() -> Vec<RadialProfile> {
        vec![
            RadialProfile::power_cutoff_inner(q("1/3")),
            RadialProfile::power_cutoff_outer(q("5/2")),
            RadialProfile::smooth_bump(2.0, 1.0),
            RadialProfile::smooth_bump(0.0, 1.5),
            RadialProfile::power_tail(q("-1/2"), q("3")),
            RadialProfile::LogModulated { eta: q("1/2"), log_scale: 0.7 },
            RadialProfile::HardyPrimitive { beta: q("3/2"), upper: 40.0, decay: 0.1 },
        ]
    }

    #[test]
    fn zeta_is_a_cutoff() {
        assert_eq!(zeta(0.2), 1.0);
        assert_eq!(zeta(0.5), 1.0);
        assert_eq!(zeta(1.0), 0.0);
        assert_eq!(zeta(3.0), 0.0);
        let mut prev = 1.0;
        for i in 0..=100 {
            let z = zeta(0.5 + 0.005 * i as f64);
            assert!(z <= prev);
            prev = z;
        }
        assert!((zeta(0.75) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn derivatives_match_differences() {
        for f in catalog() {
            for &t in &[0.3, 0.7, 1.3, 2.2, 2.9, 5.0, 17.0] {
                let h = 1e-6 * t;
                let fd = (f.value(t + h) - f.value(t - h)) / (2.0 * h);
                let d = f.deriv(t);
                assert!((fd - d).abs() <= 1e-5 * (1.0 + d.abs()), "{f:?} at {t}: {fd} vs {d}");
            }
        }
    }

    #[test]
    fn dilation_composes() {
        for f in catalog() {
            let a = f.dilated(2.0).dilated(0.25);
            let b = f.dilated(0.5);
            for &t in &[0.4, 1.0, 3.5] {
                assert!((a.value(t) - b.value(t)).abs() <= 1e-14 * (1.0 + b.value(t).abs()));
            }
        }
        let f = RadialProfile::smooth_bump(2.0, 1.0);
        assert_eq!(f.dilated(1.0), f);
        assert_eq!(f.dilated(3.0).dilated(1.0 / 3.0), f);
    }

    #[test]
    fn inversion_is_an_involution() {
        for f in catalog() {
            let g = f.inverted().inverted();
            for &t in &[0.4, 1.0, 3.5, 11.0] {
                assert!((f.value(t) - g.value(t)).abs() <= 1e-12 * (1.0 + f.value(t).abs()));
                assert!((f.value(t) - f.inverted().value(1.0 / t)).abs() <= 1e-12 * (1.0 + f.value(t).abs()));
            }
        }
        assert_eq!(
            RadialProfile::power_tail(q("1"), q("3")).inverted(),
            RadialProfile::power_tail(q("-3"), q("-1"))
        );
        // symmetric under t ↦ 1/t
        let sym = RadialProfile::LogModulated { eta: q("0"), log_scale: 1.0 };
        assert_eq!(sym.inverted(), sym);
    }

    #[test]
    fn tails_of_inverted_profiles() {
        let f = RadialProfile::power_cutoff_inner(q("2"));
        assert_eq!(f.inverted().tail_infinity(), Tail::exact(q("2")));
        assert_eq!(f.inverted().deriv_tail_infinity(), Tail::exact(q("1")));
        assert_eq!(f.inverted().tail_zero(), Tail::Vanishes);
    }

    #[test]
    fn windows_follow_actions() {
        let f = RadialProfile::Indicator1D { lo: 2.0, hi: 3.0, lift: q("1/2") };
        let w = f.dilated(2.0).inverted().power_window().unwrap();
        // f(2/t) = (2/t)^{1/2} on (2/3, 1)
        assert!((w.coef - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(w.exponent, q("-1/2"));
        assert!((w.lo - 2.0 / 3.0).abs() < 1e-15 && w.hi == 1.0);
    }

    #[test]
    fn power_integral_is_stable() {
        let exact = (3f64.powf(0.5) - 2f64.powf(0.5)) / 0.5;
        assert!((ln_power_integral(0.5, 2.0, 3.0).unwrap().exp() - exact).abs() < 1e-14);
        assert!((ln_power_integral(0.0, 1.0, 5.0).unwrap().exp() - 5f64.ln()).abs() < 1e-14);
        assert_eq!(ln_power_integral(0.0, 0.0, 1.0), None);
        assert_eq!(ln_power_integral(-0.5, 1.0, f64::INFINITY).map(|v| v.exp()), Some(2.0));
        // a unit window far out: ∫_n^{n+1} dt = 1
        assert!(ln_power_integral(1.0, 4e15, 4e15 + 1.0).unwrap().abs() < 1e-12);
        // tiny exponents survive: ∫_0^1 t^{k−1} = 1/k
        assert!((ln_power_integral(1e-24, 0.0, 1.0).unwrap() - 1e24f64.ln()).abs() < 1e-12);
    }
}
