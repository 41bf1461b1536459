mod common;

use std::f64::consts::PI;

use ckn::classifier::Reason;
use ckn::exact::{q, Params, Rational};
use ckn::exec::Execution;
use ckn::functions::{dilate, kelvin_function, witness_for, RadialProfile, TestFunction, WitnessKind};
use ckn::quadrature::{
    falsify_instance, norm_report, surface_area, weighted_norm, weighted_norm_fn, weighted_norm_gradient, NormStatus,
    QuadratureConfig,
};
use common::small_rational;
use proptest::prelude::*;

const SCALES: [f64; 4] = [0.125, 0.5, 2.0, 8.0];

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs()
}

#[test]
fn exponential_examples() {
    let v = weighted_norm_fn(|t| (-t).exp(), 0.0, 1.0, 1, &[], &cfg()).unwrap();
    assert!(rel(v, 2.0) < 1e-10);
    let v = weighted_norm_fn(|t| t * (-t).exp(), -1.0, 2.0, 3, &[], &cfg()).unwrap();
    assert!(rel(v, (1.5 * PI).sqrt()) < 1e-10);
}

/// A power tail integrable against `|x|^d |·|^s` (value) in dimension `n`.
fn tail_for_value(d: &Rational, s: &Rational, n: u32, lo_gap: &Rational, hi_gap: &Rational) -> RadialProfile {
    let crit = (d + Rational::from(n)) / s;
    RadialProfile::power_tail(&crit - lo_gap, &crit + hi_gap)
}

/// A power tail whose derivative is integrable against `|x|^b |·|^p`.
fn tail_for_gradient(b: &Rational, p: &Rational, n: u32, lo_gap: &Rational, hi_gap: &Rational) -> RadialProfile {
    let crit = (b + Rational::from(n)) / p - Rational::one();
    RadialProfile::power_tail(&crit - lo_gap, &crit + hi_gap)
}

fn gap() -> impl Strategy<Value = Rational> {
    (1i64..=8).prop_map(|k| Rational::new(k, 4))
}

fn exponent() -> impl Strategy<Value = Rational> {
    (4i64..=24).prop_map(|k| Rational::new(k, 4))
}

/// Bumps supported away from the origin.
fn bump() -> impl Strategy<Value = RadialProfile> {
    (1i64..=20, 1i64..=8).prop_map(|(c, w)| RadialProfile::smooth_bump((c + w) as f64 / 4.0, w as f64 / 4.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn value_norms_obey_the_scaling_law(
        n in 1u32..=5, d in small_rational(-3, 3), s in exponent(),
        g0 in gap(), g1 in gap(), b in bump(), harmonic in any::<bool>(),
    ) {
        let tail = tail_for_value(&d, &s, n, &g0, &g1);
        for f in [tail, b] {
            let u = if harmonic && n >= 2 { TestFunction::first_harmonic(f) } else { TestFunction::radial(f) };
            let base = weighted_norm(&u, &d, &s, n, &cfg()).unwrap();
            prop_assert!(base.is_finite());
            let k = (d.to_f64() + n as f64) / s.to_f64();
            for lambda in SCALES {
                let scaled = weighted_norm(&dilate(&u, lambda).unwrap(), &d, &s, n, &cfg()).unwrap();
                prop_assert!(rel(scaled.value, lambda.powf(-k) * base.value) < 1e-7, "λ = {lambda}");
            }
        }
    }

    #[test]
    fn gradient_norms_obey_the_scaling_law(
        n in 1u32..=5, b in small_rational(-3, 3), p in exponent(),
        g0 in gap(), g1 in gap(), bp in bump(), harmonic in any::<bool>(),
    ) {
        let tail = tail_for_gradient(&b, &p, n, &g0, &g1);
        let k = 1.0 - (b.to_f64() + n as f64) / p.to_f64();
        for f in [tail, bp] {
            let u = if harmonic && n >= 2 { TestFunction::first_harmonic(f) } else { TestFunction::radial(f) };
            let base = weighted_norm_gradient(&u, &b, &p, n, &cfg()).unwrap();
            if !base.is_finite() {
                // first harmonics of profiles that do not vanish at the origin
                prop_assert!(harmonic);
                continue;
            }
            for lambda in SCALES {
                let scaled = weighted_norm_gradient(&dilate(&u, lambda).unwrap(), &b, &p, n, &cfg()).unwrap();
                prop_assert!(rel(scaled.value, lambda.powf(k) * base.value) < 1e-7, "λ = {lambda}");
            }
        }
    }

    #[test]
    fn kelvin_transform_is_an_isometry(
        n in 1u32..=5, d in small_rational(-3, 3), s in exponent(), pe in exponent(),
        g0 in gap(), g1 in gap(), bp in bump(), harmonic in any::<bool>(),
    ) {
        let two_n = Rational::from(2 * n);
        let d_image = -&two_n - &d;
        // gradient weight chosen so the same tail is admissible for both norms
        let bw = (&d + Rational::from(n)) / &s * &pe + &pe - Rational::from(n);
        let b_image = Rational::from_int(2) * &pe - &two_n - &bw;
        let tail = tail_for_value(&d, &s, n, &g0, &g1);
        for f in [tail, bp] {
            let u = if harmonic && n >= 2 { TestFunction::first_harmonic(f) } else { TestFunction::radial(f) };
            let ku = kelvin_function(&u).unwrap();
            let v = weighted_norm(&u, &d, &s, n, &cfg()).unwrap();
            let kv = weighted_norm(&ku, &d_image, &s, n, &cfg()).unwrap();
            prop_assert!(rel(kv.value, v.value) < 1e-7);
            let g = weighted_norm_gradient(&u, &bw, &pe, n, &cfg()).unwrap();
            let kg = weighted_norm_gradient(&ku, &b_image, &pe, n, &cfg()).unwrap();
            prop_assert_eq!(g.is_finite(), kg.is_finite());
            if g.is_finite() {
                prop_assert!(rel(kg.value, g.value) < 1e-7);
            }
        }
    }

    #[test]
    fn harmonics_of_constant_profiles_reduce_to_one_dimension(
        n in 2u32..=5, b in small_rational(-3, 3), p in exponent(), lo in 1i64..=8, len in 1i64..=8,
    ) {
        let (lo, hi) = (lo as f64 / 4.0, (lo + len) as f64 / 4.0);
        let u = TestFunction::first_harmonic(RadialProfile::Indicator1D { lo, hi, lift: q("0") });
        let g = weighted_norm_gradient(&u, &b, &p, n, &cfg()).unwrap();
        let pf = p.to_f64();
        // |∇u| = t^{-1} (1 − σ₁²)^{1/2}; angular factor by direct quadrature over the polar angle
        let m = 20000;
        let h = PI / m as f64;
        let angular: f64 = surface_area(n - 1)
            * (0..m).map(|i| {
                let phi = (i as f64 + 0.5) * h;
                phi.sin().powf(pf + n as f64 - 2.0) * h
            }).sum::<f64>();
        let k = b.to_f64() + n as f64 - pf;
        let radial = if k == 0.0 { (hi / lo).ln() } else { (hi.powf(k) - lo.powf(k)) / k };
        prop_assert!(rel(g.value, (angular * radial).powf(1.0 / pf)) < 1e-7);
    }
}

#[test]
fn divergent_norms_are_reported_with_their_end() {
    let p = Params::parse(3, "2", "2", "2", "0", "0", "-3");
    let u = TestFunction::radial(RadialProfile::power_cutoff_inner(q("0")));
    let r = norm_report(&u, &p, None, &cfg()).unwrap();
    assert_eq!(r.status, NormStatus::DivergentTarget);
    assert!(r.additive_ratio.is_none());
    let d = r.norm_target.divergence.unwrap();
    assert!(d.panel_pattern);

    // a source that is infinite at infinity
    let v = TestFunction::radial(RadialProfile::power_cutoff_outer(q("1")));
    let r = norm_report(&v, &p, None, &cfg()).unwrap();
    assert_eq!(r.status, NormStatus::DivergentSource);
    assert!(r.norm_source_q.divergence.is_some());
}

/// Norms of the Hardy primitives `F_n(t) = ∫_1^{min(t,n)} τ^{−49/50} dτ` in dimension 3 for
/// `(p, q, r, a, b, c) = (2, 2, 1, −4, −26/25, −151/50)`, by closed forms and a plain
/// midpoint rule in `ln t`.
fn hardy_oracle(n: f64) -> (f64, f64, f64) {
    let area = 4.0 * PI;
    let f = |t: f64| 50.0 * (t.min(n).powf(0.02) - 1.0);
    let ln_n = n.ln();
    // ∫_1^n t^{−51/50} F + F(n) ∫_n^∞ t^{−51/50}
    let target = area * (50.0 * (ln_n - 50.0 * (1.0 - n.powf(-0.02))) + f(n) * 50.0 * n.powf(-0.02));
    let m = 200_000;
    let h = ln_n / m as f64;
    let inner: f64 = (0..m)
        .map(|i| {
            let t = ((i as f64 + 0.5) * h).exp();
            t.powi(-1) * f(t).powi(2) * h
        })
        .sum();
    let source = (area * (inner + f(n).powi(2) / n)).sqrt();
    let grad = (area * ln_n).sqrt();
    (target, source, grad)
}

#[test]
fn hardy_witness_matches_an_independent_oracle() {
    let p = Params::parse(3, "2", "2", "1", "-4", "-26/25", "-151/50");
    let w = witness_for(Reason::EndpointC1SmallR, &p).unwrap();
    match &w.kind {
        WitnessKind::HardyPrimitive { beta, kelvin, decay } => {
            assert_eq!(*beta, q("49/50"));
            assert!(!kelvin && !decay);
        }
        k => panic!("unexpected family {k:?}"),
    }
    for k in [1, 3, 6, 10] {
        let (n, u) = w.member(k).unwrap();
        let r = norm_report(&u, &p, None, &cfg()).unwrap();
        let (t, a, g) = hardy_oracle(n);
        assert!(rel(r.norm_target.value, t) < 1e-8, "k = {k}");
        assert!(rel(r.norm_source_q.value, a) < 1e-6, "k = {k}");
        assert!(rel(r.norm_grad.value, g) < 1e-8, "k = {k}");
    }
    let report = falsify_instance(&w, &cfg(), Execution::Parallel).unwrap();
    assert!(report.falsified);
    assert!(report.monotone_after_prefix);
    let ratios: Vec<f64> = report.trace.iter().map(|e| e.ratio.unwrap()).collect();
    assert!(ratios.windows(2).all(|x| x[1] > x[0]));
    assert!(*ratios.last().unwrap() > 1e3);
}

#[test]
fn walks_are_identical_in_both_execution_modes() {
    let p = Params::parse(2, "1", "2", "1", "-2", "-1", "-2");
    let w = witness_for(Reason::EtaZeroSmallR, &p).unwrap();
    let a = falsify_instance(&w, &cfg(), Execution::Sequential).unwrap();
    let b = falsify_instance(&w, &cfg(), Execution::Parallel).unwrap();
    assert_eq!(a.trace, b.trace);
}
