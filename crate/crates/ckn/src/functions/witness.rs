//! Counterexample sequences, one construction per failure reason.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{dilate, kelvin_function, FunctionError, RadialProfile, TestFunction};
use crate::classifier::{classify, Reason};
use crate::exact::{kelvin_params, ParamError, Params, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WitnessError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("the embedding holds for these parameters; there is nothing to falsify")]
    Embeds,
    #[error("requested a witness for {requested:?} but the parameters fail with {actual:?}")]
    Mismatch { requested: Reason, actual: Reason },
    #[error(transparent)]
    Function(#[from] FunctionError),
}

/// How a witness member is scored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum RatioMetric {
    /// `||u||_{c,r} / (||u||_{a,q} + ||∇u||_{b,p})`
    Additive,
    /// Supremum of the additive ratio over all dilations of `u`, which equals
    /// `θ^θ (1−θ)^{1−θ} ||u||_{c,r} / (||u||_{a,q}^{1−θ} ||∇u||_{b,p}^θ)`.
    DilationSup { theta: Rational },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum WitnessKind {
    /// A single function with infinite target norm and finite source norms.
    Single { function: TestFunction },
    /// `|x|^{lift} g_n(|x|)` with `g_n = χ_{(n, n+1)}` (`far`) or `t^{1/n − 1/r} χ_{(0,1)}`, `n = 4^k`.
    LiftedWindow { lift: Rational, r: Rational, far: bool, kelvin: bool },
    /// Primitives of `τ^{−β} χ_{(1,n)}`, `n = 4^k`, optionally damped by `t^{−1/ln(n+2)}`.
    HardyPrimitive { beta: Rational, kelvin: bool, decay: bool },
    /// `t^{−η} bump(λ_k ln t)` with `λ_k = 2^{−k}` (`shrink`) or `2^k`.
    LogDilation { eta: Rational, shrink: bool },
    /// The profile recentred at distance `2^k`.
    Translation { profile: RadialProfile },
    /// `u(2^{step·k} ·)`.
    Dilation { function: TestFunction, step: i32 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessFamily {
    pub reason: Reason,
    pub params: Params,
    pub kind: WitnessKind,
    pub metric: RatioMetric,
}

fn pow2(e: i64) -> f64 {
    2f64.powi(e as i32)
}

fn four_pow(k: u32) -> BigInt {
    BigInt::from(4u32).pow(k)
}

impl WitnessKind {
    /// Member `k ≥ 1` together with the family parameter it uses (`n`, `λ` or `R`).
    pub fn member(&self, k: u32) -> Result<(f64, TestFunction), WitnessError> {
        let ki = k as i64;
        Ok(match self {
            WitnessKind::Single { function } => (1.0, function.clone()),
            WitnessKind::LiftedWindow { lift, r, far, kelvin } => {
                let n = pow2(2 * ki);
                let profile = if *far {
                    RadialProfile::Indicator1D { lo: n, hi: n + 1.0, lift: lift.clone() }
                } else {
                    let eps: Rational = format!("1/{}", four_pow(k)).parse().expect("power of four");
                    RadialProfile::PowerOnUnit { eps, r: r.clone(), lift: lift.clone() }
                };
                (n, oriented(profile, *kelvin)?)
            }
            WitnessKind::HardyPrimitive { beta, kelvin, decay } => {
                let n = pow2(2 * ki);
                let decay = if *decay { 1.0 / (n + 2.0).ln() } else { 0.0 };
                let profile = RadialProfile::HardyPrimitive { beta: beta.clone(), upper: n, decay };
                (n, oriented(profile, *kelvin)?)
            }
            WitnessKind::LogDilation { eta, shrink } => {
                let lambda = if *shrink { pow2(-ki) } else { pow2(ki) };
                (lambda, TestFunction::radial(RadialProfile::LogModulated { eta: eta.clone(), log_scale: lambda }))
            }
            WitnessKind::Translation { profile } => {
                let offset = pow2(ki);
                (offset, TestFunction::translated(profile.clone(), offset)?)
            }
            WitnessKind::Dilation { function, step } => {
                let lambda = pow2(*step as i64 * ki);
                (lambda, dilate(function, lambda)?)
            }
        })
    }
}

impl WitnessFamily {
    pub fn member(&self, k: u32) -> Result<(f64, TestFunction), WitnessError> {
        self.kind.member(k)
    }

    pub fn is_single(&self) -> bool {
        matches!(self.kind, WitnessKind::Single { .. })
    }
}

fn oriented(profile: RadialProfile, kelvin: bool) -> Result<TestFunction, FunctionError> {
    let u = TestFunction::radial(profile);
    if kelvin {
        kelvin_function(&u)
    } else {
        Ok(u)
    }
}

/// Unit bump centred at the origin, used for translation families.
fn centred_bump() -> RadialProfile {
    RadialProfile::smooth_bump(0.0, 1.0)
}

/// Dilation step making `y^{rate}` grow by at least one bit per index, where `y = 2^{step·k·slope}`.
fn dilation_step(slope: &Rational, rate: &Rational) -> i32 {
    let bits = (slope * rate).abs().to_f64();
    (1.0 / bits).ceil().clamp(1.0, 24.0) as i32
}

/// The counterexample family matching `reason`, which must be the classifier's reason for `params`.
pub fn witness_for(reason: Reason, params: &Params) -> Result<WitnessFamily, WitnessError> {
    let verdict = classify(params)?;
    let actual = verdict.reason.ok_or(WitnessError::Embeds)?;
    if actual != reason {
        return Err(WitnessError::Mismatch { requested: reason, actual });
    }
    let s = params.space();
    let n = params.dim();
    let (sa, sb) = (s.slope_a(), s.slope_b());
    let sc = (&params.c + &n) / &params.r;
    let theta = verdict.derived.theta_c.clone();
    let unit = |t: &Rational| !t.is_negative() && *t <= Rational::one();
    let sup_metric = match &theta {
        Some(t) if unit(t) => RatioMetric::DilationSup { theta: t.clone() },
        _ => RatioMetric::Additive,
    };
    let family = |kind, metric| Ok(WitnessFamily { reason, params: params.clone(), kind, metric });

    match reason {
        Reason::COutsideHull => {
            let profile = if params.c < verdict.derived.c0.lesser(&verdict.derived.c1) {
                RadialProfile::power_cutoff_inner(sc)
            } else {
                RadialProfile::power_cutoff_outer(sc)
            };
            family(WitnessKind::Single { function: TestFunction::radial(profile) }, RatioMetric::Additive)
        }
        Reason::COutsideOppositeSideWindow => {
            let zeta = TestFunction::radial(RadialProfile::power_cutoff_inner(Rational::zero()));
            let function = if (&params.a + &n).is_positive() { zeta } else { kelvin_function(&zeta)? };
            family(WitnessKind::Single { function }, RatioMetric::Additive)
        }
        Reason::EndpointC0WrongR => {
            let far = params.r > params.q;
            let kelvin = !far && sb < sa;
            let built = if kelvin { kelvin_params(params) } else { params.clone() };
            let lift = params.r.recip().expect("r > 0") - built.space().slope_a();
            family(WitnessKind::LiftedWindow { lift, r: params.r.clone(), far, kelvin }, sup_metric)
        }
        Reason::EndpointC1SmallR => {
            let minus_n = -&n;
            let kelvin = params.a > minus_n || (params.a == minus_n && sb.is_positive());
            let built = if kelvin { kelvin_params(params) } else { params.clone() };
            let beta = (&built.b + &n) / &built.p;
            let decay = built.a == minus_n;
            family(WitnessKind::HardyPrimitive { beta, kelvin, decay }, sup_metric)
        }
        Reason::EqualSlopesSmallR => {
            family(WitnessKind::LogDilation { eta: sa, shrink: true }, RatioMetric::Additive)
        }
        Reason::EtaZeroSmallR => {
            family(WitnessKind::LogDilation { eta: Rational::zero(), shrink: true }, RatioMetric::Additive)
        }
        Reason::ThetaConditionFails => family(WitnessKind::Translation { profile: centred_bump() }, sup_metric),
        Reason::ROutOfRange => {
            let bump = TestFunction::radial(RadialProfile::smooth_bump(2.0, 1.0));
            match &theta {
                Some(t) if unit(t) => family(WitnessKind::Translation { profile: centred_bump() }, sup_metric),
                Some(t) => {
                    // additive ratio ∝ y^θ/(A + yG) with y = λ^{sb − sa}: send y to 0 or ∞
                    let slope = &sb - &sa;
                    let over = *t > Rational::one();
                    let rate = if over { t - Rational::one() } else { -t };
                    let sign = if over == slope.is_positive() { 1 } else { -1 };
                    let step = sign * dilation_step(&slope, &rate);
                    family(WitnessKind::Dilation { function: bump, step }, RatioMetric::Additive)
                }
                None if params.c != verdict.derived.c0 => {
                    // additive ratio ∝ λ^{sa − sc}
                    let gap = &sc - &sa;
                    let sign = if gap.is_positive() { -1 } else { 1 };
                    let step = sign * dilation_step(&gap, &Rational::one());
                    family(WitnessKind::Dilation { function: bump, step }, RatioMetric::Additive)
                }
                None => family(WitnessKind::Translation { profile: centred_bump() }, RatioMetric::Additive),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use crate::functions::Angular;

    #[test]
    fn hull_witness_is_the_cutoff_power() {
        let p = Params::parse(3, "2", "2", "2", "0", "0", "-3");
        let w = witness_for(Reason::COutsideHull, &p).unwrap();
        let (_, u) = w.member(1).unwrap();
        assert_eq!(u.radial, RadialProfile::power_cutoff_inner(q("0")));
        assert!(w.is_single());
        let above = witness_for(Reason::COutsideHull, &p.with_c(q("1"))).unwrap();
        assert_eq!(above.member(3).unwrap().1.radial, RadialProfile::power_cutoff_outer(q("2")));
    }

    #[test]
    fn mismatched_tag_is_rejected() {
        let p = Params::parse(3, "2", "2", "2", "0", "0", "-3");
        assert_eq!(
            witness_for(Reason::ROutOfRange, &p),
            Err(WitnessError::Mismatch { requested: Reason::ROutOfRange, actual: Reason::COutsideHull })
        );
        assert_eq!(witness_for(Reason::COutsideHull, &p.with_c(q("-1"))), Err(WitnessError::Embeds));
    }

    #[test]
    fn window_family_for_the_c0_endpoint() {
        let p = Params::parse(3, "2", "2", "4", "0", "0", "3");
        let w = witness_for(Reason::EndpointC0WrongR, &p).unwrap();
        assert_eq!(w.metric, RatioMetric::DilationSup { theta: q("0") });
        let (n, u) = w.member(2).unwrap();
        assert_eq!(n, 16.0);
        // lift 1/r − (a+N)/q = 1/4 − 3/2
        assert_eq!(u.radial, RadialProfile::Indicator1D { lo: 16.0, hi: 17.0, lift: q("-5/4") });
    }

    #[test]
    fn small_r_window_uses_exact_epsilons() {
        let p = Params::parse(3, "2", "4", "2", "0", "0", "-3/2");
        let w = witness_for(Reason::EndpointC0WrongR, &p).unwrap();
        let (_, u) = w.member(40).unwrap();
        match u.radial {
            RadialProfile::Inverted { inner } => match *inner {
                RadialProfile::PowerOnUnit { eps, .. } => assert_eq!(eps, q("1/1208925819614629174706176")),
                other => panic!("unexpected {other:?}"),
            },
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn log_and_translation_schedules() {
        let p = Params::parse(2, "2", "2", "1", "-2", "0", "-2");
        let w = witness_for(Reason::EqualSlopesSmallR, &p).unwrap();
        assert_eq!(w.member(3).unwrap().0, 0.125);
        let p = Params::parse(3, "2", "2", "7", "0", "0", "7");
        let w = witness_for(Reason::ROutOfRange, &p).unwrap();
        let (r, u) = w.member(5).unwrap();
        assert_eq!(r, 32.0);
        assert_eq!(u.angular, Angular::TranslatedRadial { offset: 32.0 });
    }

    #[test]
    fn hardy_family_orientation() {
        let p = Params::parse(3, "2", "2", "1", "-4", "-26/25", "-151/50");
        let w = witness_for(Reason::EndpointC1SmallR, &p).unwrap();
        assert_eq!(w.kind, WitnessKind::HardyPrimitive { beta: q("49/50"), kelvin: false, decay: false });
        let p = Params::parse(3, "3", "2", "2", "0", "1", "-7/3");
        let w = witness_for(Reason::EndpointC1SmallR, &p).unwrap();
        assert!(matches!(w.kind, WitnessKind::HardyPrimitive { kelvin: true, decay: false, .. }));
    }
}
