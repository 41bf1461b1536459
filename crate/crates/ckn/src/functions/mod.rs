//! Evaluable test functions on `ℝ^N ∖ {0}` and the counterexample families used
//! against each failing condition.

mod profile;
mod witness;

pub use profile::{
    bump, bump_deriv, ln_power_integral, smooth_step, smooth_step_deriv, zeta, zeta_deriv, PowerWindow, RadialProfile,
    Scalar, Tail,
};
pub use witness::{witness_for, RatioMetric, WitnessError, WitnessFamily, WitnessKind};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FunctionError {
    #[error("dilation factor must be positive and finite, got {0}")]
    BadScale(f64),
    #[error("translation offset must be positive and exceed the support radius")]
    BadOffset,
    #[error("{0} is not supported for translated functions")]
    Translated(&'static str),
}

/// Angular structure of a test function `u(x)` built from a radial profile `f`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Angular {
    /// `u(x) = f(|x|)`
    Radial,
    /// `u(x) = f(|x|) x₁/|x|`, which has zero spherical mean.
    FirstHarmonic,
    /// `u(x) = f(|x − x₀|)` with `|x₀| = offset`.
    TranslatedRadial { offset: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub radial: RadialProfile,
    pub angular: Angular,
}

impl TestFunction {
    pub fn radial(profile: RadialProfile) -> Self {
        TestFunction { radial: profile, angular: Angular::Radial }
    }

    pub fn first_harmonic(profile: RadialProfile) -> Self {
        TestFunction { radial: profile, angular: Angular::FirstHarmonic }
    }

    /// A radial profile recentred at distance `offset` from the origin. The profile's
    /// support must lie in a ball of radius below `offset`.
    pub fn translated(profile: RadialProfile, offset: f64) -> Result<Self, FunctionError> {
        let (_, hi) = profile.support();
        if !(offset > 0.0 && offset.is_finite() && hi < offset) {
            return Err(FunctionError::BadOffset);
        }
        Ok(TestFunction { radial: profile, angular: Angular::TranslatedRadial { offset } })
    }
}

/// `x ↦ u(λx)`.
pub fn dilate(u: &TestFunction, lambda: f64) -> Result<TestFunction, FunctionError> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(FunctionError::BadScale(lambda));
    }
    let angular = match u.angular {
        Angular::TranslatedRadial { offset } => Angular::TranslatedRadial { offset: offset / lambda },
        ref a => a.clone(),
    };
    Ok(TestFunction { radial: u.radial.dilated(lambda), angular })
}

/// `x ↦ u(x/|x|²)`: profile `t ↦ f(1/t)`, same angular part.
pub fn kelvin_function(u: &TestFunction) -> Result<TestFunction, FunctionError> {
    match u.angular {
        Angular::TranslatedRadial { .. } => Err(FunctionError::Translated("the Kelvin transform")),
        ref a => Ok(TestFunction { radial: u.radial.inverted(), angular: a.clone() }),
    }
}

/// Average of `u` over spheres `|x| = t`, as a profile.
pub fn spherical_mean(u: &TestFunction) -> Result<RadialProfile, FunctionError> {
    match u.angular {
        Angular::Radial => Ok(u.radial.clone()),
        Angular::FirstHarmonic => Ok(RadialProfile::Zero),
        Angular::TranslatedRadial { .. } => Err(FunctionError::Translated("the spherical mean")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    #[test]
    fn spherical_means() {
        let f = RadialProfile::power_tail(q("1/2"), q("2"));
        assert_eq!(spherical_mean(&TestFunction::radial(f.clone())).unwrap(), f);
        assert!(spherical_mean(&TestFunction::first_harmonic(f.clone())).unwrap().is_zero());
        let scaled = dilate(&TestFunction::radial(f.clone()), 3.0).unwrap();
        assert_eq!(spherical_mean(&scaled).unwrap(), f.dilated(3.0));
        let moved = TestFunction::translated(RadialProfile::smooth_bump(0.0, 1.0), 4.0).unwrap();
        assert!(spherical_mean(&moved).is_err());
        assert!(kelvin_function(&moved).is_err());
    }

    #[test]
    fn dilation_rules() {
        let u = TestFunction::radial(RadialProfile::power_cutoff_inner(q("1")));
        assert_eq!(dilate(&u, 1.0).unwrap(), u);
        assert!(dilate(&u, 0.0).is_err());
        assert!(dilate(&u, -2.0).is_err());
        // cutoff support rescales to t ≤ 1/λ
        let v = dilate(&u, 4.0).unwrap();
        assert_eq!(v.radial.support(), (0.0, 0.25));
        let moved = TestFunction::translated(RadialProfile::smooth_bump(0.0, 1.0), 4.0).unwrap();
        let m = dilate(&moved, 2.0).unwrap();
        assert_eq!(m.angular, Angular::TranslatedRadial { offset: 2.0 });
        let a = dilate(&dilate(&u, 2.0).unwrap(), 3.0).unwrap();
        let b = dilate(&u, 6.0).unwrap();
        for &t in &[0.01, 0.1, 0.12, 0.15] {
            assert!((a.radial.value(t) - b.radial.value(t)).abs() <= 1e-13 * b.radial.value(t).abs().max(1.0));
        }
    }

    #[test]
    fn kelvin_is_an_involution() {
        let u = TestFunction::first_harmonic(RadialProfile::smooth_bump(2.0, 1.0));
        let back = kelvin_function(&kelvin_function(&u).unwrap()).unwrap();
        assert_eq!(back, u);
        let w = TestFunction::radial(RadialProfile::power_cutoff_outer(q("3")).dilated(2.0));
        let back = kelvin_function(&kelvin_function(&w).unwrap()).unwrap();
        for &t in &[0.3, 0.5, 0.9, 7.0] {
            assert!((back.radial.value(t) - w.radial.value(t)).abs() < 1e-14);
        }
    }

    #[test]
    fn descriptors_round_trip_through_json() {
        let u = TestFunction::radial(RadialProfile::power_tail(q("-1/3"), q("5/2")).dilated(0.125));
        let s = serde_json::to_string(&u).unwrap();
        assert!(s.contains("\"kind\":\"PowerTail\""));
        let back: TestFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(back, u);
    }
}
