//! Numerical corroboration of verdicts: scale-invariance checks for positive verdicts,
//! index walks along witness families for negative ones.

use serde::Serialize;
use thiserror::Error;

use super::norms::{norm_report, NormReport, NormStatus};
use super::{QuadError, QuadratureConfig};
use crate::classifier::{classify, classify_w0, Reason, W0Decision};
use crate::exact::{ParamError, Params, Rational};
use crate::exec::{self, Execution};
use crate::functions::{dilate, RadialProfile, RatioMetric, TestFunction, WitnessError, WitnessFamily, WitnessKind};

/// Dilation factors applied to every verification member, besides `λ = 1`.
pub const DEFAULT_SCALES: [f64; 4] = [0.125, 0.5, 2.0, 8.0];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProbeError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("the classifier does not report an embedding for these parameters")]
    NotEmbedding,
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error("no test-function family makes this ratio grow")]
    NoGrowth,
}

fn bumps() -> [RadialProfile; 4] {
    [
        RadialProfile::smooth_bump(1.0, 0.5),
        RadialProfile::smooth_bump(2.0, 1.0),
        RadialProfile::smooth_bump(0.5, 0.25),
        RadialProfile::smooth_bump(5.0, 2.0),
    ]
}

fn power_tails(params: &Params) -> Vec<RadialProfile> {
    let s = params.space();
    let (sa, sb) = (s.slope_a(), s.slope_b());
    let (lo, hi) = (sa.lesser(&sb), sa.greater(&sb));
    ["1/4", "1/2", "1", "2"]
        .iter()
        .map(|d| {
            let d: Rational = d.parse().expect("literal");
            RadialProfile::power_tail(&lo - &d, &hi + &d)
        })
        .collect()
}

/// Radial members with finite source norms: compact bumps and two-sided power tails.
pub fn default_family(params: &Params) -> Vec<TestFunction> {
    bumps().into_iter().chain(power_tails(params)).map(TestFunction::radial).collect()
}

/// The same profiles times the first spherical harmonic `x₁/|x|`; all have zero spherical mean.
pub fn first_harmonic_family(params: &Params) -> Vec<TestFunction> {
    bumps().into_iter().chain(power_tails(params)).map(TestFunction::first_harmonic).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MemberResult {
    pub member: usize,
    pub lambda: f64,
    pub norms: NormReport,
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub params: Params,
    pub theta: Option<Rational>,
    pub family: Vec<TestFunction>,
    pub per_member: Vec<MemberResult>,
    pub max_ratio: f64,
    pub max_additive_ratio: f64,
    /// `max |ratio(λ) − ratio(1)| / ratio(1)` over members; only meaningful with `θ`.
    pub defect: f64,
    /// Members with a divergent or vanishing norm.
    pub failures: Vec<usize>,
    pub passed: bool,
}

/// Checks a positive verdict on `family` dilated by `scales` (and `λ = 1`).
///
/// With `theta` the multiplicative ratio is used and must not depend on `λ`; without it
/// the additive ratio is reported.
pub fn verify_instance(
    params: &Params,
    theta: Option<&Rational>,
    family: &[TestFunction],
    scales: &[f64],
    cfg: &QuadratureConfig,
    mode: Execution,
) -> Result<VerifyReport, ProbeError> {
    if !classify(params)?.embeds() {
        return Err(ProbeError::NotEmbedding);
    }
    run_verify(params, theta, family, scales, cfg, mode)
}

/// As [`verify_instance`], for the zero-spherical-mean subspace.
pub fn verify_w0_instance(
    params: &Params,
    theta: Option<&Rational>,
    family: &[TestFunction],
    scales: &[f64],
    cfg: &QuadratureConfig,
    mode: Execution,
) -> Result<VerifyReport, ProbeError> {
    if classify_w0(params)?.decision != W0Decision::Embeds {
        return Err(ProbeError::NotEmbedding);
    }
    run_verify(params, theta, family, scales, cfg, mode)
}

fn run_verify(
    params: &Params,
    theta: Option<&Rational>,
    family: &[TestFunction],
    scales: &[f64],
    cfg: &QuadratureConfig,
    mode: Execution,
) -> Result<VerifyReport, ProbeError> {
    let mut lambdas = vec![1.0];
    lambdas.extend(scales.iter().copied().filter(|&l| l != 1.0));
    let jobs: Vec<(usize, f64)> = (0..family.len()).flat_map(|m| lambdas.iter().map(move |&l| (m, l))).collect();
    let results = exec::map(mode, &jobs, |&(m, lambda)| -> Result<MemberResult, ProbeError> {
        let u = dilate(&family[m], lambda).map_err(WitnessError::from)?;
        let norms = norm_report(&u, params, theta, cfg)?;
        let ratio = if theta.is_some() { norms.multiplicative_ratio } else { norms.additive_ratio };
        Ok(MemberResult { member: m, lambda, norms, ratio })
    });
    let per_member = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    let mut failures: Vec<usize> = per_member
        .iter()
        .filter(|r| r.norms.status != NormStatus::Finite || r.ratio.is_none())
        .map(|r| r.member)
        .collect();
    failures.dedup();
    let max_ratio = per_member.iter().filter_map(|r| r.ratio).fold(0.0, f64::max);
    let max_additive_ratio = per_member.iter().filter_map(|r| r.norms.additive_ratio).fold(0.0, f64::max);
    let mut defect: f64 = 0.0;
    for m in 0..family.len() {
        let rows: Vec<&MemberResult> = per_member.iter().filter(|r| r.member == m).collect();
        if let Some(base) = rows.iter().find(|r| r.lambda == 1.0).and_then(|r| r.ratio) {
            for r in &rows {
                if let Some(x) = r.ratio {
                    defect = defect.max((x - base).abs() / base);
                }
            }
        }
    }
    let passed = failures.is_empty() && (theta.is_none() || defect <= cfg.defect_tol);
    Ok(VerifyReport {
        params: params.clone(),
        theta: theta.cloned(),
        family: family.to_vec(),
        per_member,
        max_ratio,
        max_additive_ratio,
        defect,
        failures,
        passed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceEntry {
    pub index: u32,
    /// The family parameter of this member (`n`, `λ` or `R`).
    pub parameter: f64,
    pub ratio: Option<f64>,
    pub norms: NormReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Certificate {
    /// The target norm of member `index` is infinite by the exact exponent test;
    /// `certified` records agreement of the panel cross-check.
    DivergentTarget { index: u32, certified: bool },
    ThresholdCrossed { index: u32, ratio: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FalsifyReport {
    pub params: Params,
    pub reason: Reason,
    pub witness: WitnessFamily,
    pub trace: Vec<TraceEntry>,
    pub certificate: Option<Certificate>,
    /// Whether the ratios are non-decreasing from index 3 on.
    pub monotone_after_prefix: bool,
    pub falsified: bool,
}

fn theta_weight(theta: &Rational) -> f64 {
    let t = theta.to_f64();
    let part = |x: f64| if x == 0.0 { 1.0 } else { x.powf(x) };
    part(t) * part(1.0 - t)
}

fn score(norms: &NormReport, metric: &RatioMetric) -> Option<f64> {
    match metric {
        RatioMetric::Additive => norms.additive_ratio,
        RatioMetric::DilationSup { theta } => norms.ln_multiplicative(theta).map(|l| theta_weight(theta) * l.exp()),
    }
}

fn monotone_from(trace: &[TraceEntry], first: u32) -> bool {
    let tail: Vec<f64> = trace.iter().filter(|e| e.index >= first).filter_map(|e| e.ratio).collect();
    tail.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-9))
}

enum Step {
    Continue,
    Stop(Certificate),
}

/// Evaluates members `1, 2, …` in batches, stopping at the first member that settles the
/// question; `judge` decides per member.
#[allow(clippy::too_many_arguments)]
fn walk<J>(
    kind: &WitnessKind,
    params: &Params,
    theta: Option<&Rational>,
    cap: u32,
    cfg: &QuadratureConfig,
    mode: Execution,
    score: impl Fn(&NormReport) -> Option<f64> + Sync + Send,
    judge: J,
) -> Result<(Vec<TraceEntry>, Option<Certificate>), ProbeError>
where
    J: Fn(&TraceEntry) -> Step,
{
    let batch = if mode == Execution::Parallel { 8 } else { 1 };
    let mut trace = Vec::new();
    let mut next = 1;
    while next <= cap {
        let ids: Vec<u32> = (next..=cap.min(next + batch - 1)).collect();
        let entries = exec::map(mode, &ids, |&k| -> Result<TraceEntry, ProbeError> {
            let (parameter, u) = kind.member(k)?;
            let norms = norm_report(&u, params, theta, cfg)?;
            Ok(TraceEntry { index: k, parameter, ratio: score(&norms), norms })
        });
        for e in entries {
            let e = e?;
            let step = judge(&e);
            trace.push(e);
            if let Step::Stop(c) = step {
                return Ok((trace, Some(c)));
            }
        }
        next += batch;
    }
    Ok((trace, None))
}

/// Walks the witness family until its ratio exceeds the divergence threshold or a member
/// has a certified infinite target norm. Reaching the index cap leaves the verdict unconfirmed.
pub fn falsify_instance(
    family: &WitnessFamily,
    cfg: &QuadratureConfig,
    mode: Execution,
) -> Result<FalsifyReport, ProbeError> {
    let params = &family.params;
    let theta = match &family.metric {
        RatioMetric::DilationSup { theta } => Some(theta.clone()),
        RatioMetric::Additive => None,
    };
    let cap = if family.is_single() { 1 } else { cfg.index_cap };
    let threshold = cfg.divergence_threshold;
    let (trace, certificate) = walk(
        &family.kind,
        params,
        theta.as_ref(),
        cap,
        cfg,
        mode,
        |n| score(n, &family.metric),
        |e| match e.norms.status {
            NormStatus::DivergentTarget => Step::Stop(Certificate::DivergentTarget {
                index: e.index,
                certified: e.norms.norm_target.divergence.is_some_and(|d| d.panel_pattern),
            }),
            _ => match e.ratio {
                Some(x) if x > threshold => Step::Stop(Certificate::ThresholdCrossed { index: e.index, ratio: x }),
                _ => Step::Continue,
            },
        },
    )?;
    let monotone_after_prefix = monotone_from(&trace, 3);
    let sources_finite = trace.iter().all(|e| e.norms.status != NormStatus::DivergentSource);
    let falsified = certificate.is_some() && monotone_after_prefix && sources_finite;
    Ok(FalsifyReport {
        params: params.clone(),
        reason: family.reason,
        witness: family.clone(),
        trace,
        certificate,
        monotone_after_prefix,
        falsified,
    })
}

/// A family along which `||u||_{c,r} / (||∇u||_{b,p}^θ ||u||_{a,q}^{1−θ})` grows like
/// `2^{rate · k}` (up to constants).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplicativeFamily {
    pub kind: WitnessKind,
    pub rate: f64,
}

fn log_options(params: &Params, theta: &Rational) -> Vec<(WitnessKind, Rational)> {
    let s = params.space();
    let (sa, sb) = (s.slope_a(), s.slope_b());
    if sa != sb || params.c != s.c0() {
        return Vec::new();
    }
    // t^{−η} bump(λ ln t): every κ vanishes, so the norms are powers of λ
    let one = Rational::one();
    let inv = |x: &Rational| x.recip().expect("positive exponent");
    let g_inf = &one - inv(&params.p);
    let g_zero = if sa.is_zero() { g_inf.clone() } else { -inv(&params.p) };
    let base = -inv(&params.r) + (&one - theta) * inv(&params.q);
    let e_zero = &base - theta * &g_zero;
    let e_inf = &base - theta * &g_inf;
    vec![
        (WitnessKind::LogDilation { eta: sa.clone(), shrink: true }, -e_zero),
        (WitnessKind::LogDilation { eta: sa, shrink: false }, e_inf),
    ]
}

fn fastest(options: Vec<(WitnessKind, Rational)>) -> Result<MultiplicativeFamily, ProbeError> {
    options
        .into_iter()
        .filter(|(_, r)| r.is_positive())
        .max_by(|x, y| x.1.cmp(&y.1))
        .map(|(kind, rate)| MultiplicativeFamily { kind, rate: rate.to_f64() })
        .ok_or(ProbeError::NoGrowth)
}

impl MultiplicativeFamily {
    /// The fastest-growing family among translations, plain dilations and (for equal
    /// slopes with `c = c⁰`) logarithmic dilations of `t^{−η}`.
    pub fn choose(params: &Params, theta: &Rational) -> Result<MultiplicativeFamily, ProbeError> {
        let s = params.space();
        let th1 = Rational::one() - theta;
        let (sa, sb) = (s.slope_a(), s.slope_b());
        let sc = (&params.c + params.dim()) / &params.r;
        let mut options: Vec<(WitnessKind, Rational)> = Vec::new();

        let tau = &params.c / &params.r - theta * &params.b / &params.p - &th1 * &params.a / &params.q;
        options.push((WitnessKind::Translation { profile: RadialProfile::smooth_bump(0.0, 1.0) }, tau));

        // u(λx): ratio ∝ λ^{δ}
        let delta = -&sc + theta * &sb + &th1 * &sa;
        if !delta.is_zero() {
            let step = if delta.is_positive() { 1 } else { -1 };
            let function = TestFunction::radial(RadialProfile::smooth_bump(2.0, 1.0));
            options.push((WitnessKind::Dilation { function, step }, delta.abs()));
        }

        options.extend(log_options(params, theta));
        fastest(options)
    }

    /// The faster of the two logarithmic dilation families (`λ → 0` or `λ → ∞`).
    pub fn log_modulated(params: &Params, theta: &Rational) -> Result<MultiplicativeFamily, ProbeError> {
        fastest(log_options(params, theta))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplicativeReport {
    pub params: Params,
    pub theta: Rational,
    pub family: MultiplicativeFamily,
    pub trace: Vec<TraceEntry>,
    pub certificate: Option<Certificate>,
    pub falsified: bool,
}

/// Shows that the multiplicative inequality with exponent `theta` fails by driving its
/// ratio past the divergence threshold along the fastest family.
pub fn falsify_multiplicative(
    params: &Params,
    theta: &Rational,
    cfg: &QuadratureConfig,
    mode: Execution,
) -> Result<MultiplicativeReport, ProbeError> {
    params.validate_full()?;
    let family = MultiplicativeFamily::choose(params, theta)?;
    falsify_multiplicative_along(params, theta, family, cfg, mode)
}

/// As [`falsify_multiplicative`], along a given family.
pub fn falsify_multiplicative_along(
    params: &Params,
    theta: &Rational,
    family: MultiplicativeFamily,
    cfg: &QuadratureConfig,
    mode: Execution,
) -> Result<MultiplicativeReport, ProbeError> {
    params.validate_full()?;
    let threshold = cfg.divergence_threshold;
    let (trace, certificate) = walk(
        &family.kind,
        params,
        Some(theta),
        cfg.multiplicative_index_cap,
        cfg,
        mode,
        |n| n.multiplicative_ratio,
        |e| match e.norms.status {
            NormStatus::DivergentTarget => Step::Stop(Certificate::DivergentTarget {
                index: e.index,
                certified: e.norms.norm_target.divergence.is_some_and(|d| d.panel_pattern),
            }),
            _ => match e.ratio {
                Some(x) if x > threshold => Step::Stop(Certificate::ThresholdCrossed { index: e.index, ratio: x }),
                _ => Step::Continue,
            },
        },
    )?;
    let falsified = certificate.is_some();
    Ok(MultiplicativeReport { params: params.clone(), theta: theta.clone(), family, trace, certificate, falsified })
}
