//! Weights with several point singularities plus a separate power at infinity.
//!
//! Near each singularity the weight behaves like `|x − x_i|^{a_i}` (resp. `b_i`, `c_i`),
//! and like `|x|^{a_∞}` at infinity. The embedding holds when every `c_i` is above the
//! lower end of the local admissible set and `c_∞` is below the upper end of the one at
//! infinity. Empty local sets are handled by relaxing the source weights, which yields
//! conditions that are sufficient but possibly not optimal.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{admissible_set, classify, AdmissibleSet, Decision, Reason};
use crate::exact::{ParamError, Params, Rational, SpaceParams};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharedExponents {
    pub n: u32,
    pub p: Rational,
    pub q: Rational,
    pub r: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightTriple {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Singularity {
    pub location: u32,
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiWeightSpec {
    pub shared: SharedExponents,
    pub singularities: Vec<Singularity>,
    pub infinity: WeightTriple,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SiteRole {
    Singularity { location: u32 },
    Infinity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiteOutcome {
    pub role: SiteRole,
    pub c: Rational,
    /// Comparison endpoint: lower end at a singularity, upper end at infinity.
    pub endpoint: Option<Rational>,
    pub endpoint_included: bool,
    /// Source exponents actually used to build the endpoint.
    pub a_used: Rational,
    pub b_used: Rational,
    pub relaxed: bool,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiWeightVerdict {
    pub decision: Decision,
    pub reason: Option<Reason>,
    /// True unless the verdict is the exact single-singularity characterization.
    pub sufficient_only: bool,
    pub sites: Vec<SiteOutcome>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MultiWeightError {
    #[error("at least one singularity is required")]
    NoSingularities,
    #[error(transparent)]
    Params(#[from] ParamError),
}

/// Relaxation steps `δ = 2^k / 8`, tried in increasing order.
fn ladder() -> impl Iterator<Item = Rational> {
    (0..13).map(|k| Rational::new(1 << k, 8))
}

fn space(shared: &SharedExponents, a: &Rational, b: &Rational) -> SpaceParams {
    SpaceParams {
        n: shared.n,
        p: shared.p.clone(),
        q: shared.q.clone(),
        r: shared.r.clone(),
        a: a.clone(),
        b: b.clone(),
    }
}

struct Endpoint {
    value: Rational,
    included: bool,
    a: Rational,
    b: Rational,
    relaxed: bool,
}

/// Finds the comparison endpoint, relaxing `(a, b)` upward (`sign = 1`) or downward.
fn endpoint(
    shared: &SharedExponents,
    a: &Rational,
    b: &Rational,
    sign: i64,
    pick: fn(&AdmissibleSet) -> Option<(Rational, bool)>,
) -> Result<Option<Endpoint>, ParamError> {
    let direct = admissible_set(&space(shared, a, b))?;
    if let Some((value, included)) = pick(&direct) {
        return Ok(Some(Endpoint { value, included, a: a.clone(), b: b.clone(), relaxed: false }));
    }
    let step = Rational::from_int(sign);
    for delta in ladder() {
        let d = &step * &delta;
        let candidates = [(a + &d, b.clone()), (a.clone(), b + &d), (a + &d, b + &d)];
        let mut best: Option<Endpoint> = None;
        for (ca, cb) in candidates {
            let set = admissible_set(&space(shared, &ca, &cb))?;
            if let Some((value, included)) = pick(&set) {
                let better = match &best {
                    None => true,
                    Some(e) if sign > 0 => value < e.value,
                    Some(e) => value > e.value,
                };
                if better {
                    best = Some(Endpoint { value, included, a: ca, b: cb, relaxed: true });
                }
            }
        }
        if best.is_some() {
            return Ok(best);
        }
    }
    Ok(None)
}

pub fn multiweight_classify(spec: &MultiWeightSpec) -> Result<MultiWeightVerdict, MultiWeightError> {
    if spec.singularities.is_empty() {
        return Err(MultiWeightError::NoSingularities);
    }
    let shared = &spec.shared;
    let inf = &spec.infinity;
    let mut sites = Vec::new();
    let mut reason = None;

    let locals = spec
        .singularities
        .iter()
        .map(|s| (SiteRole::Singularity { location: s.location }, s.a.clone(), s.b.clone(), s.c.clone(), 1))
        .chain(std::iter::once((SiteRole::Infinity, inf.a.clone(), inf.b.clone(), inf.c.clone(), -1)));

    for (role, a, b, c, sign) in locals {
        let local = space(shared, &a, &b).with_c(c.clone());
        local.validate_full()?;
        let pick = if sign > 0 { AdmissibleSet::lower } else { AdmissibleSet::upper };
        let found = endpoint(shared, &a, &b, sign, pick)?;
        let outcome = match found {
            Some(e) => {
                let satisfied = if sign > 0 {
                    c > e.value || (c == e.value && e.included)
                } else {
                    c < e.value || (c == e.value && e.included)
                };
                SiteOutcome {
                    role,
                    c: c.clone(),
                    endpoint: Some(e.value),
                    endpoint_included: e.included,
                    a_used: e.a,
                    b_used: e.b,
                    relaxed: e.relaxed,
                    satisfied,
                }
            }
            None => SiteOutcome {
                role,
                c: c.clone(),
                endpoint: None,
                endpoint_included: false,
                a_used: a.clone(),
                b_used: b.clone(),
                relaxed: true,
                satisfied: false,
            },
        };
        if !outcome.satisfied && reason.is_none() {
            reason = local_reason(&local)?;
        }
        sites.push(outcome);
    }

    let all = sites.iter().all(|s| s.satisfied);
    let relaxed = sites.iter().any(|s| s.relaxed);
    let single = spec.singularities.len() == 1
        && spec.singularities[0].a == inf.a
        && spec.singularities[0].b == inf.b
        && spec.singularities[0].c == inf.c;
    Ok(MultiWeightVerdict {
        decision: if all { Decision::Embeds } else { Decision::DoesNotEmbed },
        reason: if all { None } else { reason },
        sufficient_only: relaxed || !single,
        sites,
    })
}

/// Reason reported by the pure power weight that governs the failing site.
fn local_reason(local: &Params) -> Result<Option<Reason>, ParamError> {
    Ok(classify(local)?.reason)
}
