//! Exact decision procedures for the weighted embedding
//! `W^{1,(q,p)}_{a,b} ↪ L^r(|x|^c dx)` and its radial and zero-mean variants.

mod multiweight;
mod sets;

pub use multiweight::{
    multiweight_classify, MultiWeightError, MultiWeightSpec, MultiWeightVerdict, SharedExponents, SiteOutcome, SiteRole,
    Singularity, WeightTriple,
};
pub use sets::{admissible_set, admissible_set_radial, auto_theta_condition_check, theta_set, AdmissibleSet, Interval, ThetaSet, ThetaSetError};

use serde::{Deserialize, Serialize};

use crate::exact::{derive, DerivedQuantities, ExtRational, ParamError, Params, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Decision {
    Embeds,
    DoesNotEmbed,
}

/// Which sufficient condition produced an `Embeds` verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseTag {
    I,
    II,
    III,
    IV,
    V,
    VI,
}

/// Why an embedding fails. Each reason selects one counterexample family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Reason {
    ROutOfRange,
    COutsideHull,
    COutsideOppositeSideWindow,
    EndpointC0WrongR,
    EndpointC1SmallR,
    EqualSlopesSmallR,
    EtaZeroSmallR,
    ThetaConditionFails,
}

impl Reason {
    pub const ALL: [Reason; 8] = [
        Reason::ROutOfRange,
        Reason::COutsideHull,
        Reason::COutsideOppositeSideWindow,
        Reason::EndpointC0WrongR,
        Reason::EndpointC1SmallR,
        Reason::EqualSlopesSmallR,
        Reason::EtaZeroSmallR,
        Reason::ThetaConditionFails,
    ];

    /// Whether this necessity condition holds for `params`.
    pub fn applies(self, params: &Params) -> bool {
        Facts::new(params).reason_applies(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub decision: Decision,
    pub case: Option<CaseTag>,
    pub reason: Option<Reason>,
    pub derived: DerivedQuantities,
}

impl Verdict {
    pub fn embeds(&self) -> bool {
        self.decision == Decision::Embeds
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum W0Decision {
    Embeds,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct W0Verdict {
    pub decision: W0Decision,
    pub derived: DerivedQuantities,
}

/// Precomputed comparisons shared by the decision procedures.
pub(crate) struct Facts<'a> {
    pub p: &'a Params,
    pub n: Rational,
    /// `a + N`
    pub sa: Rational,
    /// `b − p + N`
    pub sb: Rational,
    pub slope_a: Rational,
    pub slope_b: Rational,
    pub c0: Rational,
    pub c1: Rational,
    pub p_star: ExtRational,
}

impl<'a> Facts<'a> {
    pub fn new(p: &'a Params) -> Self {
        let s = p.space();
        let n = p.dim();
        Facts {
            sa: &p.a + &n,
            sb: &p.b - &p.p + &n,
            slope_a: s.slope_a(),
            slope_b: s.slope_b(),
            c0: s.c0(),
            c1: s.c1(),
            p_star: s.p_star(),
            n,
            p,
        }
    }

    fn slopes_differ(&self) -> bool {
        self.slope_a != self.slope_b
    }

    fn minus_n(&self) -> Rational {
        -&self.n
    }

    /// `a` and `b − p` on the same side of `−N`, either may equal `−N`.
    fn same_side(&self) -> bool {
        let (x, y) = (self.sa.signum(), self.sb.signum());
        (x <= 0 && y <= 0) || (x >= 0 && y >= 0)
    }

    fn strictly_opposite(&self) -> bool {
        self.sa.signum() * self.sb.signum() < 0
    }

    /// `[a ≤ −N and b−p < −N]` or `[a ≥ −N and b−p > −N]`.
    fn endpoint_sides(&self) -> bool {
        let (x, y) = (self.sa.signum(), self.sb.signum());
        (x <= 0 && y < 0) || (x >= 0 && y > 0)
    }

    fn eta_zero(&self) -> bool {
        self.sa.is_zero() && self.sb.is_zero()
    }

    fn theta(&self) -> Option<Rational> {
        if self.slopes_differ() {
            Some((&self.p.c - &self.c0) / (&self.c1 - &self.c0))
        } else {
            None
        }
    }

    fn theta_condition(&self) -> bool {
        match self.theta() {
            Some(t) => self.p.space().theta_condition(&t),
            None => false,
        }
    }

    fn r_in_range(&self) -> bool {
        self.p.r <= self.p.space().r_ceiling()
    }

    fn r_le_p_star(&self) -> bool {
        self.p.r <= self.p_star
    }

    fn min_pq(&self) -> Rational {
        self.p.p.lesser(&self.p.q)
    }

    fn max_pq(&self) -> Rational {
        self.p.p.greater(&self.p.q)
    }

    fn full_case(&self) -> Option<CaseTag> {
        let p = self.p;
        let c = &p.c;
        if !self.r_in_range() {
            return None;
        }
        if p.r == p.q && *c == p.a {
            return Some(CaseTag::III);
        }
        if p.p <= p.r && self.r_le_p_star() && self.endpoint_sides() && *c == self.c1 {
            return Some(CaseTag::IV);
        }
        if p.r >= self.min_pq() && !self.slopes_differ() && !self.slope_a.is_zero() && *c == self.c1 {
            return Some(CaseTag::V);
        }
        if self.eta_zero() && p.q < p.r && self.r_le_p_star() && *c == self.minus_n() {
            return Some(CaseTag::VI);
        }
        if self.same_side() && self.slopes_differ() && strictly_between(c, &self.c0, &self.c1) && self.theta_condition() {
            return Some(CaseTag::I);
        }
        if self.strictly_opposite() && strictly_between(c, &self.c0, &self.minus_n()) && self.theta_condition() {
            return Some(CaseTag::II);
        }
        None
    }

    pub fn reason_applies(&self, reason: Reason) -> bool {
        let p = self.p;
        let c = &p.c;
        match reason {
            Reason::ROutOfRange => !self.r_in_range(),
            Reason::COutsideHull => !closed_between(c, &self.c0, &self.c1),
            Reason::COutsideOppositeSideWindow => {
                let x = self.sa.signum();
                let y = self.sb.signum();
                let opposite = (y <= 0 && x > 0) || (y >= 0 && x < 0);
                opposite && !in_half_open_window(c, &self.c0, &self.minus_n())
            }
            Reason::EndpointC0WrongR => self.slopes_differ() && *c == self.c0 && p.r != p.q,
            Reason::EndpointC1SmallR => self.slopes_differ() && *c == self.c1 && p.r < p.p,
            Reason::EqualSlopesSmallR => !self.slopes_differ() && p.r < self.min_pq() && *c == self.c0,
            Reason::EtaZeroSmallR => self.eta_zero() && p.r < p.q && *c == self.minus_n(),
            Reason::ThetaConditionFails => {
                self.slopes_differ() && closed_between(c, &self.c0, &self.c1) && !self.theta_condition()
            }
        }
    }

    fn first_reason(&self) -> Option<Reason> {
        Reason::ALL.into_iter().find(|r| self.reason_applies(*r))
    }

    fn radial_case(&self) -> Option<CaseTag> {
        let p = self.p;
        let c = &p.c;
        let theta_breve = derive(p).theta_breve;
        let theta_ok = || self.theta().is_some_and(|t| t >= theta_breve);
        let equal_nonzero = !self.slopes_differ() && !self.slope_a.is_zero();
        if (p.r == p.q && *c == p.a)
            || (p.p != p.q && self.min_pq() <= p.r && p.r <= self.max_pq() && equal_nonzero && *c == self.c0)
        {
            return Some(CaseTag::IV);
        }
        if p.r >= p.p && self.endpoint_sides() && *c == self.c1 {
            return Some(CaseTag::III);
        }
        if self.eta_zero() && p.r > p.q && *c == self.minus_n() {
            return Some(CaseTag::V);
        }
        if self.same_side() && self.slopes_differ() && strictly_between(c, &self.c0, &self.c1) && theta_ok() {
            return Some(CaseTag::I);
        }
        if self.strictly_opposite() && strictly_between(c, &self.c0, &self.minus_n()) && theta_ok() {
            return Some(CaseTag::II);
        }
        None
    }
}

/// `x` strictly between `e1` and `e2` (in either order).
pub(crate) fn strictly_between(x: &Rational, e1: &Rational, e2: &Rational) -> bool {
    (e1 < x && x < e2) || (e2 < x && x < e1)
}

pub(crate) fn closed_between(x: &Rational, e1: &Rational, e2: &Rational) -> bool {
    (e1 <= x && x <= e2) || (e2 <= x && x <= e1)
}

/// `x` in the interval with endpoints `inc` (included) and `exc` (excluded).
fn in_half_open_window(x: &Rational, inc: &Rational, exc: &Rational) -> bool {
    (inc <= x && x < exc) || (exc < x && x <= inc)
}

/// Full-space classification.
pub fn classify(params: &Params) -> Result<Verdict, ParamError> {
    params.validate_full()?;
    let facts = Facts::new(params);
    let derived = derive(params);
    Ok(match facts.full_case() {
        Some(case) => Verdict { decision: Decision::Embeds, case: Some(case), reason: None, derived },
        None => {
            let reason = facts.first_reason().unwrap_or_else(|| {
                panic!("no necessity condition matches a negative verdict for {params:?}")
            });
            Verdict { decision: Decision::DoesNotEmbed, case: None, reason: Some(reason), derived }
        }
    })
}

/// Shifts a radial problem in dimension N to the equivalent one-dimensional problem.
pub(crate) fn radial_to_line(params: &Params) -> Params {
    let shift = Rational::from(params.n) - Rational::one();
    Params {
        n: 1,
        p: params.p.clone(),
        q: params.q.clone(),
        r: params.r.clone(),
        a: &params.a + &shift,
        b: &params.b + &shift,
        c: &params.c + &shift,
    }
}

/// Classification on the subspace of radial functions.
///
/// Negative verdicts carry the reason of the equivalent one-dimensional problem.
pub fn classify_radial(params: &Params) -> Result<Verdict, ParamError> {
    params.validate_radial()?;
    let facts = Facts::new(params);
    let derived = derive(params);
    Ok(match facts.radial_case() {
        Some(case) => Verdict { decision: Decision::Embeds, case: Some(case), reason: None, derived },
        None => {
            let line = radial_to_line(params);
            let reason = Facts::new(&line)
                .first_reason()
                .unwrap_or_else(|| panic!("radial negative verdict without a reason for {params:?}"));
            Verdict { decision: Decision::DoesNotEmbed, case: None, reason: Some(reason), derived }
        }
    })
}

/// Sufficient conditions for the embedding of the zero-spherical-mean subspace.
pub fn classify_w0(params: &Params) -> Result<W0Verdict, ParamError> {
    params.validate_full()?;
    let s = params.space();
    let derived = derive(params);
    let facts = Facts::new(params);
    let embeds = match &derived.theta_c {
        Some(theta) => {
            let in_hull = closed_between(&params.c, &derived.c0, &derived.c1);
            let first = (params.r == params.q && params.c == derived.c0)
                || (params.c != derived.c0 && s.theta_condition(theta));
            let one = Rational::one();
            let second = theta * &params.r / &params.p + (&one - theta) * &params.r / &params.q >= one;
            in_hull && first && second
        }
        None => params.c == derived.c0 && facts.min_pq() <= params.r && params.r <= s.r_ceiling(),
    };
    let decision = if embeds { W0Decision::Embeds } else { W0Decision::Unknown };
    Ok(W0Verdict { decision, derived })
}
