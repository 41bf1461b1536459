//! Admissible sets of `c` and admissible multiplicative exponents θ.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{classify, radial_to_line, Facts, Verdict};
use crate::exact::{ParamError, Params, Rational, SpaceParams};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: Rational,
    pub lo_included: bool,
    pub hi: Rational,
    pub hi_included: bool,
}

impl Interval {
    pub fn contains(&self, x: &Rational) -> bool {
        let above = match x.cmp(&self.lo) {
            Ordering::Greater => true,
            Ordering::Equal => self.lo_included,
            Ordering::Less => false,
        };
        let below = match x.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_included,
            Ordering::Greater => false,
        };
        above && below
    }
}

/// The set of `c` for which the embedding holds at fixed `(N, p, q, r, a, b)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibleSet {
    pub interval: Option<Interval>,
    pub isolated_points: Vec<Rational>,
}

impl AdmissibleSet {
    pub fn empty() -> Self {
        AdmissibleSet { interval: None, isolated_points: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.interval.is_none() && self.isolated_points.is_empty()
    }

    pub fn contains(&self, c: &Rational) -> bool {
        self.interval.as_ref().is_some_and(|i| i.contains(c)) || self.isolated_points.contains(c)
    }

    /// Infimum with an inclusion flag.
    pub fn lower(&self) -> Option<(Rational, bool)> {
        let mut best: Option<(Rational, bool)> = self.interval.as_ref().map(|i| (i.lo.clone(), i.lo_included));
        for x in &self.isolated_points {
            if best.as_ref().is_none_or(|(v, _)| x < v) {
                best = Some((x.clone(), true));
            }
        }
        best
    }

    /// Supremum with an inclusion flag.
    pub fn upper(&self) -> Option<(Rational, bool)> {
        let mut best: Option<(Rational, bool)> = self.interval.as_ref().map(|i| (i.hi.clone(), i.hi_included));
        for x in &self.isolated_points {
            if best.as_ref().is_none_or(|(v, _)| x > v) {
                best = Some((x.clone(), true));
            }
        }
        best
    }

    fn shifted(self, by: &Rational) -> Self {
        AdmissibleSet {
            interval: self.interval.map(|i| Interval {
                lo: &i.lo + by,
                lo_included: i.lo_included,
                hi: &i.hi + by,
                hi_included: i.hi_included,
            }),
            isolated_points: self.isolated_points.into_iter().map(|x| x + by).collect(),
        }
    }
}

#[derive(Debug, Clone)]
struct Bound {
    value: Rational,
    closed: bool,
}

/// A range of θ values with open or closed ends.
#[derive(Debug, Clone)]
struct ThetaRange {
    lo: Bound,
    hi: Bound,
}

impl ThetaRange {
    fn open(lo: Rational, hi: Rational) -> Self {
        ThetaRange { lo: Bound { value: lo, closed: false }, hi: Bound { value: hi, closed: false } }
    }

    fn is_empty(&self) -> bool {
        match self.lo.value.cmp(&self.hi.value) {
            Ordering::Greater => true,
            Ordering::Equal => !(self.lo.closed && self.hi.closed),
            Ordering::Less => false,
        }
    }

    fn raise_lo(&mut self, b: Bound) {
        match b.value.cmp(&self.lo.value) {
            Ordering::Greater => self.lo = b,
            Ordering::Equal => self.lo.closed &= b.closed,
            Ordering::Less => {}
        }
    }

    fn lower_hi(&mut self, b: Bound) {
        match b.value.cmp(&self.hi.value) {
            Ordering::Less => self.hi = b,
            Ordering::Equal => self.hi.closed &= b.closed,
            Ordering::Greater => {}
        }
    }

    fn contains(&self, t: &Rational) -> bool {
        let above = t > &self.lo.value || (t == &self.lo.value && self.lo.closed);
        let below = t < &self.hi.value || (t == &self.hi.value && self.hi.closed);
        above && below
    }
}

/// Exact admissible set for the full-space embedding.
pub fn admissible_set(space: &SpaceParams) -> Result<AdmissibleSet, ParamError> {
    space.validate_full()?;
    let c0 = space.c0();
    let c1 = space.c1();
    if c0 == c1 {
        let at = space.with_c(c0.clone());
        return Ok(if classify(&at)?.embeds() {
            AdmissibleSet { interval: None, isolated_points: vec![c0] }
        } else {
            AdmissibleSet::empty()
        });
    }
    if space.r > space.r_ceiling() {
        return Ok(AdmissibleSet::empty());
    }
    // Any c works for the side and endpoint facts; only a, b, p, q, r, N enter.
    let probe = space.with_c(c0.clone());
    let facts = Facts::new(&probe);
    let zero = Rational::zero();
    let one = Rational::one();

    let mut range = if facts.same_side() {
        ThetaRange::open(zero.clone(), one.clone())
    } else {
        let t = space.theta_at(&-space.dim()).expect("slopes differ");
        ThetaRange::open(zero.clone(), t)
    };
    let coef = space.theta_coefficient();
    let bound = space.theta_bound();
    let mut interior = true;
    match coef.signum() {
        1 => range.lower_hi(Bound { value: &bound / &coef, closed: true }),
        -1 => range.raise_lo(Bound { value: &bound / &coef, closed: true }),
        _ => interior = !bound.is_negative(),
    }
    let mut range = if interior && !range.is_empty() { Some(range) } else { None };

    let mut points = Vec::new();
    if space.r == space.q {
        points.push(zero.clone());
    }
    if space.p <= space.r && space.r <= space.p_star() && facts.endpoint_sides() {
        points.push(one.clone());
    }
    let mut isolated = Vec::new();
    for t in points {
        match range.as_mut() {
            Some(rg) if t == rg.lo.value => rg.lo.closed = true,
            Some(rg) if t == rg.hi.value => rg.hi.closed = true,
            Some(rg) if rg.contains(&t) => {}
            _ => isolated.push(t),
        }
    }
    if let Some(rg) = &range {
        if rg.lo.value == rg.hi.value {
            isolated.push(rg.lo.value.clone());
            range = None;
        }
    }

    let increasing = c1 > c0;
    let interval = range.map(|rg| {
        let (a, b) = (space.c_at_theta(&rg.lo.value), space.c_at_theta(&rg.hi.value));
        if increasing {
            Interval { lo: a, lo_included: rg.lo.closed, hi: b, hi_included: rg.hi.closed }
        } else {
            Interval { lo: b, lo_included: rg.hi.closed, hi: a, hi_included: rg.lo.closed }
        }
    });
    let mut isolated_points: Vec<Rational> = isolated.iter().map(|t| space.c_at_theta(t)).collect();
    isolated_points.sort();
    isolated_points.dedup();
    Ok(AdmissibleSet { interval, isolated_points })
}

/// Exact admissible set for the radial subspace.
pub fn admissible_set_radial(space: &SpaceParams) -> Result<AdmissibleSet, ParamError> {
    space.validate_radial()?;
    let line = radial_to_line(&space.with_c(Rational::zero())).space();
    let shift = Rational::one() - Rational::from(space.n);
    Ok(admissible_set(&line)?.shifted(&shift))
}

/// Exponents θ for which the multiplicative inequality is known to hold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ThetaSet {
    Empty,
    Single { theta: Rational },
    ClosedRange { lo: Rational, hi: Rational },
    TrivialZero,
}

impl ThetaSet {
    pub fn contains(&self, theta: &Rational) -> bool {
        match self {
            ThetaSet::Empty => false,
            ThetaSet::Single { theta: t } => t == theta,
            ThetaSet::ClosedRange { lo, hi } => lo <= theta && theta <= hi,
            ThetaSet::TrivialZero => theta.is_zero(),
        }
    }

    /// A representative exponent, if any.
    pub fn pick(&self) -> Option<Rational> {
        match self {
            ThetaSet::Empty => None,
            ThetaSet::Single { theta } => Some(theta.clone()),
            ThetaSet::ClosedRange { hi, .. } => Some(hi.clone()),
            ThetaSet::TrivialZero => Some(Rational::zero()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThetaSetError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("the embedding does not hold, so no multiplicative exponent exists")]
    NotEmbedding(Box<Verdict>),
    #[error("slopes coincide; the θ-condition is not defined")]
    EqualSlopes,
    #[error("θ-condition fails at a hull endpoint although r <= min(p*, q)")]
    SelfTest,
}

pub fn theta_set(params: &Params) -> Result<ThetaSet, ThetaSetError> {
    let verdict = classify(params)?;
    if !verdict.embeds() {
        return Err(ThetaSetError::NotEmbedding(Box::new(verdict)));
    }
    let d = &verdict.derived;
    if let Some(t) = &d.theta_c {
        return Ok(ThetaSet::Single { theta: t.clone() });
    }
    let eta = d.eta.as_ref().expect("equal slopes");
    let (p, q, r) = (&params.p, &params.q, &params.r);
    if eta.is_zero() {
        if r == q {
            return Ok(ThetaSet::TrivialZero);
        }
        return Ok(if params.n >= 2 {
            ThetaSet::Empty
        } else {
            ThetaSet::Single { theta: d.theta_breve.clone() }
        });
    }
    let theta_lower =
        if p == q { Rational::zero() } else { p * (r - q) / (r * (p - q)) };
    let hardy = p <= r && *r <= d.p_star;
    let one = Rational::one();
    let set = if hardy && *r <= p.greater(q) {
        if theta_lower == one {
            ThetaSet::Single { theta: one }
        } else {
            ThetaSet::ClosedRange { lo: theta_lower, hi: one }
        }
    } else if hardy {
        ThetaSet::Single { theta: one }
    } else {
        ThetaSet::Single { theta: theta_lower }
    };
    Ok(set)
}

/// Whether `r ≤ min{p*, q}`, in which case the θ-condition holds on the whole hull.
pub fn auto_theta_condition_check(space: &SpaceParams) -> Result<bool, ThetaSetError> {
    if space.slopes_equal() {
        return Err(ThetaSetError::EqualSlopes);
    }
    let automatic = space.r <= space.q && space.r <= space.p_star();
    if automatic {
        let ok = space.theta_condition(&Rational::zero()) && space.theta_condition(&Rational::one());
        if !ok {
            return Err(ThetaSetError::SelfTest);
        }
    }
    Ok(automatic)
}
