//! Exact parameter grids classified point by point.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classifier::{classify, classify_radial, CaseTag, Decision, Reason};
use crate::exact::{Params, Rational};
use crate::exec::{self, Execution};

pub const DEFAULT_GRID_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    P,
    Q,
    R,
    A,
    B,
    C,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub param: Axis,
    pub start: Rational,
    pub stop: Rational,
    pub step: Rational,
}

impl Range {
    /// Number of points `start + k·step ≤ stop`; zero when `start > stop`.
    pub fn len(&self) -> Result<u64, SweepError> {
        if !self.step.is_positive() {
            return Err(SweepError::Step(self.param));
        }
        if self.start > self.stop {
            return Ok(0);
        }
        let span = (&self.stop - &self.start) / &self.step;
        let whole = span.numer() / span.denom();
        u64::try_from(whole).map(|k| k + 1).map_err(|_| SweepError::TooLarge { points: u64::MAX, cap: 0 })
    }

    pub fn is_empty(&self) -> Result<bool, SweepError> {
        Ok(self.len()? == 0)
    }

    fn value(&self, k: u64) -> Rational {
        &self.start + &self.step * Rational::from_int(k as i64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// Values of the parameters that are not swept. `n` is always fixed.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Fixed {
    pub n: u32,
    pub p: Option<Rational>,
    pub q: Option<Rational>,
    pub r: Option<Rational>,
    pub a: Option<Rational>,
    pub b: Option<Rational>,
    pub c: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub fixed: Fixed,
    #[serde(default)]
    pub axes: Vec<Range>,
    #[serde(default)]
    pub format: OutputFormat,
    /// Classify on the radial subspace instead of the full space.
    #[serde(default)]
    pub radial: bool,
    #[serde(default = "default_cap")]
    pub cap: u64,
}

fn default_cap() -> u64 {
    DEFAULT_GRID_CAP
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SweepError {
    #[error("parameter {0:?} is neither fixed nor swept")]
    Missing(Axis),
    #[error("parameter {0:?} is swept more than once")]
    Duplicate(Axis),
    #[error("the step of axis {0:?} must be positive")]
    Step(Axis),
    #[error("the grid has {points} points, above the cap of {cap}")]
    TooLarge { points: u64, cap: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub params: Params,
    pub decision: Option<Decision>,
    pub case: Option<CaseTag>,
    pub reason: Option<Reason>,
    pub c0: Option<Rational>,
    pub c1: Option<Rational>,
    pub theta_c: Option<Rational>,
    /// Set when the grid point is not a valid parameter tuple.
    pub error: Option<String>,
}

fn slot(fixed: &Fixed, axis: Axis) -> &Option<Rational> {
    match axis {
        Axis::P => &fixed.p,
        Axis::Q => &fixed.q,
        Axis::R => &fixed.r,
        Axis::A => &fixed.a,
        Axis::B => &fixed.b,
        Axis::C => &fixed.c,
    }
}

const ALL_AXES: [Axis; 6] = [Axis::P, Axis::Q, Axis::R, Axis::A, Axis::B, Axis::C];

impl SweepSpec {
    /// Total number of grid points, after checking the spec is complete.
    pub fn grid_size(&self) -> Result<u64, SweepError> {
        for axis in ALL_AXES {
            let swept = self.axes.iter().filter(|r| r.param == axis).count();
            if swept > 1 {
                return Err(SweepError::Duplicate(axis));
            }
            if swept == 0 && slot(&self.fixed, axis).is_none() {
                return Err(SweepError::Missing(axis));
            }
        }
        let mut total: u64 = 1;
        for r in &self.axes {
            total = total.saturating_mul(r.len()?);
        }
        if total > self.cap {
            return Err(SweepError::TooLarge { points: total, cap: self.cap });
        }
        Ok(total)
    }

    /// Grid point `i` in row-major order, the last axis varying fastest.
    fn point(&self, mut i: u64, lens: &[u64]) -> Params {
        let mut vals: Vec<(Axis, Rational)> = Vec::with_capacity(self.axes.len());
        for (r, &len) in self.axes.iter().zip(lens).rev() {
            vals.push((r.param, r.value(i % len)));
            i /= len;
        }
        let get = |axis: Axis| {
            vals.iter()
                .find(|(a, _)| *a == axis)
                .map(|(_, v)| v.clone())
                .or_else(|| slot(&self.fixed, axis).clone())
                .expect("checked by grid_size")
        };
        Params {
            n: self.fixed.n,
            p: get(Axis::P),
            q: get(Axis::Q),
            r: get(Axis::R),
            a: get(Axis::A),
            b: get(Axis::B),
            c: get(Axis::C),
        }
    }
}

fn row(params: Params, radial: bool) -> SweepRow {
    let verdict = if radial { classify_radial(&params) } else { classify(&params) };
    match verdict {
        Ok(v) => SweepRow {
            decision: Some(v.decision),
            case: v.case,
            reason: v.reason,
            c0: Some(v.derived.c0),
            c1: Some(v.derived.c1),
            theta_c: v.derived.theta_c,
            error: None,
            params,
        },
        Err(e) => SweepRow {
            params,
            decision: None,
            case: None,
            reason: None,
            c0: None,
            c1: None,
            theta_c: None,
            error: Some(e.to_string()),
        },
    }
}

/// Classifies every grid point; rows come back in grid order whatever the execution mode.
pub fn run_sweep(spec: &SweepSpec, mode: Execution) -> Result<Vec<SweepRow>, SweepError> {
    let total = spec.grid_size()?;
    let lens: Vec<u64> = spec.axes.iter().map(|r| r.len()).collect::<Result<_, _>>()?;
    Ok(exec::map_range(mode, total as usize, |i| row(spec.point(i as u64, &lens), spec.radial)))
}
