//! Weighted norms `||u||_{d,s} = (∫ |x|^d |u|^s dx)^{1/s}` of catalog test functions,
//! and the probes that corroborate classifier verdicts with them.

pub mod gauss;
mod norms;
pub mod panels;
mod probe;

pub use norms::{
    harmonic_factor, norm_report, surface_area, weighted_norm, weighted_norm_fn, weighted_norm_gradient,
    weighted_norm_radial, Divergence, End, Norm, NormReport, NormStatus,
};
pub use probe::{
    default_family, falsify_instance, falsify_multiplicative, falsify_multiplicative_along, first_harmonic_family, verify_instance, verify_w0_instance,
    Certificate, FalsifyReport, MemberResult, MultiplicativeFamily, MultiplicativeReport, ProbeError, TraceEntry,
    VerifyReport, DEFAULT_SCALES,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("adaptive quadrature on [{lo}, {hi}] did not converge within {splits} subdivisions")]
    NonConvergence { lo: f64, hi: f64, splits: usize },
    #[error("tail panels did not become negligible before panel index {k}")]
    PanelRange { k: i64 },
    #[error("integrand is not finite near t = {at}")]
    NonFinite { at: f64 },
    #[error("{0}")]
    Unsupported(&'static str),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Bisection budget per adaptive integral.
    pub max_subdivisions: usize,
    /// Dyadic panels `[2^k, 2^{k+1}]` are only used for `k_min ≤ k ≤ k_max`.
    pub k_min: i64,
    pub k_max: i64,
    pub divergence_threshold: f64,
    /// Largest witness index tried by `falsify_instance`.
    pub index_cap: u32,
    /// Largest index tried by `falsify_multiplicative`.
    pub multiplicative_index_cap: u32,
    /// Largest accepted scale-invariance defect in `verify_instance`.
    pub defect_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-9,
            abs_tol: 0.0,
            max_subdivisions: 4000,
            k_min: -1000,
            k_max: 1000,
            divergence_threshold: 1e3,
            index_cap: 40,
            multiplicative_index_cap: 400,
            defect_tol: 1e-6,
        }
    }
}

impl QuadratureConfig {
    /// Defaults, with `rel_tol` taken from `CKN_QUAD_TOL` when set.
    pub fn from_env() -> Result<Self, String> {
        let mut cfg = QuadratureConfig::default();
        if let Ok(v) = std::env::var("CKN_QUAD_TOL") {
            let tol: f64 = v.trim().parse().map_err(|_| format!("CKN_QUAD_TOL must be a number, got {v:?}"))?;
            if !(tol > 0.0 && tol < 1.0) {
                return Err(format!("CKN_QUAD_TOL must lie in (0, 1), got {tol}"));
            }
            cfg.rel_tol = tol;
        }
        Ok(cfg)
    }

    /// Tolerance for a single panel; panels are summed, so they are held tighter.
    fn local_tol(&self) -> f64 {
        (self.rel_tol * 1e-2).max(1e-14)
    }
}
