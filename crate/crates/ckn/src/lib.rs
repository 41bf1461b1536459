//! Exact classification of weighted Sobolev embeddings
//! `W^{1,(q,p)}_{a,b}(ℝ^N∖{0}) ↪ L^r(ℝ^N; |x|^c dx)` and of the associated
//! Caffarelli-Kohn-Nirenberg inequalities, with a quadrature harness that
//! corroborates each verdict on explicit test functions.
//!
//! Decision logic runs on exact rationals ([`exact`], [`classifier`]); the numeric
//! side ([`functions`], [`quadrature`]) only consumes the verdicts.

pub mod classifier;
pub mod exact;
pub mod exec;
pub mod functions;
pub mod quadrature;
pub mod sweep;
