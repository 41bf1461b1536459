//! Exact scalars and the parameter calculus.

pub mod params;
pub mod rational;

pub use params::{derive, holder_conjugate, kelvin_params, DerivedQuantities, ParamError, Params, SpaceParams};
pub use rational::{q, ExtRational, Rational, RationalError};
