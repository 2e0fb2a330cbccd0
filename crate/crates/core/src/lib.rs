//! Tail asymptotics of the downlink SIR in cellular networks.
//!
//! Monte Carlo estimators for `P(SIR > θ)` and for the constant
//! `lim θ^{1/β} P(SIR > θ)`, its deterministic evaluation for Poisson and
//! Ginibre base stations, and geometric bounds on the typical Voronoi cell.
// negated float comparisons are used on purpose: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymquad;
pub mod error;
pub mod estimate;
pub mod experiment;
pub mod fading;
pub mod ppsampler;
pub mod quad;
pub mod reference;
pub mod report;
pub mod rng;
pub mod sirmc;
pub mod special;
pub mod stats;
pub mod validate;
pub mod voronoi;

pub use error::{Error, Result};
