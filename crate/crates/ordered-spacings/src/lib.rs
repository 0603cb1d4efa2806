//! Distributions of ordered gaps between uniform points, exactly.
//!
//! Drop n points uniformly on the unit interval and sort them. The gaps
//! between neighbors (optionally including the two edge gaps) carry a
//! surprising amount of structure: the k-th smallest gap, the sum of the k
//! smallest, and the sum of the k largest all have closed-form piecewise
//! polynomial laws. This crate builds those laws as exact windowed series,
//! evaluates them in guarded floating point with an exact rational fallback,
//! and cross-checks everything against an independent Monte Carlo sampler.
//!
//! Start with [`SpacingModel`] to pick a sample size and boundary handling,
//! then ask it for a statistic's distribution. The `examples/` directory has
//! one runnable walkthrough per capability.

pub mod cli;
pub mod coefficients;
pub mod dist_edges;
pub mod dist_noedges;
pub mod distribution;
pub mod error;
pub mod inference;
pub mod model;
pub mod montecarlo;
pub mod numeric;
pub mod quad;
pub mod selfcheck;
pub mod series;

pub use distribution::SpacingDistribution;
pub use error::{Error, Result, RATIONAL_NMAX_ENV};
pub use model::{BoundaryMode, SpacingModel, StatFamily, StatKind};
pub use series::{EvalMode, EvalPolicy, EvalRoute, Evaluated, PiecewiseSeries};
