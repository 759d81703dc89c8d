//! Monte Carlo laboratory for random polytopes.
//!
//! A random polytope `K_n` is the convex hull of `n` independent uniform
//! points in a convex body `K` of volume one. This crate provides the pieces
//! needed to study such polytopes numerically:
//!
//! * [`geometry`]: volume-one bodies, an exact orientation predicate and cap
//!   volumes,
//! * [`hull`]: a beneath-beyond convex hull in dimensions 2 through 6 with
//!   insertion deltas and visibility queries,
//! * [`sampling`]: counter-based random streams, uniform and Poisson sampling
//!   and coupled samples,
//! * [`functionals`]: floating bodies, wet parts, visibility regions, wide
//!   points and cap covers,
//! * [`stats`]: moment accumulators, normality distances, tail profiles and
//!   power-law fits,
//! * [`experiments`]: declarative experiments with deterministic reports.

pub mod error;
pub mod experiments;
pub mod functionals;
pub mod geometry;
pub mod hull;
pub mod sampling;
pub mod stats;

pub use error::{Error, Result};
pub use geometry::{Body, BodyKind, Cap, Point, Sign, MAX_DIM};
pub use hull::{Hull, InsertionDelta};
pub use sampling::{CoupledPair, RngStream};
