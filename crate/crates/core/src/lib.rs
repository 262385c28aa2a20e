//! Random complex projective divisors at desk scale.
//!
//! Degree-`d` Kostlan sections are sampled on `CP^n`; for `n = 2` their zero
//! curves are meshed as branched covers of `CP^1` and measured (area,
//! curvature, systole, diameter, spectral gap, distance to the discriminant).
//! The [`chern`] module computes discriminant and branched-cover degrees
//! exactly.

pub mod bergman;
pub mod chern;
pub mod ensemble;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod poly;
pub mod projective;
pub mod roots;
pub mod surface;
pub mod units;
pub mod zeroset;

pub use error::{Error, Result};
pub use projective::ProjectivePoint;
pub use units::UnitSystem;
