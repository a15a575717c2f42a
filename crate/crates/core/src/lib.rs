//! Runtime distributions of evolutionary algorithms under stochastic domination.
//!
//! The crate is organised bottom-up:
//!
//! - [`dist`]: geometric primitives, gated geometric sums, exact PMFs,
//!   domination checks and quantile coupling.
//! - [`bounds`]: closed-form tail bounds for sums of geometric variables and a
//!   validator against the exact PMF.
//! - [`bench`]: objective functions (OneMax, LeadingOnes, Jump, inversions,
//!   pointer-based shortest paths).
//! - [`algo`]: seeded simulators reporting iteration and evaluation counts.
//! - [`analysis`]: dominating-distribution builders, exact LeadingOnes models,
//!   optimality computations and empirical domination tests.
//! - [`suites`]: end-to-end experiments comparing models with simulations.

pub mod algo;
pub mod analysis;
pub mod bench;
pub mod bounds;
pub mod dist;
pub mod error;
pub mod numeric;
pub mod rng;
pub mod suites;

pub use error::{Error, Result};
