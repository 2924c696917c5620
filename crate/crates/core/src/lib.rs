//! Exact LP-rounding solvers for priority k-supplier problems with outliers.
//!
//! The suite covers the cardinality-constrained problem (with special cases
//! for structured radii), the knapsack-constrained variant via a
//! round-or-cut configuration LP, and the colorful variant via extreme-point
//! rounding of a path-packing LP — plus brute-force oracles that certify the
//! approximation guarantees on desk-scale instances with zero-tolerance
//! rational arithmetic.

pub mod contact;
pub mod filtering;
pub mod instance;
pub mod lp;
pub mod oracle;
pub mod pathpack;
pub mod rational;
pub mod solvers;

pub use instance::{Instance, InstanceError};
pub use rational::Rat;
