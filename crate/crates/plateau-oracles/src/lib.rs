//! Independent brute-force oracles for testing the main crate, plus
//! generators for randomized test instances.
//!
//! Nothing here is reachable from release builds of `plateau`; this crate
//! is only ever a dev-dependency.

pub mod betti;
pub mod feasibility;
pub mod gen;
pub mod reduction;

pub use betti::{betti_numbers, betti_profile};
pub use feasibility::{feasibility_lp_vertex, Infeasible};
pub use reduction::{reduce_persistence, BoundaryMatrix};
