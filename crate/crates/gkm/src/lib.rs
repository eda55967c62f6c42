//! Combinatorial equivariant cohomology of GKM graphs and GKM fiber bundles.
//!
//! A GKM graph is a multigraph whose oriented edges carry linear forms (the
//! axial function); the associated graded ring consists of tuples of
//! polynomials, one per vertex, whose difference across every edge is
//! divisible by that edge's weight. This crate builds such graphs for
//! homogeneous spaces `G/K` out of classical root system data, realizes
//! fiber bundles `G/K1 -> G/K` combinatorially together with their edge
//! transports, twists and holonomy groups, and verifies the resulting
//! structure theory (congruence descriptions of the total space, invariant
//! fiber classes, tensor-product module bases, iterated flag towers) by
//! exact linear algebra over the rationals.
//!
//! Start with the runnable examples under `examples/`; the `gkm` binary
//! exposes the same computations as batch subcommands emitting JSON.

pub mod error;
pub mod fibration;
pub mod graph;
pub mod json;
pub mod linalg;
pub mod poly;
pub mod tower;
pub mod weyl;

pub use error::{GkmError, Result};

/// Default cap on enumerated group orders (Weyl groups, holonomy closures).
pub const DEFAULT_MAX_GROUP_ORDER: usize = 10_000;

/// Default degree cap for graded verifications.
pub const DEFAULT_MAX_DEGREE: u32 = 4;

/// Group-order cap, honoring the `GKM_MAX_GROUP_ORDER` environment variable.
pub fn max_group_order() -> usize {
    std::env::var("GKM_MAX_GROUP_ORDER")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_GROUP_ORDER)
}
