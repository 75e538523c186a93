//! Exact and sampled hard-core model computations on finite graphs.
//!
//! The hard-core model at fugacity `λ` draws an independent set `I` with
//! probability proportional to `λ^|I|`; its normalising constant is the
//! independence polynomial.  This crate computes that polynomial exactly,
//! evaluates the derived occupancy statistics, checks closed-form bounds
//! against them, samples large graphs with Glauber dynamics and scans graph
//! families for small values of `α(G)/ᾱ_G(λ)`.

pub mod bounds;
pub mod error;
pub mod graph;
pub mod graph6;
pub mod indpoly;
pub mod random_graphs;
pub mod sampler;
pub mod scan;

pub use error::{Error, Result};
pub use graph::{Graph, GraphStats};
pub use graph6::{from_graph6, to_graph6};
pub use indpoly::{independence_polynomial, IndPoly};
