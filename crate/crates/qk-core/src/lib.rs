//! Quasi-kernel algorithms for digraphs.
//!
//! A quasi-kernel of a digraph is an independent set every outside vertex
//! reaches by a directed path of one or two arcs; one always exists. This
//! crate provides:
//!
//! - a compact digraph type with the in-neighbourhood primitives
//!   ([`digraph`]), vertex-set bitsets ([`vertex_set`]), and a plain text
//!   edge-list format plus DOT export ([`io`]);
//! - class recognizers, induced-pattern search, and the maximum-matching
//!   decomposition of a quasi-kernel ([`recognition`]);
//! - verifiers, the classic inductive construction, refinement steps, and
//!   exhaustive kernel / minimum quasi-kernel oracles ([`qk`]);
//! - algorithms that find quasi-kernels of size at most half the order in
//!   suitable digraph classes, or produce a certified forbidden pattern
//!   ([`small_qk`]);
//! - the one-way split digraph machinery with a polynomial exact minimum
//!   and the extremal constructions ([`split`]);
//! - instance generators and a deterministic, parallel scan harness with
//!   JSON reports ([`scan`], [`gen`]), also exposed as the `qk` binary.

pub mod digraph;
pub mod error;
pub mod gen;
pub mod io;
pub mod qk;
pub mod recognition;
pub mod scan;
pub mod small_qk;
pub mod split;
pub mod vertex_set;

pub use digraph::{Composed, CompositionSpec, Digraph, Induced, NeighborhoodPartition};
pub use error::{Error, Result};
pub use vertex_set::VertexSet;
