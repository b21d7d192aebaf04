//! Exact parameterized solvers for two vertex-deletion problems that
//! generalize Feedback Vertex Set:
//!
//! * **r-pseudoforest deletion** — delete at most k vertices so that every
//!   remaining component can be made a forest by removing at most r edges
//!   (equivalently, every component has excess at most r);
//! * **d-quasi-forest deletion** — delete at most k vertices so that every
//!   remaining component has a feedback vertex set of size at most d.
//!
//! Both solvers run iterative compression over a disjoint-modulator
//! subproblem. The r-pseudoforest engine is a measure-bounded branching
//! algorithm; the d-quasi-forest engine is a staged pipeline (cycle
//! clearing, big-tree partitioning, tree deduplication, forced-vertex
//! detection, bounded final branching) with an exhaustive fallback search
//! for cross-checking. The `oracle` module provides brute-force ground
//! truth for everything at small scale.

pub mod dqf;
pub mod error;
pub mod graph;
pub mod kernel;
pub mod metrics;
pub mod oracle;
pub mod rpf;
pub mod solution;

pub use error::EngineError;
pub use graph::{Component, GraphError, MultiGraph, VertexId};
pub use solution::Solution;
