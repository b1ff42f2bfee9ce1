//! Proximity measures for the vertices of weighted multigraphs and
//! multidigraphs, with brute-force oracles and mechanical checks of the
//! properties a proximity measure is expected to satisfy.
//!
//! Vertices are 0-based throughout the library.

pub mod axioms;
pub mod error;
pub mod forest;
pub mod graph;
pub mod linalg;
pub mod measure;
pub mod oracle;
pub mod paths;
pub mod walks;

pub use error::{ProximityError, Result};
pub use graph::{
    AveragingMatrix, ComponentPartition, Edge, LaplacianMatrix, WeightMatrix, WeightedMultigraph,
};
pub use measure::{MeasureConfig, MeasureKind, ProximityMatrix};
