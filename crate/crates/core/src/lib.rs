//! Partially triangulated torus graphs with a single hole: sparsity, generic 3-rigidity,
//! hole classification and the contraction/fission reduction.

pub mod catalog;
pub mod corpus;
pub mod graph;
pub mod homology;
pub mod reduction;
pub mod rigidity;
pub mod sparsity;
pub mod surface;

mod flow;
