//! Edge contraction, critical separating cycles, fission at catalog graphs, and the
//! reduction tree down to `K4` and `K5` minus an edge.

mod certify;
mod cycles;
mod fission;
mod moves;
mod tree;

use thiserror::Error;

use crate::catalog::CatalogError;
use crate::graph::Edge;
use crate::sparsity::SparsityError;
use crate::surface::SurfaceError;

pub use certify::{certify, replay, Certificate, ReplayReport, SplitStep};
pub use cycles::{all_critical_cycles, divide, find_critical_cycle_through, Division, SeparatingCycle, EXHAUSTIVE_FACE_LIMIT};
pub use fission::{fission, Fission};
pub use moves::{classify_edge, contract, contractible_edges, is_uncontractible, split_facial, vertex_split, EdgeClass};
pub use tree::{reduce_greedy, ContractionStep, GreedyReduction, reduction_tree, validate_tree, Move, ReductionNode, ReductionTree, TreeStats};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("edge {0} is not in the graph")]
    UnknownEdge(Edge),
    #[error("edge {0} is not contractible")]
    NotContractible(Edge),
    #[error("split anchors must be two distinct neighbours of the split vertex")]
    InvalidAnchors,
    #[error("edge {0} is not available for the split")]
    NotAnEdge(Edge),
    #[error("no critical separating cycle passes through {0}")]
    NoCriticalCycle(Edge),
    #[error("invalid separating cycle: {0}")]
    InvalidCycle(String),
    #[error("no catalog graph matches the walk around the cycle")]
    NoMatchingCatalogGraph,
    #[error("fission failed: {0}")]
    FissionFailed(String),
    #[error("every contractible edge leaves the class")]
    StuckButContractible,
    #[error("graph is not (3,6)-tight")]
    NotInT,
    #[error("{0} faces exceed the exhaustive search limit")]
    TooLarge(usize),
    #[error("replay failed: {0}")]
    ReplayMismatch(String),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Sparsity(#[from] SparsityError),
}
