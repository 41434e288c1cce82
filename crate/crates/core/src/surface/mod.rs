//! Triangulated surfaces: closed tori, embedded discs, and tori with holes cut out.

mod builders;
mod complex;
mod hole;
pub mod io;

use thiserror::Error;

use crate::graph::{Edge, VertexId};

pub use builders::{grid_disc, identify_face_graph, rectangular_torus, BoundaryMatching};
pub use complex::{build_complex, Face, GridProvenance, SurfaceComplex, TorusComplex};
pub use hole::{cut_hole, cut_holes, disc_boundary, ClosedWalk, DiscMap, HoledTorus, TorusWithHole};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("face {face} repeats a corner")]
    LoopEdge { face: usize },
    #[error("face {face} duplicates an earlier face")]
    DuplicateFace { face: usize },
    #[error("edge {edge} lies in more than two faces")]
    EdgeInThreeFaces { edge: Edge },
    #[error("face references an edge missing from the graph")]
    NonSimple,
    #[error("identification produces a non-simple quotient")]
    NonSimpleQuotient,
    #[error("boundary matching does not fit the disc boundary")]
    MismatchedBoundary,
    #[error("edge {edge} does not lie in exactly two faces")]
    NotClosedSurface { edge: Edge },
    #[error("complex is not connected")]
    NotConnected,
    #[error("vertex {vertex} has a disconnected link")]
    SingularVertex { vertex: VertexId },
    #[error("Euler characteristic {euler} is not that of a torus")]
    NotTorus { euler: i64 },
    #[error("faces cannot be oriented consistently")]
    NonOrientable,
    #[error("grid {rows}x{cols} is too small; both sides must be at least 3")]
    TooSmall { rows: usize, cols: usize },
    #[error("cochain is missing an edge or does not vanish around a face")]
    BadCochain,
    #[error("face set is empty or names a face not in the torus")]
    UnknownFace,
    #[error("disc faces are not connected across interior edges")]
    NotFaceConnected,
    #[error("face set is not a disc (Euler characteristic {euler})")]
    NotADisc { euler: i64 },
    #[error("seam {edge} does not lie between two disc faces")]
    InvalidSeam { edge: Edge },
    #[error("holes overlap or share an edge")]
    OverlappingHoles,
    #[error("rebuilt boundary walk differs from the requested one")]
    WalkMismatch,
    #[error("boundary walk does not close up in homology")]
    NonTrivialWalk,
}
