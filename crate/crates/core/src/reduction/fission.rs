//! Fission: replace the inside of a critical cycle by the catalog graph of the same form.

use std::collections::BTreeMap;

use super::cycles::{divide, SeparatingCycle};
use super::ReductionError;
use crate::catalog::{catalog, form_index};
use crate::graph::{Edge, VertexId};
use crate::sparsity::is_in_t;
use crate::surface::{Face, TorusWithHole};

#[derive(Clone, Debug)]
pub struct Fission {
    pub cycle: SeparatingCycle,
    /// Catalog index (1-based) of the graph substituted for the inside.
    pub index: usize,
    /// `G1`, the graph left after cutting out the enlarged disc.
    pub inner: TorusWithHole,
    /// `G2`, the annulus with `H_i` glued along the cycle.
    pub outer: TorusWithHole,
}

/// Vertex maps carrying the walk of `H` onto `target`, over the walk's symmetries.
fn alignments(h: &TorusWithHole, target: &[VertexId]) -> Vec<BTreeMap<VertexId, VertexId>> {
    h.detachment_walk()
        .dihedral_images()
        .into_iter()
        .filter_map(|image| {
            let mut map = BTreeMap::new();
            for (&a, &b) in image.vertices().iter().zip(target) {
                if *map.entry(a).or_insert(b) != b {
                    return None;
                }
            }
            let mut seen: Vec<VertexId> = map.values().copied().collect();
            seen.sort();
            seen.dedup();
            (seen.len() == map.len()).then_some(map)
        })
        .collect()
}

/// Divides `G` at a critical cycle and substitutes the catalog graph for `G1`. Both results
/// are checked to be simple and (3,6)-tight.
pub fn fission(g: &TorusWithHole, cycle: &SeparatingCycle) -> Result<Fission, ReductionError> {
    let division = divide(g, cycle)?;
    if !is_in_t(&division.inner) {
        return Err(ReductionError::InvalidCycle("the cycle is not critical".into()));
    }
    let index = form_index(&cycle.walk).ok_or(ReductionError::NoMatchingCatalogGraph)?;
    let h = &catalog()[index - 1];
    let annulus_faces: Vec<Face> = g
        .retained_face_indices()
        .filter(|&f| cycle.disc.contains(f))
        .map(|f| g.torus().complex().face(f))
        .collect();
    let cycle_edges = cycle.walk.distinct_edges();

    let mut reason = String::from("no alignment of the catalog walk");
    for map in alignments(h, cycle.walk.vertices()) {
        let phi = |w: VertexId| map.get(&w).copied();
        let mut faces = annulus_faces.clone();
        let mut ok = true;
        for f in h.retained_faces() {
            match f.corners().map(phi) {
                [Some(a), Some(b), Some(c)] => faces.push(Face::new(a, b, c).expect("map is injective")),
                _ => ok = false,
            }
        }
        if !ok {
            reason = format!("catalog graph {index} has vertices off its boundary");
            continue;
        }
        // edges of H_i inside the cycle must be new to the annulus
        let clash = h.graph().edges().any(|e| {
            let (a, b) = (phi(e.lo()).expect("mapped"), phi(e.hi()).expect("mapped"));
            let image = Edge::new(a, b).expect("map is injective");
            !cycle_edges.contains(&image) && division.annulus.has_edge(a, b)
        });
        if clash {
            reason = "substitution duplicates an annulus edge".into();
            continue;
        }
        let outer = match TorusWithHole::from_parts(&faces, g.detachment_walk(), None) {
            Ok(o) => o,
            Err(e) => {
                reason = e.to_string();
                continue;
            }
        };
        // the first structurally valid substitution is final
        if !is_in_t(&outer) {
            return Err(ReductionError::FissionFailed("substituted graph is not tight".into()));
        }
        return Ok(Fission { cycle: cycle.clone(), index, inner: division.inner, outer });
    }
    Err(ReductionError::FissionFailed(reason))
}
