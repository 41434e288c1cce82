//! Edge classification, edge contraction and its inverse, vertex splitting.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::ReductionError;
use crate::graph::{Edge, Graph, VertexId};
use crate::homology::{EdgeCochain, Z2Vector};
use crate::surface::{build_complex, cut_hole, DiscMap, Face, TorusComplex, TorusWithHole};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum EdgeClass {
    /// The edge lies in fewer than two retained faces.
    Boundary,
    /// Both incident faces are retained and every 3-cycle through the edge is facial.
    FfContractible,
    /// Both incident faces are retained but `apex` closes a nonfacial 3-cycle.
    FfBlocked { apex: VertexId },
}

pub fn classify_edge(g: &TorusWithHole, e: Edge) -> Result<EdgeClass, ReductionError> {
    let (u, v) = e.endpoints();
    if !g.graph().has_edge(u, v) {
        return Err(ReductionError::UnknownEdge(e));
    }
    if g.retained_faces_of(e) < 2 {
        return Ok(EdgeClass::Boundary);
    }
    let facial: BTreeSet<VertexId> = g.retained_faces().filter_map(|f| f.opposite(e)).collect();
    match g.graph().common_neighbors(u, v).into_iter().find(|w| !facial.contains(w)) {
        Some(apex) => Ok(EdgeClass::FfBlocked { apex }),
        None => Ok(EdgeClass::FfContractible),
    }
}

/// Contractible edges in increasing order.
pub fn contractible_edges(g: &TorusWithHole) -> Vec<Edge> {
    g.graph()
        .edges()
        .filter(|&e| classify_edge(g, e) == Ok(EdgeClass::FfContractible))
        .collect()
}

pub fn is_uncontractible(g: &TorusWithHole) -> bool {
    contractible_edges(g).is_empty()
}

/// Contracts a contractible edge, merging the larger endpoint into the smaller one. The two
/// faces on the edge disappear and the boundary walk is renamed.
pub fn contract(g: &TorusWithHole, e: Edge) -> Result<TorusWithHole, ReductionError> {
    if classify_edge(g, e)? != EdgeClass::FfContractible {
        return Err(ReductionError::NotContractible(e));
    }
    let (u, v) = e.endpoints();
    let rename = |x: VertexId| if x == v { u } else { x };
    let faces: Vec<Face> = g
        .retained_faces()
        .filter(|f| !(f.contains(u) && f.contains(v)))
        .map(|f| f.map(rename).expect("only the two faces on the edge degenerate"))
        .collect();
    let walk = g.detachment_walk().map(rename);
    let cochain = g.graph_cochain().map(|c| {
        let uv = c.value(u, v).expect("cochain covers the graph");
        let mut out = EdgeCochain::default();
        for (edge, val) in c.entries() {
            let (a, b) = edge.endpoints();
            if edge == e {
                continue;
            }
            match (a == v, b == v) {
                (true, _) => out.set(u, b, uv + val),
                (_, true) => out.set(a, u, val - uv),
                _ => out.set(a, b, val),
            }
        }
        out
    });
    Ok(TorusWithHole::from_parts(&faces, &walk, cochain.as_ref())?)
}

/// Splits `v1` into `v1` and a new vertex `v0`: the edges from `v1` to `moved` are
/// transferred to `v0`, and `v0` is joined to `v1` and both anchors.
pub fn vertex_split(
    g: &Graph,
    v1: VertexId,
    anchors: [VertexId; 2],
    moved: &BTreeSet<VertexId>,
    v0: VertexId,
) -> Result<Graph, ReductionError> {
    let [v2, v3] = anchors;
    let neighbour = |w: VertexId| w != v1 && g.has_edge(v1, w);
    if g.contains_vertex(v0) || v2 == v3 || !neighbour(v2) || !neighbour(v3) {
        return Err(ReductionError::InvalidAnchors);
    }
    let mut out = g.clone();
    for &t in moved {
        let old = Edge::new(v1, t).ok_or(ReductionError::InvalidAnchors)?;
        if t == v2 || t == v3 || !g.has_edge(v1, t) {
            return Err(ReductionError::NotAnEdge(old));
        }
        out.remove_edge(old);
        out.add_edge(Edge::new(v0, t).expect("v0 is fresh"));
    }
    for w in [v1, v2, v3] {
        out.add_edge(Edge::new(v0, w).expect("v0 is fresh"));
    }
    Ok(out)
}

/// Vertex split respecting the facial structure: the faces around `u` on the side of the
/// anchors holding `moved` pass to `v`, and the faces `u v x`, `u v y` are added. Inverse
/// to [`contract`]. When both sides carry the same graph neighbours the shorter side is
/// used.
pub fn split_facial(
    g: &TorusWithHole,
    u: VertexId,
    anchors: [VertexId; 2],
    moved: &BTreeSet<VertexId>,
    v: VertexId,
) -> Result<TorusWithHole, ReductionError> {
    let [x, y] = anchors;
    // vertex_split validates anchors and the moved set against the graph
    let target = vertex_split(g.graph(), u, anchors, moved, v)?;
    let t = g.torus();
    let max = t.complex().vertices().iter().chain([&v]).map(|w| w.0).max().unwrap_or(0);
    // a hidden hole vertex may carry the requested id
    let hide = |w: VertexId| if w == v { VertexId(max + 1) } else { w };

    let rot = t.rotation(u);
    let k = rot.len();
    let pos = |w: VertexId| rot.iter().position(|&r| r == w).ok_or(ReductionError::InvalidAnchors);
    let (a, b) = (pos(x)?, pos(y)?);
    let arc = |from: usize, to: usize| -> Vec<VertexId> {
        let len = (to + k - from) % k;
        (0..=len).map(|i| rot[(from + i) % k]).collect()
    };
    let on_graph = |side: &[VertexId]| -> BTreeSet<VertexId> {
        side[1..side.len() - 1].iter().copied().filter(|&w| g.graph().has_edge(u, w)).collect()
    };
    let (one, two) = (arc(a, b), arc(b, a));
    let side = match (on_graph(&one) == *moved, on_graph(&two) == *moved) {
        (true, true) => {
            if one.len() <= two.len() {
                one
            } else {
                two
            }
        }
        (true, false) => one,
        (false, true) => two,
        (false, false) => return Err(ReductionError::InvalidAnchors),
    };
    let wedge: BTreeSet<[VertexId; 2]> = side.windows(2).map(|p| [p[0], p[1]]).collect();
    let in_wedge = |f: &Face| {
        let others: Vec<VertexId> = f.corners().into_iter().filter(|&c| c != u).collect();
        f.contains(u) && (wedge.contains(&[others[0], others[1]]) || wedge.contains(&[others[1], others[0]]))
    };

    let old: Vec<Face> = t.faces().to_vec();
    let mut faces: Vec<[VertexId; 3]> = old
        .iter()
        .map(|f| {
            let f2 = f.map(hide).expect("renaming is injective");
            if in_wedge(f) {
                f2.map(|c| if c == u { v } else { c }).expect("v is fresh").corners()
            } else {
                f2.corners()
            }
        })
        .collect();
    faces.push([u, v, x]);
    faces.push([u, y, v]);
    let complex = build_complex(faces.iter().copied())?;
    let mut torus = TorusComplex::new(complex)?;
    if let Some(c) = t.cochain() {
        let mut out = EdgeCochain::default();
        for (i, f) in old.iter().enumerate() {
            let newf = torus.complex().face(i);
            for (p, q) in f.sides() {
                let val = c.value(p, q).expect("cochain covers the torus");
                let map = |w: VertexId| {
                    let w = hide(w);
                    if w == u && in_wedge(f) {
                        v
                    } else {
                        w
                    }
                };
                debug_assert!(newf.contains(map(p)) && newf.contains(map(q)));
                out.set(map(p), map(q), val);
            }
        }
        out.set(u, v, Z2Vector::ZERO);
        torus = torus.with_cochain(out)?;
    }
    // a seam on an anchor edge was created by the contraction; the new face [u v x] now
    // separates its two hole faces, so it is dropped
    let seams = g.disc().seams().iter().filter_map(|s| {
        let pair = t.complex().faces_of(*s);
        let (f1, f2) = (torus.complex().face(pair[0]), torus.complex().face(pair[1]));
        let shared: Vec<VertexId> = f1.corners().into_iter().filter(|c| f2.contains(*c)).collect();
        match shared[..] {
            [a, b] => Edge::new(a, b),
            _ => None,
        }
    });
    let disc = DiscMap::new(g.disc().faces().iter().copied()).with_seams(seams.collect::<Vec<_>>());
    let out = cut_hole(&torus, disc)?;
    if out.graph() != &target {
        return Err(ReductionError::InvalidAnchors);
    }
    Ok(out)
}
