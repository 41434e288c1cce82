//! (3,6)-sparsity and tightness with violating-subgraph certificates.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flow::{FlowNetwork, INF};
use crate::graph::{Graph, VertexId};
use crate::surface::TorusWithHole;

/// Largest graph the exhaustive oracle accepts.
pub const BRUTE_FORCE_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SparsityError {
    #[error("graph has {0} vertices; at least 3 are needed")]
    TooFewVertices(usize),
    #[error("graph has {0} vertices; the exhaustive check handles at most {BRUTE_FORCE_LIMIT}")]
    TooLarge(usize),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Tight,
    SparseNotTight,
    Violation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparsityVerdict {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<BTreeSet<VertexId>>,
}

impl SparsityVerdict {
    pub fn is_tight(&self) -> bool {
        self.status == Status::Tight
    }

    fn clean(g: &Graph) -> Self {
        let status = if g.freedom() == 6 { Status::Tight } else { Status::SparseNotTight };
        SparsityVerdict { status, witness: None }
    }
}

/// `|E(G[S])| - 3|S|`; a set with at least 3 vertices violates sparsity when this exceeds -6.
pub fn excess(g: &Graph, s: &BTreeSet<VertexId>) -> i64 {
    let inside = s.iter().map(|&v| g.neighbors(v).filter(|w| s.contains(w)).count()).sum::<usize>() / 2;
    inside as i64 - 3 * s.len() as i64
}

pub fn is_violating(g: &Graph, s: &BTreeSet<VertexId>) -> bool {
    s.len() >= 3 && excess(g, s) > -6
}

/// Tie-breaking among vertex sets of equal excess.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Prefer {
    Larger,
    Smaller,
}

/// Maximizes `|E(G[S])| - 3|S|` over vertex sets containing `forced`, by a project-selection
/// min cut: every edge earns one unit and needs both endpoints, every vertex costs three.
pub fn densest_containing(g: &Graph, forced: &[VertexId], prefer: Prefer) -> (i64, BTreeSet<VertexId>) {
    let verts: Vec<VertexId> = g.vertices().collect();
    let index = g.dense_index();
    let edges: Vec<_> = g.edges().collect();
    let n = verts.len();
    // scale so that the vertex-count tie break never outweighs one unit of excess
    let m = n as i64 + 1;
    let vertex_cost = match prefer {
        Prefer::Larger => 3 * m - 1,
        Prefer::Smaller => 3 * m + 1,
    };
    let (source, sink) = (0, 1);
    let mut net = FlowNetwork::new(2 + edges.len() + n);
    let vnode = |v: VertexId| 2 + edges.len() + index[&v];
    for (k, e) in edges.iter().enumerate() {
        let (a, b) = e.endpoints();
        net.add_arc(source, 2 + k, m);
        net.add_arc(2 + k, vnode(a), INF);
        net.add_arc(2 + k, vnode(b), INF);
    }
    for &v in &verts {
        net.add_arc(vnode(v), sink, vertex_cost);
    }
    for &v in forced {
        net.add_arc(source, vnode(v), INF);
    }
    net.max_flow(source, sink);
    let side = net.source_side(source);
    let chosen: BTreeSet<VertexId> = verts.iter().copied().filter(|&v| side[vnode(v)]).collect();
    (excess(g, &chosen), chosen)
}

/// Edges lying in some violating set, one min cut per edge.
fn violating_edges(g: &Graph, all: bool) -> Vec<(VertexId, VertexId)> {
    let edges: Vec<_> = g.edges().collect();
    let test = |e: &crate::graph::Edge| {
        let (u, v) = e.endpoints();
        let (_, s) = densest_containing(g, &[u, v], Prefer::Larger);
        is_violating(g, &s).then_some((u, v))
    };
    if all {
        edges.par_iter().filter_map(test).collect()
    } else {
        edges.par_iter().map(test).find_first(|r| r.is_some()).flatten().into_iter().collect()
    }
}

/// Decides (3,6)-sparsity and tightness. A violation comes with the witness of largest
/// excess, then fewest vertices, then lexicographically least.
pub fn check_3_6(g: &Graph) -> Result<SparsityVerdict, SparsityError> {
    let n = g.vertex_count();
    if n < 3 {
        return Err(SparsityError::TooFewVertices(n));
    }
    let hits = violating_edges(g, true);
    if hits.is_empty() {
        return Ok(SparsityVerdict::clean(g));
    }
    // every optimal witness is the least densest set through one of its triples
    let triples: Vec<[VertexId; 3]> = hits
        .iter()
        .flat_map(|&(u, v)| g.vertices().filter(move |&w| w != u && w != v).map(move |w| [u, v, w]))
        .collect();
    let witness = triples
        .par_iter()
        .filter_map(|t| {
            let (p, s) = densest_containing(g, t, Prefer::Smaller);
            is_violating(g, &s).then_some((std::cmp::Reverse(p), s.len(), s))
        })
        .min()
        .map(|(_, _, s)| s)
        .expect("a violating set through the edge exists");
    Ok(SparsityVerdict { status: Status::Violation, witness: Some(witness) })
}

/// Exhaustive reference check over every vertex subset.
pub fn brute_force_3_6(g: &Graph) -> Result<SparsityVerdict, SparsityError> {
    let n = g.vertex_count();
    if n < 3 {
        return Err(SparsityError::TooFewVertices(n));
    }
    if n > BRUTE_FORCE_LIMIT {
        return Err(SparsityError::TooLarge(n));
    }
    let verts: Vec<VertexId> = g.vertices().collect();
    let index = g.dense_index();
    let masks: Vec<u32> = g
        .edges()
        .map(|e| {
            let (a, b) = e.endpoints();
            (1 << index[&a]) | (1 << index[&b])
        })
        .collect();
    let mut best: Option<(i64, u32, Vec<VertexId>)> = None;
    for set in 0u32..(1 << n) {
        let size = set.count_ones();
        if size < 3 {
            continue;
        }
        let inside = masks.iter().filter(|&&m| m & set == m).count() as i64;
        let p = inside - 3 * size as i64;
        if p <= -6 || best.as_ref().is_some_and(|(bp, bsize, _)| (p, std::cmp::Reverse(size)) < (*bp, std::cmp::Reverse(*bsize))) {
            continue;
        }
        let members: Vec<VertexId> = (0..n).filter(|i| set & (1 << i) != 0).map(|i| verts[i]).collect();
        let better = match &best {
            None => true,
            Some((bp, bsize, bset)) => p > *bp || size < *bsize || members < *bset,
        };
        if better {
            best = Some((p, size, members));
        }
    }
    Ok(match best {
        None => SparsityVerdict::clean(g),
        Some((_, _, set)) => SparsityVerdict { status: Status::Violation, witness: Some(set.into_iter().collect()) },
    })
}

/// Membership in the class of (3,6)-tight torus graphs with a single hole.
pub fn is_in_t(g: &TorusWithHole) -> bool {
    is_tight(g.graph())
}

/// Tightness without computing a witness.
pub fn is_tight(g: &Graph) -> bool {
    g.vertex_count() >= 3 && g.freedom() == 6 && violating_edges(g, false).is_empty()
}
