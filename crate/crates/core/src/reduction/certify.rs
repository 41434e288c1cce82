//! Vertex-splitting certificates: a construction of `G` from `K3`, read off a greedy
//! contraction sequence, and an independent replay.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::moves::vertex_split;
use super::tree::reduce_greedy;
use super::ReductionError;
use crate::graph::{find_isomorphism, Edge, Graph, VertexId};
use crate::rigidity::generic_rank;
use crate::sparsity::check_3_6;
use crate::surface::TorusWithHole;

/// Split `vertex`, creating `new_vertex` joined to it and to both anchors; the edges from
/// `vertex` to `moved` pass to `new_vertex`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitStep {
    pub vertex: VertexId,
    pub new_vertex: VertexId,
    pub anchors: [VertexId; 2],
    pub moved: Vec<VertexId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    /// The triangle the construction starts from.
    pub base: [VertexId; 3],
    pub steps: Vec<SplitStep>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReplayReport {
    #[serde(skip)]
    pub graph: Graph,
    /// Generic rank after the triangle and after each split.
    pub ranks: Vec<usize>,
}

/// `K3 -> K4 -> K5` minus an edge on abstract labels `0..5`.
fn base_chain() -> ([VertexId; 3], Vec<SplitStep>) {
    let v = VertexId;
    let steps = vec![
        SplitStep { vertex: v(0), new_vertex: v(3), anchors: [v(1), v(2)], moved: vec![] },
        SplitStep { vertex: v(0), new_vertex: v(4), anchors: [v(1), v(2)], moved: vec![v(3)] },
    ];
    ([v(0), v(1), v(2)], steps)
}

fn triangle(base: [VertexId; 3]) -> Graph {
    let [a, b, c] = base;
    Graph::from_edges([(a, b), (b, c), (a, c)].into_iter().filter_map(|(x, y)| Edge::new(x, y)))
}

fn apply(g: &Graph, s: &SplitStep) -> Result<Graph, ReductionError> {
    let moved: BTreeSet<VertexId> = s.moved.iter().copied().collect();
    vertex_split(g, s.vertex, s.anchors, &moved, s.new_vertex)
}

/// A certificate that `G` is built from `K3` by vertex splits: the base chain up to the
/// uncontractible leaf of a greedy reduction, then the contractions undone in reverse.
pub fn certify(g: &TorusWithHole) -> Result<Certificate, ReductionError> {
    let reduction = reduce_greedy(g)?;
    let leaf = reduction.leaf.graph();
    let (base, chain) = base_chain();
    let keep = match leaf.vertex_count() {
        4 => 1,
        5 => 2,
        n => return Err(ReductionError::ReplayMismatch(format!("leaf has {n} vertices"))),
    };
    let mut model = triangle(base);
    for s in &chain[..keep] {
        model = apply(&model, s)?;
    }
    let phi: BTreeMap<VertexId, VertexId> = find_isomorphism(&model, leaf)
        .ok_or_else(|| ReductionError::ReplayMismatch("leaf is not K4 or K5 minus an edge".into()))?;
    let f = |w: VertexId| phi[&w];
    let mut steps: Vec<SplitStep> = chain[..keep]
        .iter()
        .map(|s| SplitStep {
            vertex: f(s.vertex),
            new_vertex: f(s.new_vertex),
            anchors: s.anchors.map(f),
            moved: s.moved.iter().copied().map(f).collect(),
        })
        .collect();
    for step in reduction.steps.iter().rev() {
        let (u, v) = step.edge.endpoints();
        let apexes = step.before.common_neighbors(u, v);
        let [x, y] = apexes[..] else {
            return Err(ReductionError::ReplayMismatch(format!("edge {} has {} apexes", step.edge, apexes.len())));
        };
        let moved = step.before.neighbors(v).filter(|&t| t != u && t != x && t != y).collect();
        steps.push(SplitStep { vertex: u, new_vertex: v, anchors: [x, y], moved });
    }
    Ok(Certificate { base: base.map(f), steps })
}

/// Replays a certificate from its triangle, requiring every intermediate graph to be
/// (3,6)-tight and every split to raise the generic rank by exactly 3.
pub fn replay(cert: &Certificate, trials: usize, seed: u64) -> Result<ReplayReport, ReductionError> {
    let mut g = triangle(cert.base);
    if g.edge_count() != 3 {
        return Err(ReductionError::ReplayMismatch("base is not a triangle".into()));
    }
    let mut ranks = vec![generic_rank(&g, trials, seed)];
    for (i, s) in cert.steps.iter().enumerate() {
        g = apply(&g, s)?;
        if !check_3_6(&g)?.is_tight() {
            return Err(ReductionError::ReplayMismatch(format!("step {} is not tight", i + 1)));
        }
        let rank = generic_rank(&g, trials, seed);
        let prev = *ranks.last().expect("ranks start with the base");
        if rank != prev + 3 {
            return Err(ReductionError::ReplayMismatch(format!("step {} raises the rank by {}", i + 1, rank as i64 - prev as i64)));
        }
        ranks.push(rank);
    }
    Ok(ReplayReport { graph: g, ranks })
}
