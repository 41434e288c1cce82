//! Greedy contraction sequences and reduction trees mixing contractions with fissions.

use serde::Serialize;

use super::cycles::{critical, find_critical_cycle_through, SeparatingCycle};
use super::fission::{fission, Fission};
use super::moves::{classify_edge, contract, contractible_edges, is_uncontractible, EdgeClass};
use super::ReductionError;
use crate::graph::{Edge, Graph, VertexId};
use crate::sparsity::is_in_t;
use crate::surface::{DiscMap, TorusWithHole};

/// One contraction of a greedy sequence, with the graph it was applied to.
#[derive(Clone, Debug)]
pub struct ContractionStep {
    pub edge: Edge,
    pub before: Graph,
}

#[derive(Clone, Debug)]
pub struct GreedyReduction {
    pub steps: Vec<ContractionStep>,
    pub leaf: TorusWithHole,
}

/// Repeatedly contracts the smallest contractible edge whose contraction stays tight.
pub fn reduce_greedy(g: &TorusWithHole) -> Result<GreedyReduction, ReductionError> {
    if !is_in_t(g) {
        return Err(ReductionError::NotInT);
    }
    let mut current = g.clone();
    let mut steps = Vec::new();
    loop {
        let edges = contractible_edges(&current);
        if edges.is_empty() {
            return Ok(GreedyReduction { steps, leaf: current });
        }
        let (edge, next) = first_tight_contraction(&current, &edges)?;
        steps.push(ContractionStep { edge, before: current.graph().clone() });
        current = next;
    }
}

fn first_tight_contraction(g: &TorusWithHole, edges: &[Edge]) -> Result<(Edge, TorusWithHole), ReductionError> {
    for &e in edges {
        let next = contract(g, e)?;
        if is_in_t(&next) {
            return Ok((e, next));
        }
    }
    Err(ReductionError::StuckButContractible)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum Move {
    /// `fallback` marks a contraction chosen because no reducing fission was found at the
    /// node's first contractible edge.
    Contraction { edge: Edge, fallback: bool },
    Fission { index: usize, cycle: Vec<VertexId> },
}

#[derive(Clone, Debug)]
pub struct ReductionNode {
    pub graph: TorusWithHole,
    /// The move applied here; `None` at leaves.
    pub step: Option<Move>,
    pub children: Vec<ReductionNode>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TreeStats {
    pub nodes: usize,
    pub leaves: usize,
    pub contractions: usize,
    pub fissions: usize,
    pub fallbacks: usize,
    pub depth: usize,
}

#[derive(Clone, Debug)]
pub struct ReductionTree {
    pub root: ReductionNode,
}

impl ReductionNode {
    fn visit<'a>(&'a self, depth: usize, f: &mut impl FnMut(&'a ReductionNode, usize)) {
        f(self, depth);
        for c in &self.children {
            c.visit(depth + 1, f);
        }
    }
}

impl ReductionTree {
    pub fn leaves(&self) -> Vec<&TorusWithHole> {
        let mut out = Vec::new();
        self.root.visit(0, &mut |n, _| {
            if n.children.is_empty() {
                out.push(&n.graph);
            }
        });
        out
    }

    /// Every fission node with its two children.
    pub fn fissions(&self) -> Vec<&ReductionNode> {
        let mut out = Vec::new();
        self.root.visit(0, &mut |n, _| {
            if matches!(n.step, Some(Move::Fission { .. })) {
                out.push(n);
            }
        });
        out
    }

    pub fn stats(&self) -> TreeStats {
        let mut s = TreeStats::default();
        self.root.visit(0, &mut |n, depth| {
            s.nodes += 1;
            s.depth = s.depth.max(depth);
            match &n.step {
                None => s.leaves += 1,
                Some(Move::Contraction { fallback, .. }) => {
                    s.contractions += 1;
                    s.fallbacks += usize::from(*fallback);
                }
                Some(Move::Fission { .. }) => s.fissions += 1,
            }
        });
        s
    }
}

/// What to do at a node whose first contractible edge leaves the class.
enum Plan {
    Fission(Box<Fission>),
    Contract(Edge),
}

fn is_reducing(g: &TorusWithHole, f: &Fission) -> bool {
    !f.inner.interior_vertices().is_empty() && f.outer.graph().vertex_count() < g.graph().vertex_count()
}

/// Looks for a fission that makes both sides smaller, starting from a critical cycle through
/// `e` and moving to cycles closer to the hole while the inside has no interior vertex.
fn plan_at(g: &TorusWithHole, e: Edge) -> Option<Plan> {
    let mut cycle = find_critical_cycle_through(g, e).ok()?;
    let hole = g.disc();
    for _ in 0..g.torus().faces().len() {
        let f = fission(g, &cycle).ok()?;
        if is_reducing(g, &f) {
            return Some(Plan::Fission(Box::new(f)));
        }
        let between = |face: usize| cycle.disc.contains(face) && g.is_retained(face);
        let candidates: Vec<Edge> = g
            .graph()
            .edges()
            .filter(|&e2| {
                let faces = g.torus().complex().faces_of(e2);
                faces.len() == 2 && faces.iter().all(|&x| between(x))
            })
            .filter(|&e2| classify_edge(g, e2) == Ok(EdgeClass::FfContractible))
            .collect();
        let mut next: Option<SeparatingCycle> = None;
        for e2 in candidates {
            if contract(g, e2).is_ok_and(|c| is_in_t(&c)) {
                return Some(Plan::Contract(e2));
            }
            let Ok(c2) = find_critical_cycle_through(g, e2) else { continue };
            let meet: Vec<usize> = cycle.disc.faces().iter().copied().filter(|&x| c2.disc.contains(x)).collect();
            let meet = DiscMap::new(meet).with_seams(hole.seams().iter().copied());
            let smaller = [critical(g, meet, None), Some(c2)]
                .into_iter()
                .flatten()
                .find(|c| c.disc.faces().len() < cycle.disc.faces().len());
            if let Some(c) = smaller {
                next = Some(c);
                break;
            }
        }
        cycle = next?;
    }
    None
}

fn build(g: TorusWithHole) -> Result<ReductionNode, ReductionError> {
    let edges = contractible_edges(&g);
    let Some(&first) = edges.first() else {
        return Ok(ReductionNode { graph: g, step: None, children: Vec::new() });
    };
    let next = contract(&g, first)?;
    if is_in_t(&next) {
        let child = build(next)?;
        let step = Some(Move::Contraction { edge: first, fallback: false });
        return Ok(ReductionNode { graph: g, step, children: vec![child] });
    }
    match plan_at(&g, first) {
        Some(Plan::Fission(f)) => {
            let Fission { cycle, index, inner, outer } = *f;
            let (a, b) = rayon::join(|| build(inner), || build(outer));
            let step = Some(Move::Fission { index, cycle: cycle.walk.vertices().to_vec() });
            Ok(ReductionNode { graph: g, step, children: vec![a?, b?] })
        }
        Some(Plan::Contract(e)) => {
            let child = build(contract(&g, e)?)?;
            let step = Some(Move::Contraction { edge: e, fallback: false });
            Ok(ReductionNode { graph: g, step, children: vec![child] })
        }
        None => {
            let (e, next) = first_tight_contraction(&g, &edges)?;
            let child = build(next)?;
            let step = Some(Move::Contraction { edge: e, fallback: true });
            Ok(ReductionNode { graph: g, step, children: vec![child] })
        }
    }
}

/// Builds a reduction tree. At each node the smallest contractible edge is contracted when
/// that stays tight; otherwise the node splits by a reducing fission at a critical cycle
/// through that edge, falling back to the smallest tight contraction.
pub fn reduction_tree(g: &TorusWithHole) -> Result<ReductionTree, ReductionError> {
    if !is_in_t(g) {
        return Err(ReductionError::NotInT);
    }
    Ok(ReductionTree { root: build(g.clone())? })
}

/// Re-checks every node: tightness, each move against a recomputation, and leaves.
pub fn validate_tree(tree: &ReductionTree) -> Result<(), ReductionError> {
    let mut nodes = Vec::new();
    tree.root.visit(0, &mut |n, _| nodes.push(n));
    for n in nodes {
        if !is_in_t(&n.graph) || n.graph.freedom() != 6 {
            return Err(ReductionError::NotInT);
        }
        match &n.step {
            None => {
                if !is_uncontractible(&n.graph) {
                    return Err(ReductionError::ReplayMismatch("leaf has a contractible edge".into()));
                }
            }
            Some(Move::Contraction { edge, .. }) => {
                let again = contract(&n.graph, *edge)?;
                if n.children.len() != 1 || again.graph() != n.children[0].graph.graph() {
                    return Err(ReductionError::ReplayMismatch(format!("contraction of {edge} differs")));
                }
            }
            Some(Move::Fission { .. }) => {
                let [inner, outer] = &n.children[..] else {
                    return Err(ReductionError::ReplayMismatch("fission needs two children".into()));
                };
                let size = n.graph.graph().vertex_count();
                if !inner.graph.graph().is_subgraph_of(n.graph.graph())
                    || inner.graph.graph().vertex_count() >= size
                    || outer.graph.graph().vertex_count() >= size
                {
                    return Err(ReductionError::ReplayMismatch("fission does not reduce".into()));
                }
            }
        }
    }
    Ok(())
}
