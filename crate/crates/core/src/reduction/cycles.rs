//! Critical separating cycles: a constructive search from a violating set of the contracted
//! graph, an exhaustive enlarged-disc oracle, and division at a cycle.

use std::collections::{BTreeSet, VecDeque};

use super::moves::{classify_edge, EdgeClass};
use super::ReductionError;
use crate::catalog::WALK_LENGTH;
use crate::graph::{Edge, Graph, VertexId};
use crate::sparsity::{densest_containing, excess, is_in_t, is_violating, Prefer};
use crate::surface::{cut_hole, disc_boundary, ClosedWalk, DiscMap, SurfaceError, TorusWithHole};

/// Most retained faces the exhaustive oracle will enumerate subsets of.
pub const EXHAUSTIVE_FACE_LIMIT: usize = 14;

/// The boundary of an enlarged disc `D1` containing the hole; `walk` is its detachment walk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatingCycle {
    pub disc: DiscMap,
    pub walk: ClosedWalk,
}

impl SeparatingCycle {
    /// The graph `G1` left after cutting the enlarged disc from the same torus.
    pub fn inner(&self, g: &TorusWithHole) -> Result<TorusWithHole, ReductionError> {
        Ok(cut_hole(g.torus(), self.disc.clone())?)
    }

    pub fn passes_through(&self, e: Edge) -> bool {
        self.walk.edges().any(|w| w == e)
    }
}

/// `D1` if it is a disc containing the hole whose boundary is a 9-walk through `e` (when
/// given) and whose complement is tight.
pub(crate) fn critical(g: &TorusWithHole, disc: DiscMap, e: Option<Edge>) -> Option<SeparatingCycle> {
    if !g.disc().faces().iter().all(|&f| disc.contains(f)) || disc.faces().len() == g.disc().faces().len() {
        return None;
    }
    let walk = disc_boundary(g.torus(), &disc).ok()?;
    if walk.len() != WALK_LENGTH || e.is_some_and(|e| !walk.edges().any(|w| w == e)) {
        return None;
    }
    let g1 = cut_hole(g.torus(), disc.clone()).ok()?;
    is_in_t(&g1).then_some(SeparatingCycle { disc, walk })
}

fn contracted_graph(g: &Graph, u: VertexId, v: VertexId) -> Graph {
    let mut out = Graph::new();
    for w in g.vertices().filter(|&w| w != v) {
        out.add_vertex(w);
    }
    for e in g.edges() {
        let (a, b) = e.endpoints();
        let r = |x: VertexId| if x == v { u } else { x };
        if let Some(e2) = Edge::new(r(a), r(b)) {
            out.add_edge(e2);
        }
    }
    out
}

/// Faces reachable from `start` without crossing an edge of `k` or entering `blocked`.
/// Faces of the hole are always mutually reachable.
fn region(g: &TorusWithHole, k: &Graph, start: usize, blocked: Option<usize>) -> BTreeSet<usize> {
    let complex = g.torus().complex();
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(f) = queue.pop_front() {
        for e in complex.face(f).edges() {
            let Some(next) = complex.across(f, e) else { continue };
            let (a, b) = e.endpoints();
            let both_hole = !g.is_retained(f) && !g.is_retained(next);
            if (k.has_edge(a, b) && !both_hole) || Some(next) == blocked || seen.contains(&next) {
                continue;
            }
            seen.insert(next);
            queue.push_back(next);
        }
    }
    seen
}

/// Seam choices tried for an enlarged disc: the hole's seams plus edges of `k` inside the
/// region, the hole's seams alone, and none.
fn seam_options(g: &TorusWithHole, k: &Graph, faces: &BTreeSet<usize>) -> Vec<BTreeSet<Edge>> {
    let complex = g.torus().complex();
    let inside: BTreeSet<Edge> = k
        .edges()
        .filter(|&e| complex.faces_of(e).iter().all(|f| faces.contains(f)))
        .collect();
    let base = g.disc().seams().clone();
    let mut out = vec![base.union(&inside).copied().collect(), base, BTreeSet::new()];
    out.dedup();
    out
}

/// Searches for a critical separating cycle through a contractible edge, starting from the
/// violating vertex sets of the contracted graph.
pub fn find_critical_cycle_through(g: &TorusWithHole, e: Edge) -> Result<SeparatingCycle, ReductionError> {
    if classify_edge(g, e)? != EdgeClass::FfContractible {
        return Err(ReductionError::NotContractible(e));
    }
    let (u, v) = e.endpoints();
    let complex = g.torus().complex();
    let pair: Vec<usize> = complex.faces_of(e).to_vec();
    let apex = |f: usize| complex.face(f).opposite(e).expect("face contains the edge");
    let (c, d) = (pair[0], pair[1]);
    let (x, y) = (apex(c), apex(d));

    let contracted = contracted_graph(g.graph(), u, v);
    let mut sets: Vec<BTreeSet<VertexId>> = Vec::new();
    for w in contracted.neighbors(u).collect::<Vec<_>>() {
        for prefer in [Prefer::Larger, Prefer::Smaller] {
            let (_, s) = densest_containing(&contracted, &[u, w], prefer);
            if is_violating(&contracted, &s) && !sets.contains(&s) {
                sets.push(s);
            }
        }
    }
    sets.sort_by_key(|s| (std::cmp::Reverse(excess(&contracted, s)), std::cmp::Reverse(s.len())));

    for mut s in sets {
        s.insert(v);
        let k = g.graph().induced(&s);
        let starts: Vec<(usize, Option<usize>)> = match (s.contains(&x), s.contains(&y)) {
            (true, true) => continue,
            (true, false) => vec![(d, None)],
            (false, true) => vec![(c, None)],
            (false, false) => vec![(d, Some(c)), (c, Some(d))],
        };
        let mut found: Vec<SeparatingCycle> = Vec::new();
        for (start, blocked) in starts {
            let faces = region(g, &k, start, blocked);
            for seams in seam_options(g, &k, &faces) {
                let disc = DiscMap::new(faces.iter().copied()).with_seams(seams);
                if let Some(cycle) = critical(g, disc, Some(e)) {
                    found.push(cycle);
                    break;
                }
            }
        }
        if let Some(best) = found.into_iter().min_by(|a, b| a.disc.faces().cmp(b.disc.faces())) {
            return Ok(best);
        }
    }
    Err(ReductionError::NoCriticalCycle(e))
}

/// Every critical separating cycle obtained by adding a set of retained faces to the hole.
/// Seams are the hole's own (or none), plus any choice of graph edges inside the enlarged
/// disc that brings the boundary to length 9. Exhaustive, so only for small graphs.
pub fn all_critical_cycles(g: &TorusWithHole) -> Result<Vec<SeparatingCycle>, ReductionError> {
    let retained: Vec<usize> = g.retained_face_indices().collect();
    if retained.len() > EXHAUSTIVE_FACE_LIMIT {
        return Err(ReductionError::TooLarge(retained.len()));
    }
    let mut seam_choices = vec![g.disc().seams().clone()];
    if !g.disc().seams().is_empty() {
        seam_choices.push(BTreeSet::new());
    }
    let complex = g.torus().complex();
    let mut out = Vec::new();
    for mask in 1u32..(1 << retained.len()) {
        let extra = (0..retained.len()).filter(|i| mask & (1 << i) != 0).map(|i| retained[i]);
        let faces: BTreeSet<usize> = g.disc().faces().iter().copied().chain(extra).collect();
        for base in &seam_choices {
            let disc = DiscMap::new(faces.iter().copied()).with_seams(base.iter().copied());
            // each further seam slits the disc and lengthens the boundary by two; slits can
            // also open an annulus into a disc
            let counts: Vec<usize> = match disc_boundary(g.torus(), &disc) {
                Ok(walk) if walk.len() <= WALK_LENGTH && (WALK_LENGTH - walk.len()).is_multiple_of(2) => {
                    vec![(WALK_LENGTH - walk.len()) / 2]
                }
                Err(SurfaceError::NotADisc { .. }) => (1..=3).collect(),
                _ => continue,
            };
            let cuts: Vec<Edge> = g
                .graph()
                .edges()
                .filter(|e| !base.contains(e) && complex.faces_of(*e).iter().all(|f| faces.contains(f)))
                .collect();
            for chosen in counts.into_iter().flat_map(|k| subsets(&cuts, k)) {
                let disc = DiscMap::new(faces.iter().copied()).with_seams(base.iter().copied().chain(chosen));
                if let Some(cycle) = critical(g, disc, None) {
                    out.push(cycle);
                }
            }
        }
    }
    Ok(out)
}

fn subsets(items: &[Edge], k: usize) -> Vec<Vec<Edge>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        for mut rest in subsets(&items[i + 1..], k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// The two sides of a separating cycle: `G1`, and the annulus between the cycle and the
/// hole, as an edge set.
#[derive(Clone, Debug)]
pub struct Division {
    pub inner: TorusWithHole,
    pub annulus: Graph,
}

/// Divides `G` along a separating cycle. The freedom numbers satisfy
/// `f(G) = f(G1) + f(annulus) - f(cycle)`.
pub fn divide(g: &TorusWithHole, cycle: &SeparatingCycle) -> Result<Division, ReductionError> {
    if !g.disc().faces().iter().all(|&f| cycle.disc.contains(f)) {
        return Err(ReductionError::InvalidCycle("enlarged disc must contain the hole".into()));
    }
    let inner = cycle.inner(g)?;
    if !inner.detachment_walk().same_cycle(&cycle.walk) {
        return Err(ReductionError::InvalidCycle("walk does not bound the disc".into()));
    }
    let mut annulus = Graph::from_edges(
        g.graph()
            .edges()
            .filter(|e| !inner.graph().has_edge(e.lo(), e.hi()))
            .chain(cycle.walk.edges()),
    );
    for &w in cycle.walk.vertices() {
        annulus.add_vertex(w);
    }
    let common = Graph::from_edges(cycle.walk.edges());
    if g.freedom() != inner.freedom() + annulus.freedom() - common.freedom() {
        return Err(ReductionError::InvalidCycle("freedom numbers do not add up".into()));
    }
    Ok(Division { inner, annulus })
}
