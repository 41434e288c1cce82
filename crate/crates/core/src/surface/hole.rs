use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::complex::{build_complex, Face, TorusComplex};
use super::SurfaceError;
use crate::graph::{Edge, Graph, VertexId};
use crate::homology::{EdgeCochain, Z2Vector};

/// A closed walk, stored as its cyclic vertex sequence `w_0 .. w_{n-1}`; the traversals are
/// `w_i -> w_{i+1}` with indices taken mod `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClosedWalk(Vec<VertexId>);

impl ClosedWalk {
    pub fn new(vertices: Vec<VertexId>) -> Self {
        ClosedWalk(vertices)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn traversals(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        let n = self.0.len();
        (0..n).map(move |i| (self.0[i], self.0[(i + 1) % n]))
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.traversals().map(|(a, b)| Edge::new(a, b).expect("walk steps join distinct vertices"))
    }

    pub fn distinct_vertices(&self) -> BTreeSet<VertexId> {
        self.0.iter().copied().collect()
    }

    pub fn distinct_edges(&self) -> BTreeSet<Edge> {
        self.edges().collect()
    }

    /// The walk started at position `k`.
    pub fn rotated(&self, k: usize) -> ClosedWalk {
        let n = self.0.len();
        if n == 0 {
            return self.clone();
        }
        ClosedWalk((0..n).map(|i| self.0[(i + k) % n]).collect())
    }

    /// The walk traversed backwards, still starting at `w_0`.
    pub fn reversed(&self) -> ClosedWalk {
        let n = self.0.len();
        ClosedWalk((0..n).map(|i| self.0[(n - i) % n]).collect())
    }

    /// All rotations and reflections, rotations first.
    pub fn dihedral_images(&self) -> Vec<ClosedWalk> {
        let n = self.0.len();
        let rev = self.reversed();
        (0..n).map(|k| self.rotated(k)).chain((0..n).map(|k| rev.rotated(k))).collect()
    }

    /// Equal up to rotation and reversal.
    pub fn same_cycle(&self, other: &ClosedWalk) -> bool {
        self.len() == other.len() && self.dihedral_images().iter().any(|w| w == other)
    }

    pub fn map(&self, f: impl Fn(VertexId) -> VertexId) -> ClosedWalk {
        ClosedWalk(self.0.iter().map(|&v| f(v)).collect())
    }
}

impl fmt::Display for ClosedWalk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(" "))
    }
}

/// Faces of a torus forming an embedded triangulated disc.
///
/// Two disc faces sharing a torus edge are glued along it unless the edge is listed as a
/// seam, in which case the disc boundary runs along that edge twice.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscMap {
    faces: Vec<usize>,
    seams: BTreeSet<Edge>,
}

impl DiscMap {
    pub fn new(faces: impl IntoIterator<Item = usize>) -> Self {
        let mut faces: Vec<usize> = faces.into_iter().collect();
        faces.sort_unstable();
        faces.dedup();
        DiscMap { faces, seams: BTreeSet::new() }
    }

    pub fn with_seams(mut self, seams: impl IntoIterator<Item = Edge>) -> Self {
        self.seams = seams.into_iter().collect();
        self
    }

    pub fn faces(&self) -> &[usize] {
        &self.faces
    }

    pub fn seams(&self) -> &BTreeSet<Edge> {
        &self.seams
    }

    pub fn contains(&self, face: usize) -> bool {
        self.faces.binary_search(&face).is_ok()
    }
}

struct DiscAnalysis {
    glued: BTreeSet<Edge>,
    walk: ClosedWalk,
    interior: BTreeSet<VertexId>,
}

struct Classes(Vec<usize>);

impl Classes {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn analyze(t: &TorusComplex, disc: &DiscMap) -> Result<DiscAnalysis, SurfaceError> {
    let complex = t.complex();
    let n = complex.face_count();
    if disc.faces.is_empty() || disc.faces.iter().any(|&f| f >= n) {
        return Err(SurfaceError::UnknownFace);
    }
    let local: BTreeMap<usize, usize> = disc.faces.iter().enumerate().map(|(k, &f)| (f, k)).collect();
    for &s in &disc.seams {
        let fs = complex.faces_of(s);
        if fs.len() != 2 || !fs.iter().all(|f| local.contains_key(f)) {
            return Err(SurfaceError::InvalidSeam { edge: s });
        }
    }
    let mut glued = BTreeSet::new();
    for &f in &disc.faces {
        for e in complex.face(f).edges() {
            let both = complex.faces_of(e).iter().all(|g| local.contains_key(g));
            if both && !disc.seams.contains(&e) {
                glued.insert(e);
            }
        }
    }

    // adjacency through glued edges
    let mut seen = vec![false; disc.faces.len()];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut reached = 1;
    while let Some(k) = queue.pop_front() {
        for e in complex.face(disc.faces[k]).edges() {
            if !glued.contains(&e) {
                continue;
            }
            let j = local[&complex.across(disc.faces[k], e).unwrap()];
            if !seen[j] {
                seen[j] = true;
                reached += 1;
                queue.push_back(j);
            }
        }
    }
    if reached != disc.faces.len() {
        return Err(SurfaceError::NotFaceConnected);
    }

    // disc vertices are classes of corners glued across interior edges
    let corner = |k: usize, v: VertexId| -> usize {
        let pos = complex.face(disc.faces[k]).corners().iter().position(|&c| c == v).unwrap();
        3 * k + pos
    };
    let mut classes = Classes((0..3 * disc.faces.len()).collect());
    for &e in &glued {
        let fs = complex.faces_of(e);
        let (k1, k2) = (local[&fs[0]], local[&fs[1]]);
        let (a, b) = e.endpoints();
        classes.union(corner(k1, a), corner(k2, a));
        classes.union(corner(k1, b), corner(k2, b));
    }
    let mut roots = BTreeSet::new();
    for c in 0..3 * disc.faces.len() {
        roots.insert(classes.find(c));
    }
    let f = disc.faces.len() as i64;
    let euler = roots.len() as i64 - (3 * f - glued.len() as i64) + f;
    if euler != 1 {
        return Err(SurfaceError::NotADisc { euler });
    }

    // boundary sides, keyed by the disc vertex at their tail
    let mut out_side: BTreeMap<usize, (VertexId, VertexId, usize)> = BTreeMap::new();
    let mut first: Option<(VertexId, VertexId, usize)> = None;
    for (k, &fi) in disc.faces.iter().enumerate() {
        for (a, b) in complex.face(fi).sides() {
            if glued.contains(&Edge::new(a, b).unwrap()) {
                continue;
            }
            let tail = classes.find(corner(k, a));
            let head = classes.find(corner(k, b));
            if out_side.insert(tail, (a, b, head)).is_some() {
                return Err(SurfaceError::NotADisc { euler });
            }
            if first.is_none_or(|(x, y, _)| (a, b) < (x, y)) {
                first = Some((a, b, tail));
            }
        }
    }
    let (_, _, start) = first.ok_or(SurfaceError::NotADisc { euler })?;
    let mut walk = Vec::with_capacity(out_side.len());
    let mut cur = start;
    loop {
        let &(a, _, head) = out_side.get(&cur).ok_or(SurfaceError::NotADisc { euler })?;
        walk.push(a);
        cur = head;
        if cur == start || walk.len() > out_side.len() {
            break;
        }
    }
    if walk.len() != out_side.len() {
        return Err(SurfaceError::NotADisc { euler });
    }
    let on_walk: BTreeSet<VertexId> = walk.iter().copied().collect();
    let interior = disc
        .faces
        .iter()
        .flat_map(|&fi| complex.face(fi).corners())
        .filter(|v| !on_walk.contains(v))
        .collect();
    Ok(DiscAnalysis { glued, walk: ClosedWalk(walk), interior })
}

/// The boundary walk of a disc, or the reason the faces do not form one.
pub fn disc_boundary(t: &TorusComplex, disc: &DiscMap) -> Result<ClosedWalk, SurfaceError> {
    analyze(t, disc).map(|a| a.walk)
}

/// A torus graph with a single hole: the torus, the disc cut out of it, and the resulting
/// graph `G` with its retained facial structure.
///
/// Disc-interior vertices become isolated when the disc's interior edges are removed and
/// are dropped from `G`.
#[derive(Clone, Debug)]
pub struct TorusWithHole {
    torus: TorusComplex,
    disc: DiscMap,
    graph: Graph,
    in_disc: Vec<bool>,
    walk: ClosedWalk,
    interior: BTreeSet<VertexId>,
}

/// Cuts the interior of a disc out of a torus.
pub fn cut_hole(t: &TorusComplex, disc: DiscMap) -> Result<TorusWithHole, SurfaceError> {
    let analysis = analyze(t, &disc)?;
    let mut graph = t.graph();
    for e in &analysis.glued {
        graph.remove_edge(*e);
    }
    for v in &analysis.interior {
        graph.remove_vertex(*v);
    }
    let mut in_disc = vec![false; t.complex().face_count()];
    for &f in disc.faces() {
        in_disc[f] = true;
    }
    Ok(TorusWithHole {
        torus: t.clone(),
        disc,
        graph,
        in_disc,
        walk: analysis.walk,
        interior: analysis.interior,
    })
}

impl TorusWithHole {
    /// Rebuilds a torus with a hole from retained faces and a boundary walk, filling the hole
    /// with a fresh triangulated disc. The cochain, if given, must be defined on every edge
    /// of the retained faces and the walk; it is extended over the filling.
    pub fn from_parts(
        retained: &[Face],
        walk: &ClosedWalk,
        cochain: Option<&EdgeCochain>,
    ) -> Result<TorusWithHole, SurfaceError> {
        let b = walk.len();
        if b < 3 {
            return Err(SurfaceError::NotADisc { euler: 0 });
        }
        let max = retained
            .iter()
            .flat_map(|f| f.corners())
            .chain(walk.vertices().iter().copied())
            .map(|v| v.0)
            .max()
            .unwrap_or(0);
        let z = |i: usize| VertexId(max + 1 + (i % b) as u32);
        let centre = VertexId(max + 1 + b as u32);
        let w = |i: usize| walk.vertices()[i % b];

        let mut faces: Vec<[VertexId; 3]> = retained.iter().map(|f| f.corners()).collect();
        let start = faces.len();
        for i in 0..b {
            faces.push([w(i), w(i + 1), z(i)]);
            faces.push([w(i + 1), z(i + 1), z(i)]);
            faces.push([z(i), z(i + 1), centre]);
        }
        let mut counts: BTreeMap<Edge, usize> = BTreeMap::new();
        for e in walk.edges() {
            *counts.entry(e).or_default() += 1;
        }
        if counts.values().any(|&c| c > 2) {
            return Err(SurfaceError::NotADisc { euler: 0 });
        }
        let seams: Vec<Edge> = counts.iter().filter(|(_, &c)| c == 2).map(|(e, _)| *e).collect();

        let mut torus = TorusComplex::new(build_complex(faces)?)?;
        if let Some(c) = cochain {
            let mut full = EdgeCochain::default();
            for f in retained {
                for (x, y) in f.sides() {
                    full.set(x, y, c.value(x, y).ok_or(SurfaceError::BadCochain)?);
                }
            }
            let mut potential = vec![Z2Vector::ZERO; b + 1];
            for (i, (x, y)) in walk.traversals().enumerate() {
                let step = c.value(x, y).ok_or(SurfaceError::BadCochain)?;
                full.set(x, y, step);
                potential[i + 1] = potential[i] + step;
            }
            if !potential[b].is_zero() {
                return Err(SurfaceError::NonTrivialWalk);
            }
            for i in 0..b {
                let (p, q) = (potential[i], potential[(i + 1) % b]);
                full.set(w(i), z(i), Z2Vector::ZERO);
                full.set(w(i + 1), z(i), p - q);
                full.set(z(i), z(i + 1), q - p);
                full.set(z(i), centre, -p);
            }
            torus = torus.with_cochain(full)?;
        }
        let disc = DiscMap::new(start..start + 3 * b).with_seams(seams);
        let hole = cut_hole(&torus, disc)?;
        if !hole.walk.same_cycle(walk) {
            return Err(SurfaceError::WalkMismatch);
        }
        Ok(hole)
    }

    pub fn torus(&self) -> &TorusComplex {
        &self.torus
    }

    pub fn disc(&self) -> &DiscMap {
        &self.disc
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// The closed walk around the hole, of length |∂D|.
    pub fn detachment_walk(&self) -> &ClosedWalk {
        &self.walk
    }

    pub fn hole_length(&self) -> usize {
        self.walk.len()
    }

    /// Vertices of the torus lying strictly inside the hole.
    pub fn hole_interior(&self) -> &BTreeSet<VertexId> {
        &self.interior
    }

    pub fn is_retained(&self, face: usize) -> bool {
        !self.in_disc[face]
    }

    pub fn retained_face_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.in_disc.len()).filter(|&i| !self.in_disc[i])
    }

    /// The facial 3-cycles of `G`.
    pub fn retained_faces(&self) -> impl Iterator<Item = Face> + '_ {
        self.retained_face_indices().map(|i| self.torus.complex().face(i))
    }

    /// Number of retained faces containing `e`.
    pub fn retained_faces_of(&self, e: Edge) -> usize {
        self.torus.complex().faces_of(e).iter().filter(|&&f| !self.in_disc[f]).count()
    }

    /// Edges of `G` lying in fewer than two retained faces.
    pub fn boundary_graph(&self) -> BTreeSet<Edge> {
        self.graph.edges().filter(|&e| self.retained_faces_of(e) < 2).collect()
    }

    pub fn boundary_vertices(&self) -> BTreeSet<VertexId> {
        self.walk.distinct_vertices()
    }

    /// Vertices of `G` not on the hole boundary.
    pub fn interior_vertices(&self) -> BTreeSet<VertexId> {
        let b = self.boundary_vertices();
        self.graph.vertices().filter(|v| !b.contains(v)).collect()
    }

    pub fn freedom(&self) -> i64 {
        self.graph.freedom()
    }

    /// The cochain restricted to edges of `G`, if the torus carries one.
    pub fn graph_cochain(&self) -> Option<EdgeCochain> {
        self.torus.cochain().map(|c| c.restrict(|e| self.graph.has_edge(e.endpoints().0, e.endpoints().1)))
    }
}

/// A torus with several disjoint holes.
#[derive(Clone, Debug)]
pub struct HoledTorus {
    torus: TorusComplex,
    discs: Vec<DiscMap>,
    graph: Graph,
    walks: Vec<ClosedWalk>,
}

/// Cuts several discs that share no face and no edge.
pub fn cut_holes(t: &TorusComplex, discs: Vec<DiscMap>) -> Result<HoledTorus, SurfaceError> {
    let complex = t.complex();
    let mut used_edges: BTreeSet<Edge> = BTreeSet::new();
    for d in &discs {
        let mut mine = BTreeSet::new();
        for &f in d.faces() {
            if f >= complex.face_count() {
                return Err(SurfaceError::UnknownFace);
            }
            mine.extend(complex.face(f).edges());
        }
        if !used_edges.is_disjoint(&mine) {
            return Err(SurfaceError::OverlappingHoles);
        }
        used_edges.extend(mine);
    }
    let mut graph = t.graph();
    let mut walks = Vec::with_capacity(discs.len());
    for d in &discs {
        let a = analyze(t, d)?;
        for e in &a.glued {
            graph.remove_edge(*e);
        }
        for v in &a.interior {
            graph.remove_vertex(*v);
        }
        walks.push(a.walk);
    }
    Ok(HoledTorus { torus: t.clone(), discs, graph, walks })
}

impl HoledTorus {
    pub fn torus(&self) -> &TorusComplex {
        &self.torus
    }

    pub fn discs(&self) -> &[DiscMap] {
        &self.discs
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn walks(&self) -> &[ClosedWalk] {
        &self.walks
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::rectangular_torus;

    fn grid_face(t: &TorusComplex, s: u32, i: u32, j: u32, upper: bool) -> usize {
        let r = t.complex().vertex_count() as u32 / s;
        let v = |a: u32, b: u32| VertexId((a % r) * s + (b % s));
        let key = if upper {
            [v(i, j), v(i, j + 1), v(i + 1, j + 1)]
        } else {
            [v(i, j), v(i + 1, j + 1), v(i + 1, j)]
        };
        t.complex().face_index(key).unwrap()
    }

    #[test]
    fn single_face_disc_keeps_every_edge() {
        let t = rectangular_torus(3, 3).unwrap();
        let g = cut_hole(&t, DiscMap::new([0])).unwrap();
        assert_eq!(g.graph().edge_count(), 27);
        assert_eq!(g.freedom(), 0);
        assert_eq!(g.detachment_walk().len(), 3);
        assert_eq!(g.boundary_graph().len(), 3);
    }

    #[test]
    fn freedom_tracks_boundary_length() {
        let t = rectangular_torus(4, 5).unwrap();
        // a strip of lower/upper triangles along row 0
        let mut faces = Vec::new();
        for j in 0..3 {
            faces.push(grid_face(&t, 5, 0, j, false));
            faces.push(grid_face(&t, 5, 0, j, true));
        }
        for k in 1..=faces.len() {
            let g = cut_hole(&t, DiscMap::new(faces[..k].iter().copied())).unwrap();
            assert_eq!(g.freedom(), g.hole_length() as i64 - 3, "prefix {k}");
            assert_eq!(g.boundary_graph(), g.detachment_walk().distinct_edges());
        }
    }

    #[test]
    fn disconnected_faces_are_rejected() {
        let t = rectangular_torus(4, 4).unwrap();
        let a = grid_face(&t, 4, 0, 0, true);
        let b = grid_face(&t, 4, 2, 2, true);
        assert_eq!(cut_hole(&t, DiscMap::new([a, b])).unwrap_err(), SurfaceError::NotFaceConnected);
    }

    #[test]
    fn whole_star_is_a_disc_with_an_interior_vertex() {
        let t = rectangular_torus(4, 4).unwrap();
        let v = VertexId(5);
        let star: Vec<usize> =
            (0..t.faces().len()).filter(|&i| t.faces()[i].contains(v)).collect();
        let g = cut_hole(&t, DiscMap::new(star)).unwrap();
        assert_eq!(g.hole_length(), 6);
        assert!(!g.graph().contains_vertex(v));
        assert_eq!(g.freedom(), 3);
    }

    #[test]
    fn annulus_is_not_a_disc() {
        let t = rectangular_torus(3, 3).unwrap();
        // all faces of row 0 wrap around the torus
        let row: Vec<usize> =
            (0..3).flat_map(|j| [grid_face(&t, 3, 0, j, true), grid_face(&t, 3, 0, j, false)]).collect();
        assert!(matches!(cut_hole(&t, DiscMap::new(row)), Err(SurfaceError::NotADisc { .. })));
    }

    #[test]
    fn from_parts_reproduces_graph() {
        let t = rectangular_torus(4, 5).unwrap();
        let mut faces = Vec::new();
        for j in 0..3 {
            faces.push(grid_face(&t, 5, 0, j, false));
            faces.push(grid_face(&t, 5, 0, j, true));
        }
        let g = cut_hole(&t, DiscMap::new(faces)).unwrap();
        let retained: Vec<Face> = g.retained_faces().collect();
        let c = g.graph_cochain();
        let h = TorusWithHole::from_parts(&retained, g.detachment_walk(), c.as_ref()).unwrap();
        assert_eq!(h.graph(), g.graph());
        assert!(h.detachment_walk().same_cycle(g.detachment_walk()));
        assert!(h.torus().cochain().is_some());
    }

    #[test]
    fn walk_symmetries() {
        let w = ClosedWalk::new([1, 2, 3, 4].map(VertexId).to_vec());
        assert_eq!(w.rotated(1).vertices(), &[2, 3, 4, 1].map(VertexId));
        assert_eq!(w.reversed().vertices(), &[1, 4, 3, 2].map(VertexId));
        assert_eq!(w.dihedral_images().len(), 8);
        assert!(w.same_cycle(&w.reversed().rotated(2)));
    }
}
