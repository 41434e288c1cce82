use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::SurfaceError;
use crate::graph::{Edge, Graph, VertexId};
use crate::homology::EdgeCochain;

/// A triangular face: three distinct corners in cyclic order.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Face([VertexId; 3]);

impl Face {
    pub fn new(a: VertexId, b: VertexId, c: VertexId) -> Option<Face> {
        (a != b && b != c && a != c).then_some(Face([a, b, c]))
    }

    pub fn from_ids(ids: [u32; 3]) -> Option<Face> {
        Face::new(VertexId(ids[0]), VertexId(ids[1]), VertexId(ids[2]))
    }

    pub fn corners(&self) -> [VertexId; 3] {
        self.0
    }

    /// Directed sides in the face's cyclic order.
    pub fn sides(&self) -> [(VertexId, VertexId); 3] {
        let [a, b, c] = self.0;
        [(a, b), (b, c), (c, a)]
    }

    pub fn edges(&self) -> [Edge; 3] {
        self.sides().map(|(x, y)| Edge::new(x, y).expect("face corners are distinct"))
    }

    /// Sorted corner set; two faces with the same key are the same triangle.
    pub fn key(&self) -> [VertexId; 3] {
        let mut k = self.0;
        k.sort_unstable();
        k
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.contains(&v)
    }

    /// The corner not on `e`, if `e` is a side of this face.
    pub fn opposite(&self, e: Edge) -> Option<VertexId> {
        let (a, b) = e.endpoints();
        if !(self.contains(a) && self.contains(b)) {
            return None;
        }
        self.0.iter().copied().find(|&v| v != a && v != b)
    }

    pub fn traverses(&self, from: VertexId, to: VertexId) -> bool {
        self.sides().contains(&(from, to))
    }

    pub fn reversed(&self) -> Face {
        let [a, b, c] = self.0;
        Face([a, c, b])
    }

    /// Applies a vertex map; `None` if two corners collide.
    pub fn map(&self, f: impl Fn(VertexId) -> VertexId) -> Option<Face> {
        let [a, b, c] = self.0;
        Face::new(f(a), f(b), f(c))
    }
}

/// A finite 2-dimensional simplicial complex in which every edge lies in at most two faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceComplex {
    faces: Vec<Face>,
    incidence: BTreeMap<Edge, Vec<usize>>,
    vertices: BTreeSet<VertexId>,
}

/// Validates a list of triangles as a surface complex.
pub fn build_complex<I>(faces: I) -> Result<SurfaceComplex, SurfaceError>
where
    I: IntoIterator<Item = [VertexId; 3]>,
{
    let mut out = Vec::new();
    let mut keys = BTreeSet::new();
    let mut incidence: BTreeMap<Edge, Vec<usize>> = BTreeMap::new();
    let mut vertices = BTreeSet::new();
    for (i, [a, b, c]) in faces.into_iter().enumerate() {
        let face = Face::new(a, b, c).ok_or(SurfaceError::LoopEdge { face: i })?;
        if !keys.insert(face.key()) {
            return Err(SurfaceError::DuplicateFace { face: i });
        }
        for e in face.edges() {
            let slot = incidence.entry(e).or_default();
            slot.push(i);
            if slot.len() > 2 {
                return Err(SurfaceError::EdgeInThreeFaces { edge: e });
            }
        }
        vertices.extend(face.corners());
        out.push(face);
    }
    Ok(SurfaceComplex { faces: out, incidence, vertices })
}

impl SurfaceComplex {
    pub fn from_triples(triples: &[[u32; 3]]) -> Result<Self, SurfaceError> {
        build_complex(triples.iter().map(|t| t.map(VertexId)))
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, i: usize) -> Face {
        self.faces[i]
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.incidence.keys().copied()
    }

    /// Indices of the faces containing `e` (empty if `e` is not an edge).
    pub fn faces_of(&self, e: Edge) -> &[usize] {
        self.incidence.get(&e).map_or(&[], Vec::as_slice)
    }

    pub fn face_index(&self, key: [VertexId; 3]) -> Option<usize> {
        let mut key = key;
        key.sort_unstable();
        self.faces.iter().position(|f| f.key() == key)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.incidence.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64
    }

    pub fn is_closed(&self) -> bool {
        self.incidence.values().all(|f| f.len() == 2)
    }

    pub fn graph(&self) -> Graph {
        let mut g = Graph::from_edges(self.edges());
        for &v in &self.vertices {
            g.add_vertex(v);
        }
        g
    }

    /// The neighbour across `e` from face `i`, if any.
    pub fn across(&self, i: usize, e: Edge) -> Option<usize> {
        self.faces_of(e).iter().copied().find(|&j| j != i)
    }

    /// True when the link of `v` is a single cycle (closed surfaces) or a single
    /// cycle or path (surfaces with boundary).
    pub fn link_is_connected(&self, v: VertexId) -> bool {
        let mut link = Graph::new();
        for f in self.faces.iter().filter(|f| f.contains(v)) {
            let others: Vec<VertexId> = f.corners().into_iter().filter(|&w| w != v).collect();
            link.add_edge(Edge::new(others[0], others[1]).unwrap());
        }
        link.is_connected() && link.vertices().all(|w| link.degree(w) <= 2)
    }

    /// Reorients faces so that adjacent faces traverse a shared edge in opposite directions.
    fn orient(&mut self) -> Result<(), SurfaceError> {
        let n = self.faces.len();
        let mut done = vec![false; n];
        for start in 0..n {
            if done[start] {
                continue;
            }
            done[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                let face = self.faces[i];
                for (a, b) in face.sides() {
                    let e = Edge::new(a, b).unwrap();
                    let Some(j) = self.across(i, e) else { continue };
                    let agrees = self.faces[j].traverses(b, a);
                    if done[j] {
                        if !agrees {
                            return Err(SurfaceError::NonOrientable);
                        }
                    } else {
                        if !agrees {
                            self.faces[j] = self.faces[j].reversed();
                        }
                        done[j] = true;
                        queue.push_back(j);
                    }
                }
            }
        }
        Ok(())
    }
}

/// Rectangular identification data of a torus built from a grid.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridProvenance {
    pub rows: usize,
    pub cols: usize,
}

/// A connected, closed, orientable triangulated surface of Euler characteristic zero,
/// with its faces consistently oriented.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusComplex {
    complex: SurfaceComplex,
    provenance: Option<GridProvenance>,
    cochain: Option<EdgeCochain>,
}

impl TorusComplex {
    pub fn new(mut complex: SurfaceComplex) -> Result<Self, SurfaceError> {
        if let Some(e) = complex.incidence.iter().find(|(_, f)| f.len() != 2).map(|(e, _)| *e) {
            return Err(SurfaceError::NotClosedSurface { edge: e });
        }
        if !complex.graph().is_connected() {
            return Err(SurfaceError::NotConnected);
        }
        if let Some(&v) = complex.vertices.iter().find(|&&v| !complex.link_is_connected(v)) {
            return Err(SurfaceError::SingularVertex { vertex: v });
        }
        let chi = complex.euler_characteristic();
        if chi != 0 {
            return Err(SurfaceError::NotTorus { euler: chi });
        }
        complex.orient()?;
        Ok(TorusComplex { complex, provenance: None, cochain: None })
    }

    pub fn complex(&self) -> &SurfaceComplex {
        &self.complex
    }

    pub fn faces(&self) -> &[Face] {
        self.complex.faces()
    }

    pub fn graph(&self) -> Graph {
        self.complex.graph()
    }

    pub fn provenance(&self) -> Option<GridProvenance> {
        self.provenance
    }

    pub fn cochain(&self) -> Option<&EdgeCochain> {
        self.cochain.as_ref()
    }

    pub(crate) fn set_provenance(&mut self, p: GridProvenance) {
        self.provenance = Some(p);
    }

    /// Attaches a cochain; rejected unless it is defined on every edge and closed on every face.
    pub fn with_cochain(mut self, cochain: EdgeCochain) -> Result<Self, SurfaceError> {
        for f in self.faces() {
            let mut total = crate::homology::Z2Vector::ZERO;
            for (a, b) in f.sides() {
                total += cochain.value(a, b).ok_or(SurfaceError::BadCochain)?;
            }
            if total != crate::homology::Z2Vector::ZERO {
                return Err(SurfaceError::BadCochain);
            }
        }
        self.cochain = Some(cochain);
        Ok(self)
    }

    pub fn freedom(&self) -> i64 {
        3 * self.complex.vertex_count() as i64 - self.complex.edge_count() as i64
    }

    /// Neighbours of `v` in cyclic order around it.
    pub fn rotation(&self, v: VertexId) -> Vec<VertexId> {
        let fan: Vec<Face> = self.faces().iter().copied().filter(|f| f.contains(v)).collect();
        let step = |w: VertexId| -> Option<VertexId> {
            // the face traversing v -> w carries the next neighbour
            fan.iter().find(|f| f.traverses(v, w)).and_then(|f| {
                f.corners().into_iter().find(|&x| x != v && x != w)
            })
        };
        let Some(first) = fan.first().map(|f| {
            let [a, b, c] = f.corners();
            if a == v {
                b
            } else if b == v {
                c
            } else {
                a
            }
        }) else {
            return Vec::new();
        };
        let mut out = vec![first];
        let mut cur = first;
        while let Some(next) = step(cur) {
            if next == first || out.len() > fan.len() {
                break;
            }
            out.push(next);
            cur = next;
        }
        out
    }
}
