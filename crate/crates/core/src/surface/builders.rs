use std::collections::BTreeMap;

use super::complex::{build_complex, GridProvenance, SurfaceComplex, TorusComplex};
use super::SurfaceError;
use crate::graph::{Edge, VertexId};
use crate::homology::{EdgeCochain, Z2Vector};

/// How the boundary of a planar triangulated disc is glued up into a torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundaryMatching {
    /// Boundary read counter-clockwise as `bottom · right · top · left`, each path listing its
    /// vertices in traversal order (consecutive paths share their end vertices). Bottom is
    /// glued to top and right to left, both order-reversingly along the boundary.
    Rectangular {
        bottom: Vec<VertexId>,
        right: Vec<VertexId>,
        top: Vec<VertexId>,
        left: Vec<VertexId>,
    },
    /// Two boundary cycles of an annulus, listed with the same orientation; `outer[k]` is
    /// glued to `inner[k]`.
    Annular { outer: Vec<VertexId>, inner: Vec<VertexId> },
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut c = x;
        while self.0[c] != r {
            let next = self.0[c];
            self.0[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// The triangulated `(r+1) x (s+1)` grid disc with one diagonal per cell, all in the same
/// direction. Vertex `(i, j)` has id `i * (s + 1) + j`; the matching glues it into
/// [`rectangular_torus`].
pub fn grid_disc(r: usize, s: usize) -> (SurfaceComplex, BoundaryMatching) {
    let id = |i: usize, j: usize| VertexId((i * (s + 1) + j) as u32);
    let mut faces = Vec::with_capacity(2 * r * s);
    for i in 0..r {
        for j in 0..s {
            faces.push([id(i, j), id(i, j + 1), id(i + 1, j + 1)]);
            faces.push([id(i, j), id(i + 1, j + 1), id(i + 1, j)]);
        }
    }
    let disc = build_complex(faces).expect("grid disc is a valid complex");
    let matching = BoundaryMatching::Rectangular {
        bottom: (0..=s).map(|j| id(0, j)).collect(),
        right: (0..=r).map(|i| id(i, s)).collect(),
        top: (0..=s).rev().map(|j| id(r, j)).collect(),
        left: (0..=r).rev().map(|i| id(i, 0)).collect(),
    };
    (disc, matching)
}

/// The `r x s` grid torus with one diagonal per cell: `r*s` vertices, `3rs` edges, `2rs`
/// faces. Vertex `(i, j)` gets id `i * s + j`. Carries grid provenance and the seam cochain.
pub fn rectangular_torus(r: usize, s: usize) -> Result<TorusComplex, SurfaceError> {
    if r < 3 || s < 3 {
        return Err(SurfaceError::TooSmall { rows: r, cols: s });
    }
    let (disc, matching) = grid_disc(r, s);
    let mut torus = identify_face_graph(&disc, &matching)?;
    torus.set_provenance(GridProvenance { rows: r, cols: s });
    Ok(torus)
}

/// Glues the boundary of a planar triangulated disc (or annulus) into a torus.
///
/// Quotient vertices are numbered densely in order of their smallest representative.
/// Rectangular gluings also produce the seam cochain: crossing the right/left seam counts
/// `(±1, 0)`, crossing the top/bottom seam `(0, ±1)`.
pub fn identify_face_graph(
    disc: &SurfaceComplex,
    matching: &BoundaryMatching,
) -> Result<TorusComplex, SurfaceError> {
    let ids: Vec<VertexId> = disc.vertices().iter().copied().collect();
    let slot: BTreeMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let pos = |v: &VertexId| slot.get(v).copied().ok_or(SurfaceError::MismatchedBoundary);
    let mut uf = UnionFind::new(ids.len());
    // translation of each disc vertex relative to the gluing, for the seam cochain
    let mut shift: Vec<Z2Vector> = vec![Z2Vector::ZERO; ids.len()];
    let mut boundary_path_edges: Vec<Edge> = Vec::new();
    let rectangular = matches!(matching, BoundaryMatching::Rectangular { .. });

    let path_edges = |p: &[VertexId]| -> Result<Vec<Edge>, SurfaceError> {
        p.windows(2)
            .map(|w| Edge::new(w[0], w[1]).ok_or(SurfaceError::MismatchedBoundary))
            .collect()
    };

    match matching {
        BoundaryMatching::Rectangular { bottom, right, top, left } => {
            let chained = bottom.last() == right.first()
                && right.last() == top.first()
                && top.last() == left.first()
                && left.last() == bottom.first();
            if !chained
                || bottom.len() != top.len()
                || right.len() != left.len()
                || bottom.len() < 2
                || right.len() < 2
            {
                return Err(SurfaceError::MismatchedBoundary);
            }
            for p in [bottom, right, top, left] {
                boundary_path_edges.extend(path_edges(p)?);
            }
            let n = bottom.len();
            for k in 0..n {
                uf.union(pos(&bottom[k])?, pos(&top[n - 1 - k])?);
            }
            let m = right.len();
            for k in 0..m {
                uf.union(pos(&right[k])?, pos(&left[m - 1 - k])?);
            }
            for v in right {
                shift[pos(v)?] = shift[pos(v)?] + Z2Vector::new(1, 0);
            }
            for v in top {
                shift[pos(v)?] = shift[pos(v)?] + Z2Vector::new(0, 1);
            }
        }
        BoundaryMatching::Annular { outer, inner } => {
            if outer.len() != inner.len() || outer.len() < 3 {
                return Err(SurfaceError::MismatchedBoundary);
            }
            for p in [outer, inner] {
                let mut closed = p.clone();
                closed.push(p[0]);
                boundary_path_edges.extend(path_edges(&closed)?);
            }
            for (a, b) in outer.iter().zip(inner) {
                uf.union(pos(a)?, pos(b)?);
            }
        }
    }

    // the matched paths must be exactly the boundary of the planar piece
    let mut boundary: Vec<Edge> =
        disc.edges().filter(|&e| disc.faces_of(e).len() == 1).collect();
    boundary.sort();
    boundary_path_edges.sort();
    boundary_path_edges.dedup();
    if boundary != boundary_path_edges {
        return Err(SurfaceError::MismatchedBoundary);
    }

    let reps: Vec<usize> = (0..ids.len()).map(|i| uf.find(i)).collect();
    let mut distinct = reps.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let dense: BTreeMap<usize, VertexId> =
        distinct.iter().enumerate().map(|(k, &r)| (r, VertexId(k as u32))).collect();
    let quotient = |v: VertexId| dense[&reps[slot[&v]]];

    let mut faces = Vec::with_capacity(disc.face_count());
    let mut keys = std::collections::BTreeSet::new();
    for f in disc.faces() {
        let q = f.map(quotient).ok_or(SurfaceError::NonSimpleQuotient)?;
        if !keys.insert(q.key()) {
            return Err(SurfaceError::NonSimpleQuotient);
        }
        faces.push(q.corners());
    }
    let complex = build_complex(faces).map_err(|e| match e {
        SurfaceError::EdgeInThreeFaces { .. } => SurfaceError::NonSimpleQuotient,
        other => other,
    })?;
    let torus = TorusComplex::new(complex)?;
    if !rectangular {
        return Ok(torus);
    }

    // seam cochain: displacement between lifts, measured from each class representative
    let reps: Vec<usize> = reps.iter().map(|r| dense[r].index()).collect();
    let quotient = |v: VertexId| VertexId(reps[slot[&v]] as u32);
    let mut base: BTreeMap<usize, Z2Vector> = BTreeMap::new();
    for (i, &r) in reps.iter().enumerate() {
        base.entry(r).or_insert(shift[i]);
    }
    let mut cochain = EdgeCochain::default();
    for f in disc.faces() {
        for (a, b) in f.sides() {
            let (ia, ib) = (slot[&a], slot[&b]);
            let va = shift[ia] - base[&reps[ia]];
            let vb = shift[ib] - base[&reps[ib]];
            cochain.set(quotient(a), quotient(b), vb - va);
        }
    }
    torus.with_cochain(cochain)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counting_oracle(r: usize, s: usize) -> (usize, usize, usize) {
        // every cell contributes one vertex, three edges (bottom, left, diagonal), two faces
        (r * s, 3 * r * s, 2 * r * s)
    }

    #[test]
    fn grid_torus_counts_match_oracle() {
        for (r, s) in [(3, 3), (3, 4), (4, 5), (6, 6)] {
            let t = rectangular_torus(r, s).unwrap();
            let (v, e, f) = counting_oracle(r, s);
            assert_eq!(t.complex().vertex_count(), v);
            assert_eq!(t.complex().edge_count(), e);
            assert_eq!(t.complex().face_count(), f);
            assert_eq!(t.freedom(), 0);
        }
    }

    #[test]
    fn too_small_grid_is_rejected() {
        assert!(matches!(rectangular_torus(2, 3), Err(SurfaceError::TooSmall { .. })));
        assert!(matches!(rectangular_torus(3, 1), Err(SurfaceError::TooSmall { .. })));
    }

    #[test]
    fn mismatched_paths_are_rejected() {
        let (disc, m) = grid_disc(3, 3);
        let BoundaryMatching::Rectangular { bottom, right, top, left } = m else {
            unreachable!()
        };
        let bad = BoundaryMatching::Rectangular {
            bottom: bottom[..3].to_vec(),
            right,
            top,
            left,
        };
        assert_eq!(identify_face_graph(&disc, &bad).unwrap_err(), SurfaceError::MismatchedBoundary);
    }

    #[test]
    fn annular_gluing_of_a_cylinder_is_a_torus() {
        // 4 rows of a 3-periodic strip; row 0 is glued to row 3
        let id = |i: usize, j: usize| VertexId((i * 3 + j % 3) as u32);
        let mut faces = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                faces.push([id(i, j), id(i, j + 1), id(i + 1, j + 1)]);
                faces.push([id(i, j), id(i + 1, j + 1), id(i + 1, j)]);
            }
        }
        let cyl = build_complex(faces).unwrap();
        let m = BoundaryMatching::Annular {
            outer: (0..3).map(|j| id(0, j)).collect(),
            inner: (0..3).map(|j| id(3, j)).collect(),
        };
        let t = identify_face_graph(&cyl, &m).unwrap();
        assert_eq!(t.complex().vertex_count(), 9);
        assert_eq!(t.freedom(), 0);
        assert!(t.cochain().is_none());
    }

    #[test]
    fn seam_cochain_generators() {
        let t = rectangular_torus(3, 4).unwrap();
        let c = t.cochain().unwrap();
        let v = |i: u32, j: u32| VertexId(i * 4 + j);
        // horizontal loop along row 0
        let row: Z2Vector = (0..4).map(|j| c.value(v(0, j), v(0, (j + 1) % 4)).unwrap()).sum();
        assert_eq!(row, Z2Vector::new(1, 0));
        // vertical loop along column 0
        let col: Z2Vector = (0..3).map(|i| c.value(v(i, 0), v((i + 1) % 3, 0)).unwrap()).sum();
        assert_eq!(col, Z2Vector::new(0, 1));
    }
}
