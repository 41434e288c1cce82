//! Seeded generation of holed grid tori: random face-connected disc growth, diagonal flips,
//! and a search for two-hole graphs that are tight but not rigid.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{Edge, Graph, VertexId};
use crate::rigidity::{generic_rank, max_rank, DEFAULT_TRIALS};
use crate::sparsity::check_3_6;
use crate::surface::{
    build_complex, cut_hole, cut_holes, disc_boundary, rectangular_torus, DiscMap, HoledTorus, SurfaceError, TorusComplex,
    TorusWithHole,
};

/// Which grids to sample and how many holes per grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub min_side: usize,
    pub max_side: usize,
    pub per_grid: usize,
    pub boundary: usize,
    pub seed: u64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec { min_side: 3, max_side: 6, per_grid: 16, boundary: 9, seed: 1 }
    }
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub rows: usize,
    pub cols: usize,
    pub graph: TorusWithHole,
}

fn mix(seed: u64, parts: &[u64]) -> u64 {
    // splitmix64 over the parts
    parts.iter().fold(seed, |acc, &p| {
        let mut z = acc.wrapping_add(p).wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    })
}

/// Grows a disc face by face from a random start, keeping only steps that leave a disc, and
/// returns a random one of the states whose boundary walk has length `target`. Growth stops
/// at `max_faces` faces; `avoid` lists faces that may not be used.
pub fn grow_disc<R: Rng>(
    t: &TorusComplex,
    target: usize,
    max_faces: usize,
    avoid: &BTreeSet<usize>,
    rng: &mut R,
) -> Option<DiscMap> {
    let complex = t.complex();
    let free: Vec<usize> = (0..complex.face_count()).filter(|f| !avoid.contains(f)).collect();
    let mut faces = BTreeSet::from([*free.choose(rng)?]);
    let mut hits = Vec::new();
    if target == 3 {
        hits.push(faces.clone());
    }
    let mut stalls = 0;
    while faces.len() < max_faces && stalls < 20 {
        let frontier: Vec<usize> = faces
            .iter()
            .flat_map(|&f| complex.face(f).edges().into_iter().filter_map(move |e| complex.across(f, e)))
            .filter(|f| !faces.contains(f) && !avoid.contains(f))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let Some(&next) = frontier.choose(rng) else { break };
        faces.insert(next);
        match disc_boundary(t, &DiscMap::new(faces.iter().copied())) {
            Ok(walk) => {
                stalls = 0;
                if walk.len() == target {
                    hits.push(faces.clone());
                }
            }
            Err(_) => {
                faces.remove(&next);
                stalls += 1;
            }
        }
    }
    hits.choose(rng).map(|f| DiscMap::new(f.iter().copied()))
}

/// Applies up to `flips` random diagonal flips to a torus, skipping flips that would create a
/// vertex of degree below 3 or a repeated edge. A cochain on the torus is carried along.
pub fn random_flips<R: Rng>(t: &TorusComplex, flips: usize, rng: &mut R) -> Result<TorusComplex, SurfaceError> {
    let mut faces: Vec<[VertexId; 3]> = t.faces().iter().map(|f| f.corners()).collect();
    let mut cochain = t.cochain().cloned();
    let mut g = t.graph();
    for _ in 0..flips {
        let edges: Vec<Edge> = g.edges().collect();
        let Some(&e) = edges.choose(rng) else { break };
        let (a, b) = e.endpoints();
        let pair: Vec<usize> = (0..faces.len()).filter(|&i| faces[i].contains(&a) && faces[i].contains(&b)).collect();
        let [i, j] = pair[..] else { continue };
        let apex = |k: usize| faces[k].iter().copied().find(|&w| w != a && w != b).expect("triangle");
        let (c, d) = (apex(i), apex(j));
        if g.degree(a) <= 3 || g.degree(b) <= 3 || g.has_edge(c, d) {
            continue;
        }
        faces[i] = [a, c, d];
        faces[j] = [b, c, d];
        g.remove_edge(e);
        g.add_edge(Edge::new(c, d).expect("apexes differ"));
        if let Some(z) = cochain.as_mut() {
            let through = z.value(c, a).zip(z.value(a, d)).map(|(x, y)| x + y);
            *z = z.restrict(|x| x != e);
            if let Some(v) = through {
                z.set(c, d, v);
            }
        }
    }
    let out = TorusComplex::new(build_complex(faces)?)?;
    match cochain {
        Some(z) => out.with_cochain(z),
        None => Ok(out),
    }
}

/// A random single hole with boundary length `target` in the `r x s` grid torus.
pub fn random_hole(r: usize, s: usize, target: usize, seed: u64) -> Result<Option<TorusWithHole>, SurfaceError> {
    let t = rectangular_torus(r, s)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_faces = rng.gen_range(target..=(2 * r * s * 2 / 3).max(target));
    match grow_disc(&t, target, max_faces, &BTreeSet::new(), &mut rng) {
        Some(d) => cut_hole(&t, d).map(Some),
        None => Ok(None),
    }
}

/// A deterministic corpus of single-hole graphs with the given boundary length over every
/// grid with both sides in range, deduplicated by hole.
pub fn gen_corpus(spec: &CorpusSpec) -> Vec<CorpusEntry> {
    let grids: Vec<(usize, usize)> = (spec.min_side..=spec.max_side)
        .flat_map(|r| (spec.min_side..=spec.max_side).map(move |s| (r, s)))
        .collect();
    grids
        .par_iter()
        .flat_map_iter(|&(r, s)| {
            let mut seen = BTreeSet::new();
            let mut out = Vec::new();
            // a bounded number of attempts per grid keeps generation finite
            for k in 0..spec.per_grid * 8 {
                if out.len() == spec.per_grid {
                    break;
                }
                let seed = mix(spec.seed, &[r as u64, s as u64, k as u64]);
                let Ok(Some(g)) = random_hole(r, s, spec.boundary, seed) else { continue };
                if seen.insert(g.disc().faces().to_vec()) {
                    out.push(CorpusEntry { rows: r, cols: s, graph: g });
                }
            }
            out
        })
        .collect()
}

/// A two-hole graph that is (3,6)-tight yet not rigid, with a separating vertex pair.
#[derive(Clone, Debug)]
pub struct TwoHoleWitness {
    pub rows: usize,
    pub cols: usize,
    pub graph: HoledTorus,
    pub rank: usize,
    pub separating_pair: [VertexId; 2],
    pub attempts: usize,
}

/// A vertex pair whose removal disconnects the graph.
pub fn separating_pair(g: &Graph) -> Option<[VertexId; 2]> {
    let verts: Vec<VertexId> = g.vertices().collect();
    for (i, &a) in verts.iter().enumerate() {
        for &b in &verts[i + 1..] {
            let mut h = g.clone();
            h.remove_vertex(a);
            h.remove_vertex(b);
            if h.vertex_count() > 0 && !h.is_connected() {
                return Some([a, b]);
            }
        }
    }
    None
}

fn is_pinched(t: &TorusComplex, d: &DiscMap) -> bool {
    disc_boundary(t, d).is_ok_and(|w| w.vertices().iter().collect::<BTreeSet<_>>().len() < w.len())
}

/// Randomized search for a tight two-hole graph with a separating pair and deficient rank.
///
/// Each attempt flips random diagonals of a `3 x s` grid torus, then cuts two hexagonal holes
/// that may touch at vertices but share no edge. A separating pair `{a, b}` splits a tight
/// graph into two tight pieces. With no edge `ab` a piece cannot be a disc, so the pieces
/// are annuli bounded by essential triangles through `a` and `b`, and each hole walk
/// revisits a vertex. Discs whose walk is a simple cycle are skipped.
pub fn two_hole_search(seed: u64, attempts: usize) -> Option<TwoHoleWitness> {
    const HOLE: usize = 6;
    const SECOND_TRIES: usize = 20;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=attempts {
        let (r, s) = (3, rng.gen_range(3..=5));
        let Ok(grid) = rectangular_torus(r, s) else { continue };
        let flips = rng.gen_range(0..=3 * r * s);
        let Ok(t) = random_flips(&grid, flips, &mut rng) else { continue };
        let Some(d1) = grow_disc(&t, HOLE, HOLE, &BTreeSet::new(), &mut rng) else { continue };
        if !is_pinched(&t, &d1) {
            continue;
        }
        let complex = t.complex();
        let near: BTreeSet<usize> = d1
            .faces()
            .iter()
            .flat_map(|&f| complex.face(f).edges())
            .flat_map(|e| complex.faces_of(e).iter().copied())
            .collect();
        for _ in 0..SECOND_TRIES {
            let Some(d2) = grow_disc(&t, HOLE, HOLE, &near, &mut rng) else { continue };
            if !is_pinched(&t, &d2) {
                continue;
            }
            let Ok(h) = cut_holes(&t, vec![d1.clone(), d2]) else { continue };
            let g = h.graph();
            if g.freedom() != 6 || !check_3_6(g).is_ok_and(|v| v.is_tight()) {
                continue;
            }
            let Some(pair) = separating_pair(g) else { continue };
            let rank = generic_rank(g, DEFAULT_TRIALS, seed ^ attempt as u64);
            if rank < max_rank(g.vertex_count()) {
                return Some(TwoHoleWitness { rows: r, cols: s, graph: h, rank, separating_pair: pair, attempts: attempt });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_deterministic_and_nine_bounded() {
        let spec = CorpusSpec { min_side: 3, max_side: 4, per_grid: 3, ..CorpusSpec::default() };
        let a = gen_corpus(&spec);
        let b = gen_corpus(&spec);
        assert!(!a.is_empty());
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.graph.disc(), y.graph.disc());
            assert_eq!(x.graph.hole_length(), 9);
            assert_eq!(x.graph.freedom(), 6);
        }
    }

    #[test]
    fn flips_keep_a_torus_and_its_cochain() {
        let t = rectangular_torus(4, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_flips(&t, 30, &mut rng).unwrap();
        assert_eq!(f.freedom(), t.freedom());
        assert_ne!(f.graph(), t.graph());
        assert_eq!(f.cochain().map(|c| c.len()), Some(f.complex().edge_count()));
    }

    #[test]
    fn random_holes_hit_their_length() {
        for target in 3..=12 {
            let g = (0..20).find_map(|k| random_hole(5, 5, target, k).unwrap());
            assert_eq!(g.map(|g| g.hole_length()), Some(target));
        }
    }
}
