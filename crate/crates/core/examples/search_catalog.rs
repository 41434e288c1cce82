//! Regenerates `data/hNN.json`: walks random class-preserving contraction sequences from a
//! corpus of holed grid tori and keeps, for each form, the first graph whose vertices all
//! lie on the hole boundary.
//!
//! cargo run --release -p torhole --example search_catalog -- crates/core/data

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use torhole::catalog::{classify, Verdict, WORDS};
use torhole::corpus::{gen_corpus, CorpusSpec};
use torhole::graph::VertexId;
use torhole::homology::EdgeCochain;
use torhole::reduction::{contract, contractible_edges};
use torhole::rigidity::is_min_3_rigid;
use torhole::sparsity::is_in_t;
use torhole::surface::{io, Face, TorusWithHole};

/// Relabels so that vertices are numbered by first appearance on the walk.
fn compact(g: &TorusWithHole) -> TorusWithHole {
    let mut map = BTreeMap::new();
    for &v in g.detachment_walk().vertices() {
        let next = VertexId(map.len() as u32);
        map.entry(v).or_insert(next);
    }
    let f = |v: VertexId| map[&v];
    let faces: Vec<Face> = g.retained_faces().map(|x| x.map(f).unwrap()).collect();
    let cochain = g.graph_cochain().map(|c| {
        let mut out = EdgeCochain::default();
        for (e, z) in c.entries() {
            out.set(f(e.lo()), f(e.hi()), z);
        }
        out
    });
    TorusWithHole::from_parts(&faces, &g.detachment_walk().map(f), cochain.as_ref()).unwrap()
}

fn boundary_only(g: &TorusWithHole) -> Option<usize> {
    if !g.interior_vertices().is_empty() {
        return None;
    }
    match classify(g).ok()?.verdict {
        Verdict::Form { index, .. } => Some(index),
        Verdict::Excluded { word } => panic!("excluded form {word} realised in the class"),
        Verdict::Unrecognized => None,
    }
}

fn explore(g: &TorusWithHole, seed: u64, runs: usize) -> Vec<(usize, TorusWithHole)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..runs {
        let mut cur = g.clone();
        loop {
            if let Some(i) = boundary_only(&cur) {
                out.push((i, cur.clone()));
            }
            let mut edges = contractible_edges(&cur);
            edges.shuffle(&mut rng);
            let next = edges.into_iter().find_map(|e| contract(&cur, e).ok().filter(is_in_t));
            match next {
                Some(n) => cur = n,
                None => break,
            }
        }
    }
    out
}

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "crates/core/data".into()));
    let mut found: BTreeMap<usize, TorusWithHole> = BTreeMap::new();
    for round in 0..40u64 {
        let spec = CorpusSpec { min_side: 3, max_side: 7, per_grid: 12, boundary: 9, seed: 1000 + round };
        let corpus: Vec<_> = gen_corpus(&spec).into_iter().filter(|c| is_in_t(&c.graph)).collect();
        let hits: Vec<(usize, TorusWithHole)> = corpus
            .par_iter()
            .enumerate()
            .flat_map_iter(|(k, c)| explore(&c.graph, round * 10_000 + k as u64, 4))
            .collect();
        for (i, g) in hits {
            found.entry(i).or_insert_with(|| compact(&g));
        }
        let missing: BTreeSet<usize> = (1..=17).filter(|i| !found.contains_key(i)).collect();
        eprintln!("round {round}: {} tight graphs, missing {missing:?}", corpus.len());
        if missing.is_empty() {
            break;
        }
    }
    for (i, g) in &found {
        assert!(is_min_3_rigid(g.graph(), 3, 7).unwrap(), "H{i} is not rigid");
        let text = serde_json::to_string(&io::to_json(g)).unwrap();
        std::fs::write(dir.join(format!("h{i:02}.json")), text + "\n").unwrap();
        eprintln!("H{i:<2} {:<14} |V|={} |E|={}", WORDS[i - 1], g.graph().vertex_count(), g.graph().edge_count());
    }
}
