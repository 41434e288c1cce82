//! End-to-end acceptance run: one line per criterion. Criterion 12 is reported but never
//! fails the run.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use torhole::catalog::{catalog, classify, CanonicalWalkClass, Verdict, WORDS};
use torhole::corpus::{gen_corpus, random_hole, two_hole_search, CorpusEntry, CorpusSpec};
use torhole::graph::{find_isomorphism, Edge, Graph, VertexId};
use torhole::homology::crossover_class;
use torhole::reduction::{
    all_critical_cycles, certify, classify_edge, contract, contractible_edges, find_critical_cycle_through,
    is_uncontractible, reduce_greedy, reduction_tree, replay, validate_tree, EdgeClass, EXHAUSTIVE_FACE_LIMIT,
};
use torhole::rigidity::{generic_rank, is_min_3_rigid, rigidity_report, DEFAULT_TRIALS};
use torhole::sparsity::{brute_force_3_6, check_3_6, is_in_t, Status, BRUTE_FORCE_LIMIT};
use torhole::surface::{cut_hole, rectangular_torus, TorusWithHole};

const SEED: u64 = 20240611;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn corpus() -> Vec<CorpusEntry> {
    gen_corpus(&CorpusSpec { seed: SEED, ..CorpusSpec::default() })
}

fn tight(corpus: &[CorpusEntry]) -> Vec<&TorusWithHole> {
    corpus.iter().map(|c| &c.graph).filter(|g| is_in_t(g)).collect()
}

fn c1_torus_counts() -> Outcome {
    let mut bad = Vec::new();
    for r in 3..=6 {
        for s in 3..=6 {
            let t = rectangular_torus(r, s).expect("grid torus");
            let two = t.complex().edges().all(|e| t.complex().faces_of(e).len() == 2);
            if t.freedom() != 0 || !two {
                bad.push(format!("{r}x{s}"));
            }
        }
    }
    outcome(bad.is_empty(), format!("16 grids, failures {bad:?}"))
}

fn c2_maxwell() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut cuts, mut bad) = (0, 0);
    let mut lengths = BTreeSet::new();
    while cuts < 600 {
        let (r, s, target) = (rng.gen_range(3..=6), rng.gen_range(3..=6), rng.gen_range(3..=12));
        let Some(g) = random_hole(r, s, target, rng.gen()).expect("grid torus") else { continue };
        cuts += 1;
        let b = g.hole_length() as i64;
        lengths.insert(b);
        if g.freedom() != b - 3 || (g.freedom() == 6) != (b == 9) {
            bad += 1;
        }
    }
    outcome(bad == 0 && lengths.len() == 10, format!("{cuts} cuts, lengths {lengths:?}, {bad} violations"))
}

fn c3_equivalence(corpus: &[CorpusEntry]) -> Outcome {
    let results: Vec<(bool, bool)> = corpus
        .par_iter()
        .map(|c| {
            let g = c.graph.graph();
            (is_in_t(&c.graph), is_min_3_rigid(g, DEFAULT_TRIALS, SEED).expect("enough vertices"))
        })
        .collect();
    let agree = results.iter().filter(|(a, b)| a == b).count();
    let in_t = results.iter().filter(|(a, _)| *a).count();
    outcome(
        corpus.len() >= 200 && agree == corpus.len(),
        format!("{} graphs ({} tight), {} disagreements", corpus.len(), in_t, corpus.len() - agree),
    )
}

fn c4_catalog() -> Outcome {
    let mut problems = Vec::new();
    let mut classes = BTreeSet::new();
    for (k, h) in catalog().iter().enumerate() {
        let i = k + 1;
        let g = h.graph();
        if !check_3_6(g).is_ok_and(|v| v.is_tight()) {
            problems.push(format!("H{i} not tight"));
        }
        if !is_min_3_rigid(g, DEFAULT_TRIALS, SEED).unwrap_or(false) {
            problems.push(format!("H{i} not rigid"));
        }
        if !h.interior_vertices().is_empty() {
            problems.push(format!("H{i} has interior vertices"));
        }
        match classify(h).map(|c| c.verdict) {
            Ok(Verdict::Form { index, .. }) if index == i => {}
            other => problems.push(format!("H{i} classifies as {other:?}")),
        }
        classes.insert(CanonicalWalkClass::of_walk(h.detachment_walk()).map(|c| c.pattern()).ok());
    }
    let words: BTreeSet<_> = WORDS.iter().map(|w| CanonicalWalkClass::of_word(&torhole::catalog::parse_word(w).unwrap())).collect();
    if classes.len() != 17 || words.len() != 17 {
        problems.push(format!("{} stored classes, {} word classes", classes.len(), words.len()));
    }
    outcome(problems.is_empty(), format!("17 graphs, problems {problems:?}"))
}

fn c5_double_banana() -> Outcome {
    let g = Graph::double_banana();
    let status = check_3_6(&g).expect("eight vertices").status;
    let report = rigidity_report(&g, DEFAULT_TRIALS, SEED);
    outcome(
        status == Status::Tight && report.rank == 17 && !report.minimally_rigid,
        format!("status {status:?}, rank {}, minimally rigid {}", report.rank, report.minimally_rigid),
    )
}

fn random_graph(rng: &mut ChaCha8Rng) -> Graph {
    let n = rng.gen_range(4..=12u32);
    let m = rng.gen_range(n..=(3 * n).min(n * (n - 1) / 2));
    let mut g = Graph::new();
    for v in 0..n {
        g.add_vertex(VertexId(v));
    }
    while g.edge_count() < m as usize {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if let Some(e) = Edge::new(VertexId(a), VertexId(b)) {
            g.add_edge(e);
        }
    }
    g
}

fn c6_oracle(corpus: &[CorpusEntry]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut graphs: Vec<Graph> = corpus
        .iter()
        .map(|c| c.graph.graph().clone())
        .filter(|g| g.vertex_count() <= 12)
        .collect();
    let from_corpus = graphs.len();
    graphs.extend((0..100).map(|_| random_graph(&mut rng)));
    let bad = graphs.par_iter().filter(|g| check_3_6(g) != brute_force_3_6(g)).count();
    outcome(bad == 0, format!("{from_corpus} corpus + 100 random graphs, {bad} mismatches"))
}

/// Independent re-verification of a returned critical cycle.
fn verified(g: &TorusWithHole, disc: &torhole::surface::DiscMap, e: Edge) -> bool {
    let Ok(g1) = cut_hole(g.torus(), disc.clone()) else { return false };
    let contains_hole = g.disc().faces().iter().all(|&f| disc.contains(f));
    let on_walk = g1.detachment_walk().edges().any(|w| w == e);
    let tight = if g1.graph().vertex_count() <= BRUTE_FORCE_LIMIT {
        brute_force_3_6(g1.graph()).is_ok_and(|v| v.is_tight())
    } else {
        check_3_6(g1.graph()).is_ok_and(|v| v.is_tight())
    };
    contains_hole && on_walk && g1.hole_length() == 9 && tight
}

fn c7_contract_or_cycle(tight: &[&TorusWithHole]) -> Outcome {
    // (edges, tight contractions, cycles found, exceptions, oracle graphs, oracle disagreements)
    let tallies: Vec<[usize; 6]> = tight
        .par_iter()
        .map(|g| {
            let mut t = [0; 6];
            let small = g.retained_face_indices().count() <= EXHAUSTIVE_FACE_LIMIT;
            let oracle = if small { Some(all_critical_cycles(g).expect("small enough")) } else { None };
            t[4] = usize::from(small);
            for e in contractible_edges(g) {
                t[0] += 1;
                let stays = contract(g, e).is_ok_and(|c| is_in_t(&c));
                let found = find_critical_cycle_through(g, e).ok();
                if stays {
                    t[1] += 1;
                } else if found.as_ref().is_some_and(|c| verified(g, &c.disc, e)) {
                    t[2] += 1;
                } else {
                    t[3] += 1;
                }
                if let Some(all) = &oracle {
                    let through: Vec<_> = all.iter().filter(|c| c.passes_through(e)).collect();
                    let agrees = match &found {
                        Some(c) => through.iter().any(|o| o.disc.faces() == c.disc.faces()),
                        None => through.is_empty(),
                    };
                    t[5] += usize::from(!agrees);
                }
            }
            t
        })
        .collect();
    let s = tallies.iter().fold([0; 6], |mut acc, t| {
        for k in 0..6 {
            acc[k] += t[k];
        }
        acc
    });
    outcome(
        s[3] == 0 && s[5] == 0,
        format!(
            "{} contractible edges: {} tight contractions, {} critical cycles, {} exceptions; oracle on {} graphs, {} disagreements",
            s[0], s[1], s[2], s[3], s[4], s[5]
        ),
    )
}

fn c8_fission(tight: &[&TorusWithHole]) -> Outcome {
    let results: Vec<Result<(usize, usize, usize), String>> = tight
        .par_iter()
        .map(|g| {
            let tree = reduction_tree(g).map_err(|e| e.to_string())?;
            validate_tree(&tree).map_err(|e| e.to_string())?;
            let mut bad = 0;
            for node in tree.fissions() {
                for child in &node.children {
                    let c = &child.graph;
                    let faces: BTreeSet<_> = c.retained_faces().map(|f| f.key()).collect();
                    let simple = faces.len() == c.retained_faces().count() && c.freedom() == 6;
                    let sound = simple && brute_or_flow_tight(c.graph());
                    bad += usize::from(!sound);
                }
            }
            let stats = tree.stats();
            Ok((stats.fissions, stats.fallbacks, bad))
        })
        .collect();
    let errors: Vec<&String> = results.iter().filter_map(|r| r.as_ref().err()).collect();
    let (fissions, fallbacks, bad) = results
        .iter()
        .filter_map(|r| r.as_ref().ok())
        .fold((0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    outcome(
        errors.is_empty() && bad == 0,
        format!(
            "{} trees, {fissions} fissions, {bad} unsound, {fallbacks} fallback contractions, errors {:?}",
            tight.len(),
            errors.first()
        ),
    )
}

fn brute_or_flow_tight(g: &Graph) -> bool {
    if g.vertex_count() <= BRUTE_FORCE_LIMIT {
        brute_force_3_6(g).is_ok_and(|v| v.is_tight())
    } else {
        check_3_6(g).is_ok_and(|v| v.is_tight())
    }
}

fn c9_termination(tight: &[&TorusWithHole]) -> Outcome {
    let h16 = catalog()[15].graph();
    let h17 = catalog()[16].graph();
    let bad: Vec<String> = tight
        .par_iter()
        .filter_map(|g| {
            let leaf = match reduce_greedy(g) {
                Ok(r) => r.leaf,
                Err(e) => return Some(e.to_string()),
            };
            let l = leaf.graph();
            let ok = is_uncontractible(&leaf)
                && leaf.interior_vertices().is_empty()
                && l.vertex_count() <= 9
                && (find_isomorphism(l, h16).is_some() || find_isomorphism(l, h17).is_some());
            (!ok).then(|| format!("leaf with {} vertices", l.vertex_count()))
        })
        .collect();
    outcome(bad.is_empty(), format!("{} graphs, {} failures {:?}", tight.len(), bad.len(), bad.first()))
}

fn c10_certificates(tight: &[&TorusWithHole]) -> Outcome {
    let bad: Vec<String> = tight
        .par_iter()
        .filter_map(|g| {
            let cert = match certify(g) {
                Ok(c) => c,
                Err(e) => return Some(e.to_string()),
            };
            match replay(&cert, DEFAULT_TRIALS, SEED) {
                Ok(r) if &r.graph == g.graph() && find_isomorphism(&r.graph, g.graph()).is_some() => {
                    let full = generic_rank(g.graph(), DEFAULT_TRIALS, SEED);
                    (r.ranks.last() != Some(&full)).then(|| "final rank differs".to_string())
                }
                Ok(_) => Some("replayed graph differs".into()),
                Err(e) => Some(e.to_string()),
            }
        })
        .collect();
    outcome(bad.is_empty(), format!("{} certificates, {} failures {:?}", tight.len(), bad.len(), bad.first()))
}

fn crossover_edges(g: &TorusWithHole) -> Vec<Edge> {
    let b = g.boundary_vertices();
    g.graph()
        .edges()
        .filter(|&e| {
            b.contains(&e.lo()) && b.contains(&e.hi()) && matches!(classify_edge(g, e), Ok(EdgeClass::FfContractible | EdgeClass::FfBlocked { .. }))
        })
        .collect()
}

fn c11_homology(tight: &[&TorusWithHole]) -> Outcome {
    let h1 = &catalog()[0];
    let nonboundary: Vec<Edge> = h1.graph().edges().filter(|e| !h1.detachment_walk().edges().any(|w| w == *e)).collect();
    let mut classes = BTreeSet::new();
    let mut h1_ok = nonboundary.len() == 12;
    for &e in &nonboundary {
        match crossover_class(h1, e) {
            Ok(c) if c.len() == 1 => classes.extend(c),
            _ => h1_ok = false,
        }
    }
    h1_ok &= classes.len() == 3;
    let (edges, trivial): (usize, usize) = tight
        .par_iter()
        .map(|g| {
            let es = crossover_edges(g);
            let bad = es.iter().filter(|&&e| crossover_class(g, e).is_err()).count();
            (es.len(), bad)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    outcome(
        h1_ok && trivial == 0,
        format!(
            "H1: {} nonboundary edges in {} classes {:?}; corpus: {edges} crossover edges, {trivial} trivial",
            nonboundary.len(),
            classes.len(),
            classes
        ),
    )
}

fn c12_two_holes() -> Outcome {
    match two_hole_search(SEED, 4000) {
        Some(w) => {
            let g = w.graph.graph();
            let n = g.vertex_count();
            // recheck with the exhaustive sparsity oracle, a fresh rank seed and a plain
            // component count after deleting the pair
            let tight_bf = n > BRUTE_FORCE_LIMIT || brute_force_3_6(g).is_ok_and(|v| v.is_tight());
            let rank2 = generic_rank(g, DEFAULT_TRIALS, SEED + 1);
            let mut cut = g.clone();
            for &v in &w.separating_pair {
                cut.remove_vertex(v);
            }
            let pass = tight_bf && rank2 < 3 * n - 6 && !cut.is_connected();
            outcome(
                pass,
                format!(
                    "found after {} attempts on a flipped {}x{}: |V|={n}, rank {} and {rank2} < {}, separating pair {:?}",
                    w.attempts,
                    w.rows,
                    w.cols,
                    w.rank,
                    3 * n - 6,
                    w.separating_pair
                ),
            )
        }
        None => outcome(false, "no witness within 4000 attempts"),
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let corpus = corpus();
    let tight = tight(&corpus);
    eprintln!("corpus: {} graphs, {} tight, built in {:.1?}", corpus.len(), tight.len(), start.elapsed());

    type Check<'a> = (u32, Duration, Box<dyn Fn() -> Outcome + 'a>);
    let checks: Vec<Check> = vec![
        (1, Duration::from_secs(1), Box::new(c1_torus_counts)),
        (2, Duration::from_secs(10), Box::new(c2_maxwell)),
        (3, Duration::from_secs(300), Box::new(|| c3_equivalence(&corpus))),
        (4, Duration::from_secs(10), Box::new(c4_catalog)),
        (5, Duration::from_secs(1), Box::new(c5_double_banana)),
        (6, Duration::from_secs(60), Box::new(|| c6_oracle(&corpus))),
        (7, Duration::from_secs(600), Box::new(|| c7_contract_or_cycle(&tight))),
        (8, Duration::from_secs(600), Box::new(|| c8_fission(&tight))),
        (9, Duration::from_secs(300), Box::new(|| c9_termination(&tight))),
        (10, Duration::from_secs(600), Box::new(|| c10_certificates(&tight))),
        (11, Duration::from_secs(600), Box::new(|| c11_homology(&tight))),
        (12, Duration::from_secs(600), Box::new(c12_two_holes)),
    ];
    let mut blocking_failures = 0;
    for (id, budget, check) in checks {
        let t = Instant::now();
        let o = check();
        let took = t.elapsed();
        let in_time = took <= budget;
        let pass = o.pass && in_time;
        let verdict = match (pass, id == 12) {
            (true, _) => "PASS",
            (false, true) => "FAIL (non-blocking)",
            (false, false) => "FAIL",
        };
        let late = if in_time { String::new() } else { format!(", over the {budget:?} budget") };
        println!("criterion {id:>2}: {verdict}  [{took:.2?}{late}] {}", o.detail);
        if !pass && id != 12 {
            blocking_failures += 1;
        }
    }
    if blocking_failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
