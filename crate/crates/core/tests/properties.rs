use std::collections::BTreeSet;

use proptest::prelude::*;

use torhole::catalog::{parse_word, CanonicalWalkClass, Token, WALK_LENGTH, WORDS};
use torhole::corpus::random_hole;
use torhole::graph::{Edge, Graph, VertexId};
use torhole::reduction::{contract, contractible_edges, split_facial};
use torhole::rigidity::{rank_mod_p, rational_rank, rigidity_matrix, Placement};
use torhole::sparsity::{brute_force_3_6, check_3_6, excess, is_in_t, Status};
use torhole::surface::io::{self, GraphFile, Loaded};

fn graph_from(n: u32, mask: &[bool]) -> Graph {
    let mut g = Graph::new();
    for v in 0..n {
        g.add_vertex(VertexId(v));
    }
    let pairs = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
    for ((a, b), &keep) in pairs.zip(mask) {
        if keep {
            g.add_edge(Edge::new(VertexId(a), VertexId(b)).unwrap());
        }
    }
    g
}

fn arb_graph() -> impl Strategy<Value = Graph> {
    (3u32..=9).prop_flat_map(|n| {
        let pairs = (n * (n - 1) / 2) as usize;
        proptest::collection::vec(proptest::bool::weighted(0.55), pairs).prop_map(move |m| graph_from(n, &m))
    })
}

fn token_text(t: &Token) -> String {
    match t {
        Token::Vertex(c) | Token::Edge(c) => c.to_string(),
        Token::Steps(n) => n.to_string(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn flow_check_matches_brute_force(g in arb_graph()) {
        let fast = check_3_6(&g).unwrap();
        let slow = brute_force_3_6(&g).unwrap();
        prop_assert_eq!(fast.status, slow.status);
        if let (Some(a), Some(b)) = (&fast.witness, &slow.witness) {
            prop_assert_eq!(excess(&g, a), excess(&g, b));
        }
        if fast.status == Status::Violation {
            prop_assert!(fast.witness.is_some());
        }
    }

    #[test]
    fn field_rank_matches_exact_rank(g in arb_graph(), coords in proptest::collection::vec(-6i64..=6, 27)) {
        let p = Placement::from_integers(
            g.vertices().map(|v| (v, [0, 1, 2].map(|k| coords[3 * v.index() + k]))),
        );
        let field = rank_mod_p(rigidity_matrix(&g, &p).unwrap());
        prop_assert_eq!(field, rational_rank(&g, &p).unwrap());
    }

    #[test]
    fn word_class_is_cyclic(i in 0usize..17, shift in 0usize..8, flip in any::<bool>()) {
        let word = parse_word(WORDS[i]).unwrap();
        let tokens = word.tokens();
        let k = shift % tokens.len();
        let rotated: String = tokens[k..].iter().chain(&tokens[..k]).map(token_text).collect();
        let class = CanonicalWalkClass::of_word(&word);
        prop_assert_eq!(CanonicalWalkClass::of_word(&parse_word(&rotated).unwrap()), class);

        let mut p = word.expand();
        p.rotate_left(shift % WALK_LENGTH);
        if flip {
            p.reverse();
        }
        prop_assert_eq!(CanonicalWalkClass::from_pattern(&p), class);
    }

    #[test]
    fn hole_files_round_trip(side in 3usize..=6, len in 3usize..=12, seed in 0u64..500) {
        let Some(g) = random_hole(side, side, len, seed).unwrap() else { return Ok(()) };
        let text = serde_json::to_string(&io::to_json(&g)).unwrap();
        let Loaded::Holed(back) = io::parse(&text).unwrap() else { panic!("expected one hole") };
        prop_assert_eq!(back.graph(), g.graph());
        prop_assert_eq!(back.disc(), g.disc());
        prop_assert_eq!(back.detachment_walk(), g.detachment_walk());
        let again: GraphFile = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(again, GraphFile::from_holed(&back));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn facial_split_undoes_contraction(side in 3usize..=5, seed in 0u64..300, pick in any::<prop::sample::Index>()) {
        let Some(g) = random_hole(side, side + 1, 9, seed).unwrap() else { return Ok(()) };
        let edges = contractible_edges(&g);
        if edges.is_empty() {
            return Ok(());
        }
        let e = *pick.get(&edges);
        let (u, v) = e.endpoints();
        let small = contract(&g, e).unwrap();
        let apexes = g.graph().common_neighbors(u, v);
        let [x, y] = apexes[..] else { panic!("contractible edge with {} apexes", apexes.len()) };
        let moved: BTreeSet<VertexId> = g.graph().neighbors(v).filter(|&t| t != u && t != x && t != y).collect();
        let back = split_facial(&small, u, [x, y], &moved, v).unwrap();
        prop_assert_eq!(back.graph(), g.graph());
        prop_assert_eq!(back.freedom(), g.freedom());
        prop_assert_eq!(back.hole_length(), g.hole_length());
        prop_assert_eq!(is_in_t(&back), is_in_t(&g));
    }
}
