//! Cyclic words for length-9 hole boundaries, their canonical walk classes, and the stored
//! representative graphs `H1 .. H17`.
//!
//! A word is read left to right as a walk of nine steps. A numeral `n` takes `n` steps
//! through otherwise unconstrained vertices; an edge letter takes one step along a named
//! edge; a vertex letter names the vertex the walk is currently at. Each edge letter occurs
//! twice and its two traversals run in opposite directions.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::surface::io::{self, Loaded};
use crate::surface::{ClosedWalk, TorusWithHole};

pub const WALK_LENGTH: usize = 9;

/// The seventeen forms, in catalog order (`H1` first).
pub const WORDS: [&str; 17] = [
    "v9",
    "v3v6",
    "v4v5",
    "e3e4",
    "v1w2v2w4",
    "v1w2v3w3",
    "v1w2v4w2",
    "v1w3v2w3",
    "v2w3v2w2",
    "v1w2x1v2w1x2",
    "v1w1x1v2w2x2",
    "v3e2v1e1",
    "v3e1v2e1",
    "v2e2v2e1",
    "v1e1w2v1e1w1",
    "e1f2e1f1",
    "ef1ge1fg1",
];

/// Length-9 boundary patterns that satisfy the counting condition but never bound a tight graph.
pub const EXCLUDED_WORDS: [&str; 2] = ["v3v2w3w1", "v1e1v2w1e1w1"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unexpected character {0:?} in word")]
    BadToken(char),
    #[error("word takes {0} steps, not 9")]
    SumNot9(usize),
    #[error("edge letter {0} must occur exactly twice")]
    UnpairedEdge(char),
    #[error("boundary walk has length {0}, not 9")]
    WalkNot9(usize),
    #[error("no catalog graph with index {0}")]
    UnknownIndex(usize),
    #[error("stored graph H{index} is invalid: {reason}")]
    BadStoredGraph { index: usize, reason: String },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Token {
    Vertex(char),
    Edge(char),
    Steps(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DetachmentWord(Vec<Token>);

pub fn parse_word(s: &str) -> Result<DetachmentWord, CatalogError> {
    let mut tokens = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            'v' | 'w' | 'x' => tokens.push(Token::Vertex(c)),
            'e' | 'f' | 'g' => tokens.push(Token::Edge(c)),
            '1'..='9' => {
                let mut n = c.to_digit(10).unwrap();
                while let Some(d) = chars.peek().and_then(|d| d.to_digit(10)) {
                    n = n * 10 + d;
                    chars.next();
                }
                tokens.push(Token::Steps(n));
            }
            other => return Err(CatalogError::BadToken(other)),
        }
    }
    let word = DetachmentWord(tokens);
    let steps = word.steps();
    if steps != WALK_LENGTH {
        return Err(CatalogError::SumNot9(steps));
    }
    let mut uses: BTreeMap<char, usize> = BTreeMap::new();
    for t in &word.0 {
        if let Token::Edge(e) = t {
            *uses.entry(*e).or_default() += 1;
        }
    }
    if let Some((&e, _)) = uses.iter().find(|(_, &n)| n != 2) {
        return Err(CatalogError::UnpairedEdge(e));
    }
    Ok(word)
}

impl DetachmentWord {
    pub fn tokens(&self) -> &[Token] {
        &self.0
    }

    /// Numeral values plus edge-letter occurrences.
    pub fn steps(&self) -> usize {
        self.0
            .iter()
            .map(|t| match t {
                Token::Vertex(_) => 0,
                Token::Edge(_) => 1,
                Token::Steps(n) => *n as usize,
            })
            .sum()
    }

    /// The explicit walk: position `i` holds the label of the `i`-th vertex visited, with
    /// labels numbered by first occurrence.
    pub fn expand(&self) -> [u8; WALK_LENGTH] {
        let n = WALK_LENGTH;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                x = p[x];
            }
            x
        }
        let union = |p: &mut Vec<usize>, a: usize, b: usize| {
            let (ra, rb) = (find(p, a % n), find(p, b % n));
            if ra != rb {
                p[ra.max(rb)] = ra.min(rb);
            }
        };
        let mut at = 0usize;
        let mut named: BTreeMap<char, usize> = BTreeMap::new();
        let mut first_trip: BTreeMap<char, (usize, usize)> = BTreeMap::new();
        for t in &self.0 {
            match *t {
                Token::Vertex(c) => {
                    if let Some(&p0) = named.get(&c) {
                        union(&mut parent, p0, at);
                    } else {
                        named.insert(c, at);
                    }
                }
                Token::Edge(c) => {
                    if let Some(&(s, e)) = first_trip.get(&c) {
                        union(&mut parent, at, e);
                        union(&mut parent, at + 1, s);
                    } else {
                        first_trip.insert(c, (at, at + 1));
                    }
                    at += 1;
                }
                Token::Steps(k) => at += k as usize,
            }
        }
        let classes: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
        relabel(&classes)
    }
}

impl fmt::Display for DetachmentWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.0 {
            match t {
                Token::Vertex(c) | Token::Edge(c) => write!(f, "{c}")?,
                Token::Steps(n) => write!(f, "{n}")?,
            }
        }
        Ok(())
    }
}

fn relabel<T: Ord + Copy>(seq: &[T]) -> [u8; WALK_LENGTH] {
    let mut names: BTreeMap<T, u8> = BTreeMap::new();
    let mut out = [0u8; WALK_LENGTH];
    for (i, x) in seq.iter().enumerate() {
        let next = names.len() as u8;
        out[i] = *names.entry(*x).or_insert(next);
    }
    out
}

/// The vertex-repetition pattern of a closed 9-walk, minimized over rotations and reversal.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalWalkClass([u8; WALK_LENGTH]);

impl CanonicalWalkClass {
    pub fn from_pattern(p: &[u8; WALK_LENGTH]) -> Self {
        let n = WALK_LENGTH;
        let mut best: Option<[u8; WALK_LENGTH]> = None;
        for k in 0..n {
            for rev in [false, true] {
                let seq: Vec<u8> = (0..n)
                    .map(|i| if rev { p[(k + n - i) % n] } else { p[(k + i) % n] })
                    .collect();
                let cand = relabel(&seq);
                if best.is_none_or(|b| cand < b) {
                    best = Some(cand);
                }
            }
        }
        CanonicalWalkClass(best.unwrap())
    }

    pub fn of_walk(w: &ClosedWalk) -> Result<Self, CatalogError> {
        if w.len() != WALK_LENGTH {
            return Err(CatalogError::WalkNot9(w.len()));
        }
        Ok(Self::from_pattern(&relabel(w.vertices())))
    }

    pub fn of_word(w: &DetachmentWord) -> Self {
        Self::from_pattern(&w.expand())
    }

    pub fn pattern(&self) -> [u8; WALK_LENGTH] {
        self.0
    }

    pub fn distinct_vertices(&self) -> usize {
        self.0.iter().max().map_or(0, |m| *m as usize + 1)
    }

    /// Distinct edges traversed, counting a repeated vertex pair once.
    pub fn distinct_edges(&self) -> usize {
        let n = WALK_LENGTH;
        let mut pairs: Vec<(u8, u8)> = (0..n)
            .map(|i| {
                let (a, b) = (self.0[i], self.0[(i + 1) % n]);
                (a.min(b), a.max(b))
            })
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        pairs.len()
    }
}

impl fmt::Display for CanonicalWalkClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in self.0 {
            write!(f, "{}", (b'a' + x) as char)?;
        }
        Ok(())
    }
}

/// The seventeen words with their canonical classes, `H1` first.
pub fn the_17() -> &'static [(&'static str, CanonicalWalkClass)] {
    static TABLE: OnceLock<Vec<(&'static str, CanonicalWalkClass)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        WORDS
            .iter()
            .map(|w| (*w, CanonicalWalkClass::of_word(&parse_word(w).expect("catalog words parse"))))
            .collect()
    })
}

fn excluded_classes() -> &'static [(&'static str, CanonicalWalkClass)] {
    static TABLE: OnceLock<Vec<(&'static str, CanonicalWalkClass)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        EXCLUDED_WORDS
            .iter()
            .map(|w| (*w, CanonicalWalkClass::of_word(&parse_word(w).expect("excluded words parse"))))
            .collect()
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    /// One of the seventeen forms; `index` is 1-based.
    Form { index: usize, word: String },
    /// A pattern known never to bound a tight graph.
    Excluded { word: String },
    Unrecognized,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub class: CanonicalWalkClass,
    pub verdict: Verdict,
}

pub fn classify_walk(w: &ClosedWalk) -> Result<Classification, CatalogError> {
    let class = CanonicalWalkClass::of_walk(w)?;
    let verdict = if let Some(i) = the_17().iter().position(|(_, c)| *c == class) {
        Verdict::Form { index: i + 1, word: WORDS[i].to_string() }
    } else if let Some((word, _)) = excluded_classes().iter().find(|(_, c)| *c == class) {
        Verdict::Excluded { word: word.to_string() }
    } else {
        Verdict::Unrecognized
    };
    Ok(Classification { class, verdict })
}

pub fn classify(g: &TorusWithHole) -> Result<Classification, CatalogError> {
    classify_walk(g.detachment_walk())
}

/// Catalog index (1-based) of a walk's class, if it is one of the seventeen.
pub fn form_index(w: &ClosedWalk) -> Option<usize> {
    match classify_walk(w).ok()?.verdict {
        Verdict::Form { index, .. } => Some(index),
        _ => None,
    }
}

const STORED: [&str; 17] = [
    include_str!("../data/h01.json"),
    include_str!("../data/h02.json"),
    include_str!("../data/h03.json"),
    include_str!("../data/h04.json"),
    include_str!("../data/h05.json"),
    include_str!("../data/h06.json"),
    include_str!("../data/h07.json"),
    include_str!("../data/h08.json"),
    include_str!("../data/h09.json"),
    include_str!("../data/h10.json"),
    include_str!("../data/h11.json"),
    include_str!("../data/h12.json"),
    include_str!("../data/h13.json"),
    include_str!("../data/h14.json"),
    include_str!("../data/h15.json"),
    include_str!("../data/h16.json"),
    include_str!("../data/h17.json"),
];

/// The raw JSON of the stored representative `H_i`.
pub fn stored_json(i: usize) -> Result<&'static str, CatalogError> {
    if (1..=17).contains(&i) {
        Ok(STORED[i - 1])
    } else {
        Err(CatalogError::UnknownIndex(i))
    }
}

/// Loads the stored representative `H_i`, `1 <= i <= 17`.
pub fn build_h(i: usize) -> Result<TorusWithHole, CatalogError> {
    let text = stored_json(i)?;
    let bad = |reason: String| CatalogError::BadStoredGraph { index: i, reason };
    match io::parse(text).map_err(|e| bad(e.to_string()))? {
        Loaded::Holed(h) => Ok(h),
        _ => Err(bad("expected a torus with one hole".into())),
    }
}

/// All seventeen representatives, loaded once.
pub fn catalog() -> &'static [TorusWithHole] {
    static ALL: OnceLock<Vec<TorusWithHole>> = OnceLock::new();
    ALL.get_or_init(|| (1..=17).map(|i| build_h(i).expect("stored catalog graphs load")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn expanded(w: &str) -> String {
        parse_word(w).unwrap().expand().iter().map(|&x| (b'a' + x) as char).collect()
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_word("v9").unwrap().tokens(), &[Token::Vertex('v'), Token::Steps(9)]);
        let w = parse_word("ef1ge1fg1").unwrap();
        assert_eq!(w.tokens().len(), 9);
        assert_eq!(parse_word("v3v5"), Err(CatalogError::SumNot9(8)));
        assert_eq!(parse_word("v3z6"), Err(CatalogError::BadToken('z')));
        assert_eq!(parse_word("e4v4"), Err(CatalogError::UnpairedEdge('e')));
    }

    #[test]
    fn round_trip() {
        for w in WORDS.iter().chain(&EXCLUDED_WORDS) {
            assert_eq!(parse_word(w).unwrap().to_string(), *w);
        }
    }

    #[test]
    fn expansions_by_hand() {
        assert_eq!(expanded("v9"), "abcdefghi");
        assert_eq!(expanded("v3v6"), "abcadefgh");
        assert_eq!(expanded("e3e4"), "abcdbaefg");
        assert_eq!(expanded("v3e2v1e1"), "abcdefaed");
        assert_eq!(expanded("v1e1w2v1e1w1"), "abcdeacbd");
        assert_eq!(expanded("e1f2e1f1"), "abcdebadc");
        assert_eq!(expanded("ef1ge1fg1"), "abcdbacbd");
    }

    #[test]
    fn seventeen_distinct_classes() {
        let classes: BTreeSet<_> = the_17().iter().map(|(_, c)| *c).collect();
        assert_eq!(classes.len(), 17);
        for (_, c) in excluded_classes() {
            assert!(!classes.contains(c));
        }
    }

    #[test]
    fn vertex_and_edge_counts() {
        let counts: Vec<(usize, usize)> =
            the_17().iter().map(|(_, c)| (c.distinct_vertices(), c.distinct_edges())).collect();
        assert_eq!(counts[0], (9, 9));
        assert_eq!(counts[3], (7, 8));
        assert_eq!(counts[15], (5, 7));
        assert_eq!(counts[16], (4, 6));
    }

    #[test]
    fn class_is_invariant_under_symmetry() {
        let w = ClosedWalk::new([3, 1, 4, 1, 5, 9, 2, 6, 7].map(crate::graph::VertexId).to_vec());
        let c = CanonicalWalkClass::of_walk(&w).unwrap();
        for img in w.dihedral_images() {
            assert_eq!(CanonicalWalkClass::of_walk(&img).unwrap(), c);
        }
        let short = ClosedWalk::new([1, 2, 3].map(crate::graph::VertexId).to_vec());
        assert_eq!(CanonicalWalkClass::of_walk(&short), Err(CatalogError::WalkNot9(3)));
    }
}
