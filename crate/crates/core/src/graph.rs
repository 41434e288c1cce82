//! Simple undirected graphs keyed by stable vertex ids.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Vertex label. Ids are stable across moves so that reductions can be traced.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<u32> for VertexId {
    fn from(v: u32) -> Self {
        VertexId(v)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Unordered pair of distinct vertices, stored with the smaller id first.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    lo: VertexId,
    hi: VertexId,
}

impl Edge {
    /// Returns `None` for a loop.
    pub fn new(a: VertexId, b: VertexId) -> Option<Edge> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(Edge { lo: a, hi: b }),
            std::cmp::Ordering::Greater => Some(Edge { lo: b, hi: a }),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn endpoints(self) -> (VertexId, VertexId) {
        (self.lo, self.hi)
    }

    pub fn lo(self) -> VertexId {
        self.lo
    }

    pub fn hi(self) -> VertexId {
        self.hi
    }

    pub fn contains(self, v: VertexId) -> bool {
        self.lo == v || self.hi == v
    }

    pub fn other(self, v: VertexId) -> Option<VertexId> {
        if v == self.lo {
            Some(self.hi)
        } else if v == self.hi {
            Some(self.lo)
        } else {
            None
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

impl Serialize for Edge {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.lo, self.hi].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Edge {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [a, b] = <[VertexId; 2]>::deserialize(d)?;
        Edge::new(a, b).ok_or_else(|| serde::de::Error::custom(format!("loop edge at vertex {a}")))
    }
}

/// A finite simple graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_edges<I: IntoIterator<Item = Edge>>(edges: I) -> Self {
        let mut g = Graph::new();
        for e in edges {
            g.add_edge(e);
        }
        g
    }

    pub fn add_vertex(&mut self, v: VertexId) {
        self.adj.entry(v).or_default();
    }

    /// Returns `false` if the edge was already present.
    pub fn add_edge(&mut self, e: Edge) -> bool {
        let (a, b) = e.endpoints();
        let fresh = self.adj.entry(a).or_default().insert(b);
        self.adj.entry(b).or_default().insert(a);
        fresh
    }

    pub fn remove_edge(&mut self, e: Edge) -> bool {
        let (a, b) = e.endpoints();
        let hit = self.adj.get_mut(&a).map(|s| s.remove(&b)).unwrap_or(false);
        if let Some(s) = self.adj.get_mut(&b) {
            s.remove(&a);
        }
        hit
    }

    pub fn remove_vertex(&mut self, v: VertexId) {
        if let Some(nbrs) = self.adj.remove(&v) {
            for w in nbrs {
                if let Some(s) = self.adj.get_mut(&w) {
                    s.remove(&v);
                }
            }
        }
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.adj.get(&a).is_some_and(|s| s.contains(&b))
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.keys().copied()
    }

    /// Edges in increasing `(lo, hi)` order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj
            .iter()
            .flat_map(|(&a, nbrs)| nbrs.range(a..).filter_map(move |&b| Edge::new(a, b)))
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.get(&v).into_iter().flat_map(|s| s.iter().copied())
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj.get(&v).map_or(0, BTreeSet::len)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn common_neighbors(&self, a: VertexId, b: VertexId) -> Vec<VertexId> {
        match (self.adj.get(&a), self.adj.get(&b)) {
            (Some(x), Some(y)) => x.intersection(y).copied().collect(),
            _ => Vec::new(),
        }
    }

    /// Freedom number `3|V| - |E|`.
    pub fn freedom(&self) -> i64 {
        3 * self.vertex_count() as i64 - self.edge_count() as i64
    }

    pub fn induced(&self, keep: &BTreeSet<VertexId>) -> Graph {
        let mut g = Graph::new();
        for &v in keep {
            if self.contains_vertex(v) {
                g.add_vertex(v);
            }
        }
        for e in self.edges() {
            let (a, b) = e.endpoints();
            if keep.contains(&a) && keep.contains(&b) {
                g.add_edge(e);
            }
        }
        g
    }

    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.vertices().all(|v| other.contains_vertex(v))
            && self.edges().all(|e| {
                let (a, b) = e.endpoints();
                other.has_edge(a, b)
            })
    }

    pub fn is_connected(&self) -> bool {
        let Some(start) = self.vertices().next() else {
            return true;
        };
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for w in self.neighbors(v) {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == self.vertex_count()
    }

    /// Dense `0..n` relabelling in increasing id order.
    pub fn dense_index(&self) -> BTreeMap<VertexId, usize> {
        self.vertices().enumerate().map(|(i, v)| (v, i)).collect()
    }

    pub fn relabel(&self, map: &BTreeMap<VertexId, VertexId>) -> Graph {
        let mut g = Graph::new();
        for v in self.vertices() {
            g.add_vertex(map[&v]);
        }
        for e in self.edges() {
            let (a, b) = e.endpoints();
            g.add_edge(Edge::new(map[&a], map[&b]).expect("relabel must be injective"));
        }
        g
    }

    /// Complete graph on vertices `0..n`.
    pub fn complete(n: u32) -> Graph {
        let mut g = Graph::new();
        for a in 0..n {
            g.add_vertex(VertexId(a));
            for b in (a + 1)..n {
                g.add_edge(Edge::new(VertexId(a), VertexId(b)).unwrap());
            }
        }
        g
    }

    /// Two copies of `K5` minus an edge glued at their two degree-3 vertices.
    pub fn double_banana() -> Graph {
        // shared hinge vertices 0 and 1; banana tips {2,3,4} and {5,6,7}
        let mut g = Graph::new();
        for tips in [[2u32, 3, 4], [5, 6, 7]] {
            for (i, &a) in tips.iter().enumerate() {
                for &b in &tips[i + 1..] {
                    g.add_edge(edge(a, b));
                }
                g.add_edge(edge(0, a));
                g.add_edge(edge(1, a));
            }
        }
        g
    }
}

/// Shorthand used throughout tests and constructions.
pub fn edge(a: u32, b: u32) -> Edge {
    Edge::new(VertexId(a), VertexId(b)).expect("loop edge")
}

/// Finds a vertex bijection `a -> b` preserving adjacency, by backtracking with degree pruning.
pub fn find_isomorphism(a: &Graph, b: &Graph) -> Option<BTreeMap<VertexId, VertexId>> {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return None;
    }
    let mut da: Vec<usize> = a.vertices().map(|v| a.degree(v)).collect();
    let mut db: Vec<usize> = b.vertices().map(|v| b.degree(v)).collect();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return None;
    }
    // match high-degree, well-connected vertices first
    let mut order: Vec<VertexId> = Vec::new();
    let mut placed = BTreeSet::new();
    while order.len() < a.vertex_count() {
        let next = a
            .vertices()
            .filter(|v| !placed.contains(v))
            .max_by_key(|&v| {
                let links = a.neighbors(v).filter(|w| placed.contains(w)).count();
                (links, a.degree(v), std::cmp::Reverse(v))
            })
            .unwrap();
        placed.insert(next);
        order.push(next);
    }
    let targets: Vec<VertexId> = b.vertices().collect();
    let mut map = BTreeMap::new();
    let mut used = BTreeSet::new();
    if extend_iso(a, b, &order, &targets, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

fn extend_iso(
    a: &Graph,
    b: &Graph,
    order: &[VertexId],
    targets: &[VertexId],
    map: &mut BTreeMap<VertexId, VertexId>,
    used: &mut BTreeSet<VertexId>,
) -> bool {
    let Some(&v) = order.get(map.len()) else {
        return true;
    };
    for &t in targets {
        if used.contains(&t) || a.degree(v) != b.degree(t) {
            continue;
        }
        let consistent = map.iter().all(|(&x, &y)| a.has_edge(v, x) == b.has_edge(t, y));
        if !consistent {
            continue;
        }
        map.insert(v, t);
        used.insert(t);
        if extend_iso(a, b, order, targets, map, used) {
            return true;
        }
        map.remove(&v);
        used.remove(&t);
    }
    false
}

pub fn is_isomorphic(a: &Graph, b: &Graph) -> bool {
    find_isomorphism(a, b).is_some()
}
