//! Integer first-homology bookkeeping on tori via an edge cochain.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, VertexId};
use crate::surface::{ClosedWalk, TorusComplex, TorusWithHole};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("torus carries no seam cochain")]
    NoProvenance,
    #[error("edge {0} has no cochain value")]
    UnknownEdge(Edge),
    #[error("edge {0} is not a crossover edge")]
    NotACrossover(Edge),
    #[error("crossover edge {0} closes a null-homologous cycle")]
    TrivialClassFound(Edge),
}

/// An element of Z².
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Z2Vector(pub i64, pub i64);

impl Z2Vector {
    pub const ZERO: Z2Vector = Z2Vector(0, 0);

    pub const fn new(a: i64, b: i64) -> Self {
        Z2Vector(a, b)
    }

    pub fn is_zero(self) -> bool {
        self == Z2Vector::ZERO
    }

    /// Representative of `{v, -v}` whose first nonzero coordinate is positive.
    pub fn canonical(self) -> Self {
        if self.0 < 0 || (self.0 == 0 && self.1 < 0) {
            -self
        } else {
            self
        }
    }
}

impl Add for Z2Vector {
    type Output = Z2Vector;
    fn add(self, o: Z2Vector) -> Z2Vector {
        Z2Vector(self.0 + o.0, self.1 + o.1)
    }
}

impl AddAssign for Z2Vector {
    fn add_assign(&mut self, o: Z2Vector) {
        *self = *self + o;
    }
}

impl Sub for Z2Vector {
    type Output = Z2Vector;
    fn sub(self, o: Z2Vector) -> Z2Vector {
        Z2Vector(self.0 - o.0, self.1 - o.1)
    }
}

impl Neg for Z2Vector {
    type Output = Z2Vector;
    fn neg(self) -> Z2Vector {
        Z2Vector(-self.0, -self.1)
    }
}

impl Sum for Z2Vector {
    fn sum<I: Iterator<Item = Z2Vector>>(iter: I) -> Z2Vector {
        iter.fold(Z2Vector::ZERO, Add::add)
    }
}

impl fmt::Display for Z2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}

/// Antisymmetric Z²-valued function on directed edges. Stores the value of `lo -> hi`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgeCochain {
    values: BTreeMap<Edge, Z2Vector>,
}

impl EdgeCochain {
    pub fn set(&mut self, from: VertexId, to: VertexId, value: Z2Vector) {
        if let Some(e) = Edge::new(from, to) {
            let v = if from < to { value } else { -value };
            self.values.insert(e, v);
        }
    }

    pub fn value(&self, from: VertexId, to: VertexId) -> Option<Z2Vector> {
        let e = Edge::new(from, to)?;
        let v = *self.values.get(&e)?;
        Some(if from < to { v } else { -v })
    }

    /// Entries as `(lo, hi, value of lo -> hi)`.
    pub fn entries(&self) -> impl Iterator<Item = (Edge, Z2Vector)> + '_ {
        self.values.iter().map(|(e, v)| (*e, *v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Keeps only the edges for which `keep` holds.
    pub fn restrict(&self, keep: impl Fn(Edge) -> bool) -> EdgeCochain {
        EdgeCochain { values: self.values.iter().filter(|(e, _)| keep(**e)).map(|(e, v)| (*e, *v)).collect() }
    }
}

/// The seam cochain of a torus: crossing the vertical seam contributes `(±1, 0)`, the
/// horizontal seam `(0, ±1)`.
pub fn standard_cochain(t: &TorusComplex) -> Result<&EdgeCochain, HomologyError> {
    t.cochain().ok_or(HomologyError::NoProvenance)
}

/// Sum of cochain values along the walk's traversals.
pub fn walk_class(cochain: &EdgeCochain, w: &ClosedWalk) -> Result<Z2Vector, HomologyError> {
    w.traversals()
        .map(|(a, b)| {
            cochain
                .value(a, b)
                .ok_or_else(|| HomologyError::UnknownEdge(Edge::new(a, b).expect("walk steps are edges")))
        })
        .sum()
}

/// Canonical classes of the closed walks formed by crossover edge `e` and an arc of the
/// detachment walk between occurrences of its endpoints. Both arcs between the same pair
/// of occurrences give the same class since the whole walk is null-homologous.
pub fn crossover_class(g: &TorusWithHole, e: Edge) -> Result<BTreeSet<Z2Vector>, HomologyError> {
    let cochain = standard_cochain(g.torus())?;
    let walk = g.detachment_walk().vertices();
    let (u, v) = e.endpoints();
    let is_ff = g.graph().has_edge(u, v) && g.retained_faces_of(e) == 2;
    let at = |x: VertexId| -> Vec<usize> { (0..walk.len()).filter(|&i| walk[i] == x).collect() };
    let (us, vs) = (at(u), at(v));
    if !is_ff || us.is_empty() || vs.is_empty() {
        return Err(HomologyError::NotACrossover(e));
    }
    let base = cochain.value(u, v).ok_or(HomologyError::UnknownEdge(e))?;
    let n = walk.len();
    let mut classes = BTreeSet::new();
    for &j in &vs {
        for &i in &us {
            // arc from v's occurrence forward to u's occurrence
            let mut total = base;
            let mut k = j;
            while k != i {
                let (a, b) = (walk[k], walk[(k + 1) % n]);
                total += cochain.value(a, b).ok_or_else(|| HomologyError::UnknownEdge(Edge::new(a, b).expect("walk steps are edges")))?;
                k = (k + 1) % n;
            }
            if total.is_zero() {
                return Err(HomologyError::TrivialClassFound(e));
            }
            classes.insert(total.canonical());
        }
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexId as V;
    use crate::surface::rectangular_torus;

    #[test]
    fn canonical_sign() {
        assert_eq!(Z2Vector(-1, 2).canonical(), Z2Vector(1, -2));
        assert_eq!(Z2Vector(0, -3).canonical(), Z2Vector(0, 3));
        assert_eq!(Z2Vector(2, -1).canonical(), Z2Vector(2, -1));
    }

    #[test]
    fn cochain_is_antisymmetric() {
        let mut c = EdgeCochain::default();
        c.set(V(4), V(1), Z2Vector(1, 0));
        assert_eq!(c.value(V(1), V(4)), Some(Z2Vector(-1, 0)));
        assert_eq!(c.value(V(4), V(1)), Some(Z2Vector(1, 0)));
        assert_eq!(c.value(V(4), V(2)), None);
    }

    #[test]
    fn face_sums_vanish_on_grids() {
        for (r, s) in [(3, 3), (4, 6), (5, 3)] {
            let t = rectangular_torus(r, s).unwrap();
            let c = standard_cochain(&t).unwrap();
            for f in t.faces() {
                let sum: Z2Vector = f.sides().iter().map(|&(a, b)| c.value(a, b).unwrap()).sum();
                assert!(sum.is_zero());
            }
        }
    }

    #[test]
    fn meridian_and_empty_walk() {
        let t = rectangular_torus(3, 4).unwrap();
        let c = standard_cochain(&t).unwrap();
        let meridian = ClosedWalk::new((0..3).map(|i| V(i * 4 + 1)).collect());
        assert_eq!(walk_class(c, &meridian).unwrap(), Z2Vector(0, 1));
        assert_eq!(walk_class(c, &ClosedWalk::new(vec![])).unwrap(), Z2Vector::ZERO);
    }
}
