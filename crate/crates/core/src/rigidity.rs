//! Generic infinitesimal rigidity in 3-space via the rank of the rigidity matrix.
//!
//! Ranks are exact: placements are drawn from the prime field of order `2^61 - 1`, and a
//! fraction-free integer elimination is available for cross-checking small cases.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexId};

/// The Mersenne prime `2^61 - 1`.
pub const PRIME: u64 = (1 << 61) - 1;

pub const DEFAULT_TRIALS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RigidityError {
    #[error("placement has no coordinates for vertex {0}")]
    MissingCoordinate(VertexId),
    #[error("graph has {0} vertices; at least 3 are needed")]
    TooFewVertices(usize),
}

/// Element of the prime field of order [`PRIME`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub struct Fp(u64);

impl Fp {
    pub const ZERO: Fp = Fp(0);
    pub const ONE: Fp = Fp(1);

    pub fn new(x: u64) -> Fp {
        Fp(x % PRIME)
    }

    pub fn from_i64(x: i64) -> Fp {
        Fp(x.rem_euclid(PRIME as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn pow(self, mut e: u64) -> Fp {
        let (mut base, mut acc) = (self, Fp::ONE);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `self` must be nonzero.
    pub fn inv(self) -> Fp {
        debug_assert!(self.0 != 0);
        self.pow(PRIME - 2)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, o: Fp) -> Fp {
        let s = self.0 + o.0;
        Fp(if s >= PRIME { s - PRIME } else { s })
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, o: Fp) -> Fp {
        Fp(if self.0 >= o.0 { self.0 - o.0 } else { self.0 + PRIME - o.0 })
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, o: Fp) -> Fp {
        let x = self.0 as u128 * o.0 as u128;
        let mut r = (x & PRIME as u128) as u64 + (x >> 61) as u64;
        while r >= PRIME {
            r -= PRIME;
        }
        Fp(r)
    }
}

/// Coordinates in 3-space for each vertex, as field elements (equivalently, integers in
/// `0..PRIME`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Placement {
    coords: BTreeMap<VertexId, [Fp; 3]>,
    pub seed: u64,
}

impl Placement {
    pub fn random(g: &Graph, seed: u64) -> Placement {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coords = g
            .vertices()
            .map(|v| (v, [0; 3].map(|_: u8| Fp(rng.gen_range(0..PRIME)))))
            .collect();
        Placement { coords, seed }
    }

    pub fn from_integers(coords: impl IntoIterator<Item = (VertexId, [i64; 3])>) -> Placement {
        Placement { coords: coords.into_iter().map(|(v, c)| (v, c.map(Fp::from_i64))).collect(), seed: 0 }
    }

    pub fn get(&self, v: VertexId) -> Option<[Fp; 3]> {
        self.coords.get(&v).copied()
    }
}

/// The `|E| x 3|V|` rigidity matrix: the row of edge `uv` holds `p(u) - p(v)` in `u`'s
/// block and `p(v) - p(u)` in `v`'s block. Columns follow increasing vertex id.
pub fn rigidity_matrix(g: &Graph, p: &Placement) -> Result<Vec<Vec<Fp>>, RigidityError> {
    let index = g.dense_index();
    let cols = 3 * index.len();
    let mut rows = Vec::with_capacity(g.edge_count());
    for e in g.edges() {
        let (u, v) = e.endpoints();
        let pu = p.get(u).ok_or(RigidityError::MissingCoordinate(u))?;
        let pv = p.get(v).ok_or(RigidityError::MissingCoordinate(v))?;
        let mut row = vec![Fp::ZERO; cols];
        for k in 0..3 {
            row[3 * index[&u] + k] = pu[k] - pv[k];
            row[3 * index[&v] + k] = pv[k] - pu[k];
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Rank over the prime field by Gaussian elimination.
pub fn rank_mod_p(mut m: Vec<Vec<Fp>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| m[r][c] != Fp::ZERO) else { continue };
        m.swap(rank, pivot);
        let inv = m[rank][c].inv();
        let (done, rest) = m.split_at_mut(rank + 1);
        let pivot_row = &done[rank];
        for row in rest.iter_mut().filter(|row| row[c] != Fp::ZERO) {
            let factor = row[c] * inv;
            for (x, &p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *x = *x - factor * p;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// The representative of `x` in `(-PRIME/2, PRIME/2]`, so small negative coordinates come
/// back as themselves.
fn signed(x: Fp) -> i128 {
    let v = x.value() as i128;
    if v > (PRIME / 2) as i128 {
        v - PRIME as i128
    } else {
        v
    }
}

/// Rank of the rigidity matrix at `p`, read as an integer matrix, by fraction-free
/// (Bareiss) elimination over the integers.
pub fn rational_rank(g: &Graph, p: &Placement) -> Result<usize, RigidityError> {
    let index = g.dense_index();
    let cols = 3 * index.len();
    let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(g.edge_count());
    for e in g.edges() {
        let (u, v) = e.endpoints();
        let pu = p.get(u).ok_or(RigidityError::MissingCoordinate(u))?;
        let pv = p.get(v).ok_or(RigidityError::MissingCoordinate(v))?;
        let mut row = vec![BigInt::zero(); cols];
        for k in 0..3 {
            let d = signed(pu[k]) - signed(pv[k]);
            row[3 * index[&u] + k] = BigInt::from(d);
            row[3 * index[&v] + k] = BigInt::from(-d);
        }
        m.push(row);
    }
    let rows = m.len();
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for c in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, pivot);
        for r in rank + 1..rows {
            for k in c + 1..cols {
                let v = (&m[rank][c] * &m[r][k] - &m[r][c] * &m[rank][k]) / &prev;
                m[r][k] = v;
            }
            m[r][c] = BigInt::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    Ok(rank)
}

/// Upper bound on the rank of any framework on `n` vertices in 3-space.
pub fn max_rank(n: usize) -> usize {
    match n {
        0 | 1 => 0,
        2 => 1,
        _ => 3 * n - 6,
    }
}

/// Maximum exact rank over `trials` random field placements seeded from `seed`.
pub fn generic_rank(g: &Graph, trials: usize, seed: u64) -> usize {
    let bound = max_rank(g.vertex_count()).min(g.edge_count());
    let mut best = 0;
    for t in 0..trials.max(1) {
        let p = Placement::random(g, seed.wrapping_add(t as u64));
        let m = rigidity_matrix(g, &p).expect("random placements cover every vertex");
        best = best.max(rank_mod_p(m));
        if best == bound {
            break;
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub vertices: usize,
    pub edges: usize,
    pub rank: usize,
    pub dof: i64,
    pub independent: bool,
    pub minimally_rigid: bool,
}

pub fn rigidity_report(g: &Graph, trials: usize, seed: u64) -> RigidityReport {
    let (n, m) = (g.vertex_count(), g.edge_count());
    let rank = generic_rank(g, trials, seed);
    RigidityReport {
        vertices: n,
        edges: m,
        rank,
        dof: max_rank(n) as i64 - rank as i64,
        independent: rank == m,
        minimally_rigid: n >= 3 && rank == m && m == max_rank(n),
    }
}

/// True when `|E| = 3|V| - 6` and the generic rank attains it.
pub fn is_min_3_rigid(g: &Graph, trials: usize, seed: u64) -> Result<bool, RigidityError> {
    let n = g.vertex_count();
    if n < 3 {
        return Err(RigidityError::TooFewVertices(n));
    }
    Ok(g.edge_count() == 3 * n - 6 && generic_rank(g, trials, seed) == 3 * n - 6)
}

/// Floating-point rank at a random placement, with relative pivot tolerance `1e-9`.
/// Diagnostic only; exact ranks come from [`generic_rank`].
pub fn approximate_rank(g: &Graph, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let index = g.dense_index();
    let pos: Vec<[f64; 3]> = index.keys().map(|_| [rng.gen(), rng.gen(), rng.gen()]).collect();
    let cols = 3 * index.len();
    let mut m: Vec<Vec<f64>> = g
        .edges()
        .map(|e| {
            let (u, v) = e.endpoints();
            let (iu, iv) = (index[&u], index[&v]);
            let mut row = vec![0.0; cols];
            for k in 0..3 {
                row[3 * iu + k] = pos[iu][k] - pos[iv][k];
                row[3 * iv + k] = pos[iv][k] - pos[iu][k];
            }
            row
        })
        .collect();
    let scale = m.iter().flatten().fold(0.0f64, |a, &x| a.max(x.abs())).max(f64::MIN_POSITIVE);
    let tol = 1e-9 * scale;
    let rows = m.len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs())) else {
            break;
        };
        if m[pivot][c].abs() <= tol {
            continue;
        }
        m.swap(rank, pivot);
        let (done, rest) = m.split_at_mut(rank + 1);
        let pivot_row = &done[rank];
        for row in rest.iter_mut() {
            let factor = row[c] / pivot_row[c];
            for (x, &p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *x -= factor * p;
            }
        }
        rank += 1;
    }
    rank
}
