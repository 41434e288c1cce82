//! JSON graph files and DOT export.
//!
//! ```json
//! {"vertices": 9, "faces": [[0,1,2], ...], "holes": [[3,4,5]]}
//! ```
//!
//! A hole is a list of face indices, or `{"faces": [...], "seams": [[a,b], ...]}` when some
//! edges between disc faces are boundary seams. Optional keys: `"edges"` for plain graphs,
//! `"cochain"` as `[a, b, x, y]` rows giving the value `(x, y)` on `a -> b`, and
//! `"grid": [rows, cols]`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::complex::{build_complex, GridProvenance, TorusComplex};
use super::hole::{cut_hole, cut_holes, DiscMap, HoledTorus, TorusWithHole};
use super::SurfaceError;
use crate::graph::{Edge, Graph, VertexId};
use crate::homology::{EdgeCochain, Z2Vector};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed graph file: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("vertex {0} exceeds the declared vertex count")]
    VertexOutOfRange(u32),
    #[error("edge list contains a loop at {0}")]
    Loop(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum HoleSpec {
    Faces(Vec<usize>),
    WithSeams { faces: Vec<usize>, seams: Vec<[u32; 2]> },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub faces: Vec<[u32; 3]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    holes: Vec<HoleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<[u32; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cochain: Option<Vec<[i64; 4]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<[usize; 2]>,
}

/// What a graph file describes.
#[derive(Clone, Debug)]
pub enum Loaded {
    Plain(Graph),
    Torus(TorusComplex),
    Holed(TorusWithHole),
    MultiHoled(HoledTorus),
}

impl Loaded {
    /// The underlying graph, whatever the kind.
    pub fn graph(&self) -> Graph {
        match self {
            Loaded::Plain(g) => g.clone(),
            Loaded::Torus(t) => t.graph(),
            Loaded::Holed(h) => h.graph().clone(),
            Loaded::MultiHoled(h) => h.graph().clone(),
        }
    }
}

fn check_range(n: u32, v: u32) -> Result<VertexId, IoError> {
    if v < n {
        Ok(VertexId(v))
    } else {
        Err(IoError::VertexOutOfRange(v))
    }
}

impl GraphFile {
    pub fn load(&self) -> Result<Loaded, IoError> {
        let n = self.vertices;
        if self.faces.is_empty() {
            let mut g = Graph::new();
            for v in 0..n {
                g.add_vertex(VertexId(v));
            }
            for &[a, b] in self.edges.iter().flatten() {
                let e = Edge::new(check_range(n, a)?, check_range(n, b)?).ok_or(IoError::Loop(a))?;
                g.add_edge(e);
            }
            return Ok(Loaded::Plain(g));
        }
        let mut triples = Vec::with_capacity(self.faces.len());
        for f in &self.faces {
            triples.push([check_range(n, f[0])?, check_range(n, f[1])?, check_range(n, f[2])?]);
        }
        let mut torus = TorusComplex::new(build_complex(triples)?)?;
        if let Some([rows, cols]) = self.grid {
            torus.set_provenance(GridProvenance { rows, cols });
        }
        if let Some(rows) = &self.cochain {
            let mut c = EdgeCochain::default();
            for &[a, b, x, y] in rows {
                c.set(check_range(n, a as u32)?, check_range(n, b as u32)?, Z2Vector(x, y));
            }
            torus = torus.with_cochain(c)?;
        }
        let mut discs = Vec::with_capacity(self.holes.len());
        for h in &self.holes {
            discs.push(match h {
                HoleSpec::Faces(f) => DiscMap::new(f.iter().copied()),
                HoleSpec::WithSeams { faces, seams } => {
                    let mut es = Vec::with_capacity(seams.len());
                    for &[a, b] in seams {
                        let e = Edge::new(check_range(n, a)?, check_range(n, b)?)
                            .ok_or(IoError::Loop(a))?;
                        es.push(e);
                    }
                    DiscMap::new(faces.iter().copied()).with_seams(es)
                }
            });
        }
        Ok(match discs.len() {
            0 => Loaded::Torus(torus),
            1 => Loaded::Holed(cut_hole(&torus, discs.pop().unwrap())?),
            _ => Loaded::MultiHoled(cut_holes(&torus, discs)?),
        })
    }

    pub fn from_graph(g: &Graph) -> GraphFile {
        GraphFile {
            vertices: g.vertices().map(|v| v.0 + 1).max().unwrap_or(0),
            edges: Some(g.edges().map(|e| [e.lo().0, e.hi().0]).collect()),
            ..GraphFile::default()
        }
    }

    pub fn from_torus(t: &TorusComplex) -> GraphFile {
        GraphFile {
            vertices: t.complex().vertices().iter().map(|v| v.0 + 1).max().unwrap_or(0),
            faces: t.faces().iter().map(|f| f.corners().map(|v| v.0)).collect(),
            cochain: t.cochain().map(|c| {
                c.entries().map(|(e, z)| [e.lo().0 as i64, e.hi().0 as i64, z.0, z.1]).collect()
            }),
            grid: t.provenance().map(|p| [p.rows, p.cols]),
            ..GraphFile::default()
        }
    }

    pub fn from_holed(h: &TorusWithHole) -> GraphFile {
        let disc = h.disc();
        let hole = if disc.seams().is_empty() {
            HoleSpec::Faces(disc.faces().to_vec())
        } else {
            HoleSpec::WithSeams {
                faces: disc.faces().to_vec(),
                seams: disc.seams().iter().map(|e| [e.lo().0, e.hi().0]).collect(),
            }
        };
        GraphFile { holes: vec![hole], ..GraphFile::from_torus(h.torus()) }
    }

    pub fn from_multi(h: &HoledTorus) -> GraphFile {
        let holes = h
            .discs()
            .iter()
            .map(|d| {
                if d.seams().is_empty() {
                    HoleSpec::Faces(d.faces().to_vec())
                } else {
                    HoleSpec::WithSeams {
                        faces: d.faces().to_vec(),
                        seams: d.seams().iter().map(|e| [e.lo().0, e.hi().0]).collect(),
                    }
                }
            })
            .collect();
        GraphFile { holes, ..GraphFile::from_torus(h.torus()) }
    }
}

pub fn parse(text: &str) -> Result<Loaded, IoError> {
    serde_json::from_str::<GraphFile>(text)?.load()
}

pub fn to_json(h: &TorusWithHole) -> serde_json::Value {
    serde_json::to_value(GraphFile::from_holed(h)).expect("graph files serialize")
}

/// DOT rendering of a graph; `highlight` edges are drawn thick and red.
pub fn to_dot(g: &Graph, highlight: &BTreeSet<Edge>) -> String {
    let mut out = String::from("graph G {\n");
    for v in g.vertices() {
        let _ = writeln!(out, "  {v};");
    }
    for e in g.edges() {
        if highlight.contains(&e) {
            let _ = writeln!(out, "  {} -- {} [color=red, penwidth=2];", e.lo(), e.hi());
        } else {
            let _ = writeln!(out, "  {} -- {};", e.lo(), e.hi());
        }
    }
    out.push_str("}\n");
    out
}
