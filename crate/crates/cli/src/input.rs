//! Reading graph files: a single JSON document, or JSON lines where each line is a graph
//! file or a `gen` record carrying one under `"graph"`.

use std::io::Read;
use std::path::PathBuf;

use anyhow::{anyhow, Context, Result};
use serde_json::Value;
use torhole::surface::io::{GraphFile, Loaded};

/// One input graph, tagged with where it came from.
pub struct Record {
    pub source: String,
    pub line: usize,
    pub graph: Result<Loaded>,
}

fn documents(text: &str) -> Result<Vec<(usize, Value)>> {
    if let Ok(v) = serde_json::from_str::<Value>(text) {
        return Ok(vec![(1, v)]);
    }
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map(|v| (i + 1, v)).with_context(|| format!("line {} is not JSON", i + 1))
        })
        .collect()
}

fn load(v: Value) -> Result<Loaded> {
    let inner = match v {
        Value::Object(mut m) if m.contains_key("graph") => m.remove("graph").expect("key checked"),
        other => other,
    };
    let file: GraphFile = serde_json::from_value(inner)?;
    Ok(file.load()?)
}

/// Reads every path in order; no paths, or `-`, means standard input.
pub fn read_all(paths: &[PathBuf]) -> Result<Vec<Record>> {
    let stdin = [PathBuf::from("-")];
    let paths = if paths.is_empty() { &stdin[..] } else { paths };
    let mut out = Vec::new();
    for p in paths {
        let (source, text) = if p.as_os_str() == "-" {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).context("reading standard input")?;
            ("-".to_string(), s)
        } else {
            let s = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            (p.display().to_string(), s)
        };
        let docs = documents(&text).with_context(|| format!("parsing {source}"))?;
        if docs.is_empty() {
            return Err(anyhow!("{source} holds no graphs"));
        }
        out.extend(docs.into_iter().map(|(line, v)| Record { source: source.clone(), line, graph: load(v) }));
    }
    Ok(out)
}
