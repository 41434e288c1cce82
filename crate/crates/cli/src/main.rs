//! `torhole`: generate holed tori and check, rank, classify and reduce them.
//!
//! Output is one JSON line per input graph, in input order. Exit status is 0 when every
//! graph gets a positive verdict, 2 when some verdict is negative, and 1 on any error.

mod input;

use std::collections::BTreeSet;
use std::io::{ErrorKind, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use torhole::catalog::{catalog, classify, CanonicalWalkClass, Verdict, WORDS};
use torhole::corpus::{gen_corpus, CorpusSpec};
use torhole::graph::{Edge, Graph};
use torhole::homology::{crossover_class, HomologyError};
use torhole::reduction::{
    certify, contract, is_uncontractible, reduce_greedy, reduction_tree, replay, validate_tree, ReductionNode,
};
use torhole::rigidity::{rigidity_report, DEFAULT_TRIALS};
use torhole::sparsity::{check_3_6, is_in_t};
use torhole::surface::io::{to_dot, GraphFile, Loaded};
use torhole::surface::TorusWithHole;

use input::{read_all, Record};

#[derive(Parser)]
#[command(name = "torhole", version, about = "Rigidity of triangulated tori with a hole")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads (defaults to one per core).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Args)]
struct Inputs {
    /// Graph files; standard input when none are given or for `-`.
    files: Vec<PathBuf>,
}

#[derive(Args)]
struct RankOpts {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Random holes cut from grid tori, one record per graph.
    Gen {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        min_side: usize,
        #[arg(long, default_value_t = 6)]
        max_side: usize,
        /// Holes per grid.
        #[arg(long, default_value_t = 4)]
        count: usize,
        /// Length of the hole's boundary walk.
        #[arg(long, default_value_t = 9)]
        boundary: usize,
    },
    /// (3,6)-sparsity verdict with a violating vertex set when there is one.
    Check(Inputs),
    /// Generic rank of the 3-dimensional rigidity matrix.
    Rank {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        rank: RankOpts,
    },
    /// Which of the seventeen boundary forms the hole has.
    Classify(Inputs),
    /// Homology classes of the crossover edges.
    Homology(Inputs),
    /// Greedy contraction sequence down to an uncontractible graph.
    Reduce {
        #[command(flatten)]
        inputs: Inputs,
        /// Replay every contraction and re-check its invariants.
        #[arg(long)]
        validate: bool,
    },
    /// Contraction and fission tree.
    Tree {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        validate: bool,
    },
    /// Vertex-splitting construction from a triangle.
    Certify {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        rank: RankOpts,
        /// Replay the splits, checking tightness and rank at every step.
        #[arg(long)]
        validate: bool,
    },
    /// The seventeen forms with their representative graphs.
    Catalog,
}

/// Result for one graph.
enum Report {
    Positive(Value),
    Negative(Value),
}

impl Report {
    fn verdict(ok: bool, v: Value) -> Report {
        if ok {
            Report::Positive(v)
        } else {
            Report::Negative(v)
        }
    }
}

fn holed(g: &Loaded) -> Result<&TorusWithHole> {
    match g {
        Loaded::Holed(h) => Ok(h),
        _ => bail!("this command needs a torus with exactly one hole"),
    }
}

fn json<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn edge_json(e: Edge) -> Value {
    json!([e.lo().0, e.hi().0])
}

fn check(g: &Loaded, format: Format) -> Result<Report> {
    let graph = g.graph();
    let v = check_3_6(&graph)?;
    if format == Format::Dot {
        let w = v.witness.clone().unwrap_or_default();
        let hl: BTreeSet<Edge> = graph.induced(&w).edges().collect();
        return Ok(Report::verdict(v.is_tight(), Value::String(to_dot(&graph, &hl))));
    }
    let mut out = json(&v);
    out["vertices"] = json!(graph.vertex_count());
    out["edges"] = json!(graph.edge_count());
    out["freedom"] = json!(graph.freedom());
    Ok(Report::verdict(v.is_tight(), out))
}

fn rank(g: &Loaded, opts: &RankOpts) -> Result<Report> {
    let r = rigidity_report(&g.graph(), opts.trials, opts.seed);
    Ok(Report::verdict(r.minimally_rigid, json(&r)))
}

fn classify_cmd(g: &Loaded, format: Format) -> Result<Report> {
    let h = holed(g)?;
    let c = classify(h)?;
    let ok = matches!(c.verdict, Verdict::Form { .. });
    if format == Format::Dot {
        let walk: BTreeSet<Edge> = h.detachment_walk().edges().collect();
        return Ok(Report::verdict(ok, Value::String(to_dot(h.graph(), &walk))));
    }
    let mut out = json(&c);
    out["walk"] = json!(h.detachment_walk().vertices().iter().map(|v| v.0).collect::<Vec<_>>());
    Ok(Report::verdict(ok, out))
}

fn homology(g: &Loaded) -> Result<Report> {
    let h = holed(g)?;
    let on_walk = h.boundary_vertices();
    let mut rows = Vec::new();
    let mut trivial = Vec::new();
    for e in h.graph().edges().filter(|e| on_walk.contains(&e.lo()) && on_walk.contains(&e.hi())) {
        match crossover_class(h, e) {
            Ok(classes) => {
                let cs: Vec<Value> = classes.iter().map(|z| json!([z.0, z.1])).collect();
                rows.push(json!({"edge": edge_json(e), "classes": cs}));
            }
            Err(HomologyError::NotACrossover(_)) => {}
            Err(HomologyError::TrivialClassFound(_)) => trivial.push(edge_json(e)),
            Err(err) => return Err(err.into()),
        }
    }
    Ok(Report::verdict(trivial.is_empty(), json!({"crossovers": rows, "trivial": trivial})))
}

/// Replays a greedy sequence from the start graph.
fn check_greedy(g: &TorusWithHole, edges: &[Edge], leaf: &TorusWithHole) -> Result<()> {
    let mut cur = g.clone();
    for &e in edges {
        let next = contract(&cur, e)?;
        if !is_in_t(&next) || next.hole_length() != g.hole_length() {
            bail!("contracting {e} leaves the class");
        }
        if next.graph().vertex_count() + 1 != cur.graph().vertex_count() {
            bail!("contracting {e} did not remove one vertex");
        }
        cur = next;
    }
    if cur.graph() != leaf.graph() || !is_uncontractible(&cur) {
        bail!("replayed leaf differs or is still contractible");
    }
    Ok(())
}

fn reduce(g: &Loaded, validate: bool) -> Result<Report> {
    let h = holed(g)?;
    let r = reduce_greedy(h)?;
    let edges: Vec<Edge> = r.steps.iter().map(|s| s.edge).collect();
    if validate {
        check_greedy(h, &edges, &r.leaf)?;
    }
    let leaf = &r.leaf;
    Ok(Report::Positive(json!({
        "moves": edges.iter().map(|&e| json!({"move": "contraction", "edge": edge_json(e)})).collect::<Vec<_>>(),
        "leaf": {
            "vertices": leaf.graph().vertex_count(),
            "edges": leaf.graph().edge_count(),
            "class": CanonicalWalkClass::of_walk(leaf.detachment_walk()).ok().map(|c| c.to_string()),
            "graph": GraphFile::from_holed(leaf),
        },
        "validated": validate,
    })))
}

fn node_json(n: &ReductionNode) -> Value {
    json!({
        "vertices": n.graph.graph().vertex_count(),
        "edges": n.graph.graph().edge_count(),
        "move": n.step.as_ref().map(json),
        "children": n.children.iter().map(node_json).collect::<Vec<_>>(),
    })
}

fn tree(g: &Loaded, validate: bool) -> Result<Report> {
    let t = reduction_tree(holed(g)?)?;
    if validate {
        validate_tree(&t)?;
    }
    let stats = t.stats();
    Ok(Report::Positive(json!({"stats": stats, "root": node_json(&t.root), "validated": validate})))
}

fn certify_cmd(g: &Loaded, opts: &RankOpts, validate: bool) -> Result<Report> {
    let h = holed(g)?;
    let cert = certify(h)?;
    let mut out = json(&cert);
    if validate {
        let r = replay(&cert, opts.trials, opts.seed)?;
        if &r.graph != h.graph() {
            bail!("replayed certificate builds a different graph");
        }
        out["ranks"] = json!(r.ranks);
    }
    out["validated"] = json!(validate);
    Ok(Report::Positive(out))
}

/// Writes to standard output; a closed pipe ends the program quietly.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        if e.kind() == ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("torhole: {e}");
        std::process::exit(1);
    }
}

fn run_each(records: Vec<Record>, f: impl Fn(&Loaded) -> Result<Report> + Sync) -> ExitCode {
    let results: Vec<(Record, Result<Report>)> = records
        .into_par_iter()
        .map(|r| {
            let res = r.graph.as_ref().map_err(|e| anyhow!("{e:#}")).and_then(&f);
            (r, res)
        })
        .collect();
    let mut status = 0u8;
    for (i, (rec, res)) in results.into_iter().enumerate() {
        let (body, code) = match res {
            Ok(Report::Positive(v)) => (v, 0),
            Ok(Report::Negative(v)) => (v, 2),
            Err(e) => (json!({"error": format!("{e:#}")}), 1),
        };
        // error outranks a negative verdict
        status = match (status, code) {
            (1, _) | (_, 1) => 1,
            (a, b) => a.max(b),
        };
        match body {
            Value::String(dot) => emit(&dot),
            mut v => {
                if let Value::Object(m) = &mut v {
                    m.insert("index".into(), json!(i));
                    m.insert("source".into(), json!(format!("{}:{}", rec.source, rec.line)));
                }
                emit(&format!("{v}\n"));
            }
        }
    }
    ExitCode::from(status)
}

fn gen(spec: &CorpusSpec, format: Format) {
    for (i, c) in gen_corpus(spec).iter().enumerate() {
        let g = &c.graph;
        if format == Format::Dot {
            let walk: BTreeSet<Edge> = g.detachment_walk().edges().collect();
            emit(&to_dot(g.graph(), &walk));
            continue;
        }
        let rec = json!({
            "index": i,
            "rows": c.rows,
            "cols": c.cols,
            "freedom": g.freedom(),
            "hole_length": g.hole_length(),
            "tight": is_in_t(g),
            "graph": GraphFile::from_holed(g),
        });
        emit(&format!("{rec}\n"));
    }
}

fn dump_catalog() -> Result<()> {
    for (i, h) in catalog().iter().enumerate() {
        let g: &Graph = h.graph();
        let rec = json!({
            "index": i + 1,
            "word": WORDS[i],
            "class": CanonicalWalkClass::of_walk(h.detachment_walk())?.to_string(),
            "vertices": g.vertex_count(),
            "edges": g.edge_count(),
            "graph": GraphFile::from_holed(h),
        });
        emit(&format!("{rec}\n"));
    }
    Ok(())
}

fn dot_unsupported(format: Format, name: &str) -> Result<()> {
    if format == Format::Dot {
        bail!("--format dot is not available for {name}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors count as errors, not as negative verdicts
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            emit(&format!("{}\n", json!({"error": format!("{e:#}")})));
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let format = cli.format;
    Ok(match cli.command {
        Command::Gen { seed, min_side, max_side, count, boundary } => {
            if min_side < 3 || max_side < min_side {
                bail!("grid sides must satisfy 3 <= min-side <= max-side");
            }
            gen(&CorpusSpec { min_side, max_side, per_grid: count, boundary, seed }, format);
            ExitCode::SUCCESS
        }
        Command::Check(inp) => run_each(read_all(&inp.files)?, |g| check(g, format)),
        Command::Rank { inputs, rank: opts } => {
            dot_unsupported(format, "rank")?;
            run_each(read_all(&inputs.files)?, |g| rank(g, &opts))
        }
        Command::Classify(inp) => run_each(read_all(&inp.files)?, |g| classify_cmd(g, format)),
        Command::Homology(inp) => {
            dot_unsupported(format, "homology")?;
            run_each(read_all(&inp.files)?, homology)
        }
        Command::Reduce { inputs, validate } => {
            dot_unsupported(format, "reduce")?;
            run_each(read_all(&inputs.files)?, |g| reduce(g, validate))
        }
        Command::Tree { inputs, validate } => {
            dot_unsupported(format, "tree")?;
            run_each(read_all(&inputs.files)?, |g| tree(g, validate))
        }
        Command::Certify { inputs, rank: opts, validate } => {
            dot_unsupported(format, "certify")?;
            run_each(read_all(&inputs.files)?, |g| certify_cmd(g, &opts, validate))
        }
        Command::Catalog => {
            dot_unsupported(format, "catalog")?;
            dump_catalog()?;
            ExitCode::SUCCESS
        }
    })
}
