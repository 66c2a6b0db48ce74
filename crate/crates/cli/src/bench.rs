//! Benchmark harness: every method on every instance of a directory, one
//! CSV row each. Rows are ordered by file name then method, so output is
//! byte-stable apart from the timing column.

use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use fasolve::heuristics::{greedy_cut, lower_bounds, Effective};
use fasolve::io::Instance;
use fasolve::oracle::{brute_force_fasp, fasp_optimum};
use fasolve::reductions::{fvsp_to_fasp, RimWeights};
use fasolve::{cut, cut_resolve, global_m, FeedbackReport, Weight, WeightedMultiDigraph};
use serde::Serialize;

use crate::BenchMethod;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenchRecord {
    pub instance: String,
    pub vertices: usize,
    pub arcs: usize,
    pub method: String,
    pub weight: Option<Weight>,
    pub certified: Option<bool>,
    pub mu: Option<Weight>,
    pub upsilon: Option<Weight>,
    pub m: Option<usize>,
    /// Brute-force optimum when the oracle's size guard allows it.
    pub oracle: Option<Weight>,
    pub status: String,
    pub ms: Option<String>,
}

impl BenchMethod {
    fn name(self) -> &'static str {
        match self {
            BenchMethod::Cut => "cut",
            BenchMethod::CutResolve => "cut-resolve",
            BenchMethod::Greedy => "greedy-xi",
            BenchMethod::GreedyEta => "greedy-eta",
            BenchMethod::Oracle => "oracle",
        }
    }

    fn exact(self) -> bool {
        matches!(self, BenchMethod::Cut | BenchMethod::CutResolve | BenchMethod::Oracle)
    }

    fn solve(self, g: &WeightedMultiDigraph) -> fasolve::Result<(Weight, bool)> {
        let report = |r: FeedbackReport| (r.weight, r.certified_optimal);
        match self {
            BenchMethod::Cut => cut(g).map(report),
            BenchMethod::CutResolve => cut_resolve(g).map(report),
            BenchMethod::Greedy => greedy_cut(g, Effective::Xi).map(report),
            BenchMethod::GreedyEta => greedy_cut(g, Effective::Eta).map(report),
            BenchMethod::Oracle => brute_force_fasp(g).map(|r| (r.optimum, true)),
        }
    }
}

/// The arc instance to benchmark; vertex instances go through the gadget
/// graph.
fn arc_instance(path: &Path) -> Result<WeightedMultiDigraph> {
    let parsed = crate::commands::read_instance(path, false)?;
    Ok(match parsed.instance {
        Instance::Fas(g) => g,
        Instance::Fvs(g) => fvsp_to_fasp(&g, RimWeights::Heavy)?.transformed,
    })
}

fn records_for(name: &str, path: &Path, methods: &[BenchMethod], timing: bool) -> Vec<BenchRecord> {
    let blank = |method: &str, status: String| BenchRecord {
        instance: name.to_string(),
        vertices: 0,
        arcs: 0,
        method: method.to_string(),
        weight: None,
        certified: None,
        mu: None,
        upsilon: None,
        m: None,
        oracle: None,
        status,
        ms: None,
    };
    let g = match arc_instance(path) {
        Ok(g) => g,
        Err(e) => return vec![blank("-", format!("parse error: {e:#}"))],
    };
    let bounds = lower_bounds(&g);
    let m = global_m(&g).ok();
    let oracle = fasp_optimum(&g).ok();
    methods
        .iter()
        .map(|&method| {
            let mut rec = blank(method.name(), String::new());
            rec.vertices = g.num_vertices();
            rec.arcs = g.num_arcs();
            rec.mu = bounds.mu;
            rec.upsilon = Some(bounds.upsilon);
            rec.m = m;
            rec.oracle = oracle;
            let start = Instant::now();
            let result = method.solve(&g);
            if timing {
                rec.ms = Some(format!("{:.3}", start.elapsed().as_secs_f64() * 1e3));
            }
            rec.status = match result {
                Ok((w, certified)) => {
                    rec.weight = Some(w);
                    rec.certified = Some(certified);
                    if w < bounds.lower() {
                        "bound violated".into()
                    } else if method.exact() && oracle.is_some_and(|o| o != w) {
                        "oracle mismatch".into()
                    } else {
                        "ok".into()
                    }
                }
                Err(e) => format!("refused: {e}"),
            };
            rec
        })
        .collect()
}

/// CSV table for every file in `dir` (sorted by name) and every method.
pub fn run(dir: &Path, methods: &[BenchMethod], timing: bool) -> Result<String> {
    let mut entries: Vec<_> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.is_file() && matches!(p.extension().and_then(|x| x.to_str()), Some("fas" | "fvs")))
        .collect();
    entries.sort();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut wrote_any = false;
    for path in &entries {
        let name = path.file_name().unwrap_or_default().to_string_lossy();
        for rec in records_for(&name, path, methods, timing) {
            w.serialize(rec)?;
            wrote_any = true;
        }
    }
    if !wrote_any {
        w.write_record([
            "instance",
            "vertices",
            "arcs",
            "method",
            "weight",
            "certified",
            "mu",
            "upsilon",
            "m",
            "oracle",
            "status",
            "ms",
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}
