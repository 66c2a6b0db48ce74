use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::io::Read as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use fasolve::cycles::{cycle_components_of, CycleSubgraph};
use fasolve::heuristics::{greedy_cut, greedy_cut_resolve, hybrid_strategy, lower_bounds, BoundReport, Effective};
use fasolve::io::{
    display_id, parse_id, parse_instance, write_dot, write_fas, write_fvs, Instance, ParseOptions, Parsed,
};
use fasolve::meta::{check_cycle, meta_cycle_dim, meta_graph};
use fasolve::oracle::{brute_force_fasp, brute_force_fvsp};
use fasolve::reductions::{fasp_to_fvsp, fvsp_to_fasp, solve_fvs, RimWeights};
use fasolve::{
    auto, cut_resolve_with, cut_with, cycle_closure, cycle_space_dim, elementary_subgraph, essential_minor, fixtures,
    global_m, resolve, simple_subgraph, solve_resolvable, ArcId, FeedbackReport, SolverConfig, VertexWeightedDigraph,
    WeightedMultiDigraph,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Command, EffectiveArg, Input, KindArg, Problem, RimArg, SolveMethod};

pub fn run(cmd: Command) -> Result<String> {
    match cmd {
        Command::Solve {
            input,
            method,
            m_budget,
            threshold,
            dot,
        } => solve(&input, method, m_budget, threshold, dot),
        Command::Resolve { input } => resolve_cmd(&input),
        Command::Greedy {
            input,
            effective,
            resolve,
        } => greedy(&input, effective, resolve),
        Command::Bounds { input } => bounds(&input),
        Command::Analyze {
            input,
            anchor,
            kind,
            meta,
            seed,
        } => analyze(&input, anchor, kind, meta, &seed),
        Command::Reduce {
            input,
            to,
            rims,
            minor,
            kappa,
        } => reduce(&input, to, rims, minor, kappa.as_deref()),
        Command::Oracle { input, all } => oracle(&input, all),
        Command::Bench {
            dir,
            methods,
            out,
            no_timing,
        } => {
            let csv = crate::bench::run(&dir, &methods, !no_timing)?;
            match out {
                Some(path) => {
                    fs::write(&path, csv).with_context(|| format!("writing {}", path.display()))?;
                    Ok(String::new())
                }
                None => Ok(csv),
            }
        }
        Command::Generate {
            dir,
            random,
            seed,
            arcs,
        } => generate(&dir, random, seed, &arcs),
    }
}

pub fn read_instance(path: &Path, strip_loops: bool) -> Result<Parsed> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        s
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    Ok(parse_instance(&text, ParseOptions { strip_loops })?)
}

fn load(input: &Input) -> Result<(Parsed, String)> {
    let parsed = read_instance(&input.file, input.strip_loops)?;
    let mut out = String::new();
    for l in &parsed.loops {
        writeln!(
            out,
            "c stripped loop: arc {} at vertex {} (line {}, weight {})",
            display_id(l.arc),
            l.vertex,
            l.line,
            l.weight
        )?;
    }
    Ok((parsed, out))
}

fn load_fas(input: &Input) -> Result<(WeightedMultiDigraph, Parsed, String)> {
    let (parsed, out) = load(input)?;
    match &parsed.instance {
        Instance::Fas(g) => Ok((g.clone(), parsed, out)),
        Instance::Fvs(_) => bail!("this command needs a `p fas` instance"),
    }
}

/// Arc ids in the order `write_fas` emits them.
fn line_order(g: &WeightedMultiDigraph) -> Vec<ArcId> {
    g.arc_ids().collect()
}

fn arc_lines(out: &mut String, ids: impl IntoIterator<Item = ArcId>) {
    for id in ids {
        let _ = writeln!(out, "e {}", display_id(id));
    }
}

/// `s` line and `e` lines; stripped loops are part of every solution.
fn emit_arcs(out: &mut String, parsed: &Parsed, weight: u64, certified: bool, ids: &BTreeSet<ArcId>) {
    let loops: u64 = parsed.loops.iter().map(|l| l.weight).sum();
    let mut all = ids.clone();
    all.extend(parsed.loops.iter().map(|l| l.arc));
    let _ = writeln!(out, "s {} {}", weight + loops, u8::from(certified));
    arc_lines(out, all);
}

fn emit_vertices(
    out: &mut String,
    g: &VertexWeightedDigraph,
    parsed: &Parsed,
    weight: u64,
    certified: bool,
    vs: &BTreeSet<usize>,
) -> Result<()> {
    let looped: BTreeSet<usize> = parsed.loops.iter().map(|l| l.vertex).collect();
    let extra: Vec<usize> = looped.difference(vs).copied().collect();
    let weight = weight + g.weight_of(&extra)?;
    writeln!(out, "s {} {}", weight, u8::from(certified))?;
    for v in vs.union(&looped) {
        writeln!(out, "v {v}")?;
    }
    Ok(())
}

fn bounds_line(out: &mut String, b: &BoundReport) {
    let mu = b.mu.map_or_else(|| "-".to_string(), |m| m.to_string());
    let _ = writeln!(out, "b mu {} upsilon {} upper {}", mu, b.upsilon, b.upper);
}

fn report_header(out: &mut String, r: &FeedbackReport) {
    let _ = write!(out, "c method {}", r.method);
    if let Some(m) = r.stats.m_parameter {
        let _ = write!(out, " m {m}");
    }
    let _ = writeln!(out, " time {:.3} ms", r.stats.wall_time.as_secs_f64() * 1e3);
}

fn solve(input: &Input, method: SolveMethod, m_budget: usize, threshold: usize, dot: bool) -> Result<String> {
    let (parsed, mut out) = load(input)?;
    let cfg = SolverConfig {
        m_budget,
        ..SolverConfig::default()
    };
    let solver = |g: &WeightedMultiDigraph| -> fasolve::Result<FeedbackReport> {
        match method {
            SolveMethod::Auto => auto(g, &cfg),
            SolveMethod::Cut => cut_with(g, &cfg),
            SolveMethod::CutResolve => cut_resolve_with(g, &cfg),
            SolveMethod::Resolvable => solve_resolvable(g),
            SolveMethod::Hybrid => hybrid_strategy(g, threshold).map(|h| h.report),
            SolveMethod::Oracle => unreachable!("oracle is handled separately"),
        }
    };
    match &parsed.instance {
        Instance::Fas(g) => {
            if method == SolveMethod::Oracle {
                let r = brute_force_fasp(g)?;
                writeln!(out, "c method oracle")?;
                emit_arcs(&mut out, &parsed, r.optimum, true, r.first().ids());
                if dot {
                    out.push_str(&write_dot(g, r.first().ids()));
                }
                return Ok(out);
            }
            let r = solver(g)?;
            report_header(&mut out, &r);
            if r.bounds.is_some() {
                bounds_line(&mut out, &lower_bounds(g));
            }
            emit_arcs(&mut out, &parsed, r.weight, r.certified_optimal, r.solution.ids());
            if dot {
                out.push_str(&write_dot(g, r.solution.ids()));
            }
        }
        Instance::Fvs(g) => {
            if method == SolveMethod::Oracle {
                let r = brute_force_fvsp(g)?;
                writeln!(out, "c method oracle")?;
                emit_vertices(&mut out, g, &parsed, r.optimum, true, &r.all_optimal_sets[0])?;
                return Ok(out);
            }
            let (vs, w, r) = solve_fvs(g, solver)?;
            report_header(&mut out, &r);
            writeln!(out, "c solved through the arc gadget graph")?;
            emit_vertices(&mut out, g, &parsed, w, r.certified_optimal, &vs)?;
        }
    }
    Ok(out)
}

fn resolve_cmd(input: &Input) -> Result<String> {
    let (g, parsed, mut out) = load_fas(input)?;
    let trace = resolve(&g)?;
    let committed = trace.committed();
    writeln!(out, "r {}", if trace.resolvable { "yes" } else { "no" })?;
    writeln!(out, "c committed weight {}", committed.weight())?;
    let mut ids = committed.ids().clone();
    ids.extend(parsed.loops.iter().map(|l| l.arc));
    arc_lines(&mut out, ids);
    if !trace.resolvable {
        writeln!(
            out,
            "c resolved graph; k lines give the input arcs a cut of each arc stands for"
        )?;
        out.push_str(&write_fas(&trace.resolved));
        for (k, id) in line_order(&trace.resolved).into_iter().enumerate() {
            kappa_line(&mut out, k, &trace.lift([id].iter())?);
        }
    }
    Ok(out)
}

fn kappa_line(out: &mut String, k: usize, origin: &BTreeSet<ArcId>) {
    let _ = write!(out, "k {}", k + 1);
    for &a in origin {
        let _ = write!(out, " {}", display_id(a));
    }
    out.push('\n');
}

fn greedy(input: &Input, effective: EffectiveArg, with_resolve: bool) -> Result<String> {
    let (g, parsed, mut out) = load_fas(input)?;
    let eff = match effective {
        EffectiveArg::Xi => Effective::Xi,
        EffectiveArg::Eta => Effective::Eta,
    };
    let r = if with_resolve {
        greedy_cut_resolve(&g, eff)?
    } else {
        greedy_cut(&g, eff)?
    };
    report_header(&mut out, &r);
    bounds_line(&mut out, &lower_bounds(&g));
    emit_arcs(&mut out, &parsed, r.weight, r.certified_optimal, r.solution.ids());
    Ok(out)
}

fn bounds(input: &Input) -> Result<String> {
    let (g, _, mut out) = load_fas(input)?;
    let b = lower_bounds(&g);
    let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
    writeln!(out, "c cycles {}", opt(b.cycles.map(|c| c.to_string())))?;
    writeln!(
        out,
        "c theta_max {} phi_max {}",
        opt(b.theta_max.map(|t| t.to_string())),
        b.phi_max
    )?;
    writeln!(
        out,
        "c xi_max {} eta_max {}",
        opt(b.xi_max.map(|x| x.to_string())),
        b.eta_max
    )?;
    bounds_line(&mut out, &b);
    Ok(out)
}

fn arc_arg(g: &WeightedMultiDigraph, text: usize) -> Result<ArcId> {
    let id = parse_id(&text.to_string()).with_context(|| format!("arc ids are 1-based, got {text}"))?;
    if !g.contains_arc(id) {
        bail!("arc {text} does not exist");
    }
    Ok(id)
}

fn emit_subgraph(out: &mut String, g: &WeightedMultiDigraph, sub: &CycleSubgraph, anchor: ArcId) -> Result<()> {
    let h = sub.subgraph(g);
    writeln!(out, "c {:?} cycle subgraph of arc {}", sub.kind, display_id(anchor))?;
    if !sub.parallels.is_empty() {
        let ps: Vec<String> = sub.parallels.iter().map(|&p| display_id(p).to_string()).collect();
        writeln!(out, "c parallel to the anchor: {}", ps.join(" "))?;
    }
    out.push_str(&write_fas(&h));
    for (k, id) in line_order(&h).into_iter().enumerate() {
        kappa_line(out, k, &BTreeSet::from([id]));
    }
    out.push_str(&write_dot(&h, &BTreeSet::from([anchor])));
    Ok(())
}

fn analyze(input: &Input, anchor: Option<usize>, kind: KindArg, meta: bool, seed: &[usize]) -> Result<String> {
    let (g, _, mut out) = load_fas(input)?;
    if let Some(a) = anchor {
        let e = arc_arg(&g, a)?;
        let sub = match kind {
            KindArg::El => elementary_subgraph(&g, e)?,
            KindArg::Si => simple_subgraph(&g, e)?,
        };
        emit_subgraph(&mut out, &g, &sub, e)?;
    }
    if meta {
        let cycle: Vec<ArcId> = seed.iter().map(|&s| arc_arg(&g, s)).collect::<Result<_>>()?;
        check_cycle(&g, &cycle)?;
        let m = meta_graph(&g, &cycle)?;
        writeln!(
            out,
            "c meta graph: {} nodes, {} edges, m(c) = {}",
            m.nodes.len(),
            m.edges.len(),
            m.cycle_dim()
        )?;
        for &f in &m.seed_cycle {
            writeln!(out, "m {} {}", display_id(f), meta_cycle_dim(&m, f)?)?;
        }
        out.push_str(&m.to_dot());
    }
    if anchor.is_none() && !meta {
        let closure = cycle_closure(&g);
        writeln!(out, "c vertices {} arcs {}", g.num_vertices(), g.num_arcs())?;
        writeln!(out, "c arcs on cycles {}", closure.num_arcs())?;
        writeln!(out, "c cycle components {}", cycle_components_of(&g).len())?;
        writeln!(out, "c cycle space dimension {}", cycle_space_dim(&g))?;
        writeln!(out, "c global m {}", global_m(&g)?)?;
        writeln!(
            out,
            "c resolvable {}",
            if resolve(&g)?.resolvable { "yes" } else { "no" }
        )?;
    }
    Ok(out)
}

fn reduce(input: &Input, to: Option<Problem>, rims: RimArg, minor: bool, kappa: Option<&Path>) -> Result<String> {
    let (parsed, mut out) = load(input)?;
    match (&parsed.instance, to, minor) {
        (Instance::Fas(g), _, true) => {
            let t = essential_minor(g)?;
            if !t.forced.is_empty() {
                let ids: Vec<String> = t.forced.iter().map(|a| display_id(a).to_string()).collect();
                writeln!(out, "c forced {}", ids.join(" "))?;
            }
            out.push_str(&write_fas(&t.minor));
            let mut k = String::new();
            for (i, id) in line_order(&t.minor).into_iter().enumerate() {
                kappa_line(&mut k, i, &t.kappa[&id]);
            }
            match kappa {
                Some(path) => fs::write(path, k).with_context(|| format!("writing {}", path.display()))?,
                None => out.push_str(&k),
            }
        }
        (Instance::Fas(g), Some(Problem::Fvs), false) => {
            let tr = fasp_to_fvsp(g);
            writeln!(out, "c line graph: vertex k is input arc k")?;
            out.push_str(&write_fvs(&tr.as_vertex_weighted().expect("line graph")));
        }
        (Instance::Fvs(g), Some(Problem::Fas), false) => {
            let rims = match rims {
                RimArg::Heavy => RimWeights::Heavy,
                RimArg::Literal => RimWeights::Literal,
            };
            let tr = fvsp_to_fasp(g, rims)?;
            writeln!(
                out,
                "c gadget graph: arc k for k <= {} is the gadget of the k-th vertex",
                g.num_vertices()
            )?;
            out.push_str(&write_fas(&tr.transformed));
        }
        (_, None, false) => bail!("nothing to do: pass --to fas|fvs or --minor"),
        (Instance::Fvs(_), _, true) => bail!("--minor needs a `p fas` instance"),
        (Instance::Fas(_), Some(Problem::Fas), _) | (Instance::Fvs(_), Some(Problem::Fvs), _) => {
            bail!("the instance already is of the requested kind")
        }
    }
    Ok(out)
}

fn oracle(input: &Input, all: bool) -> Result<String> {
    let (parsed, mut out) = load(input)?;
    match &parsed.instance {
        Instance::Fas(g) => {
            let r = brute_force_fasp(g)?;
            emit_arcs(&mut out, &parsed, r.optimum, true, r.first().ids());
            if all {
                writeln!(out, "c {} optimal sets", r.all_optimal_sets.len())?;
                for set in &r.all_optimal_sets {
                    let ids: Vec<String> = set.iter().map(|a| display_id(a).to_string()).collect();
                    writeln!(out, "o {}", ids.join(" "))?;
                }
            }
        }
        Instance::Fvs(g) => {
            let r = brute_force_fvsp(g)?;
            emit_vertices(&mut out, g, &parsed, r.optimum, true, &r.all_optimal_sets[0])?;
            if all {
                writeln!(out, "c {} optimal sets", r.all_optimal_sets.len())?;
                for set in &r.all_optimal_sets {
                    let vs: Vec<String> = set.iter().map(|v| v.to_string()).collect();
                    writeln!(out, "o {}", vs.join(" "))?;
                }
            }
        }
    }
    Ok(out)
}

fn named_file(header: &str, f: &fixtures::Named) -> String {
    let mut s = String::from(header);
    for (k, name) in f.names().iter().enumerate() {
        let _ = writeln!(s, "c arc {} is {}", k + 1, name);
    }
    s + &write_fas(&f.graph)
}

fn parse_range(text: &str) -> Result<std::ops::RangeInclusive<usize>> {
    let (lo, hi) = text
        .split_once("..=")
        .with_context(|| format!("expected `lo..=hi`, got `{text}`"))?;
    let (lo, hi): (usize, usize) = (lo.trim().parse()?, hi.trim().parse()?);
    if lo > hi {
        bail!("empty range `{text}`");
    }
    Ok(lo..=hi)
}

const PARALLEL_EXAMPLE: &str = "c parallel-arc example: a=1, b=2, c=3.\n\
c structure-only: no weights are given, unit weights are used.\n";
const CACTUS: &str = "c cactus-like graph rebuilt from its isolated cycles\n\
c {e1,f1} {e2,f3} {e3,f3} {e4,f4} {e5,e6,e7,f5,f4} {e5,e8,e9,e7,f5,f4}.\n\
c reconstructed weights: none are given for this graph, these are chosen.\n";
const RELATIVE_WEIGHT_EXAMPLE: &str = "c relative-weight example, x=1 y=2 z=3 w=4.\n\
c reconstructed weights, pinned by the quoted arithmetic: w(e1) = 5, sigma(e1) = 3,\n\
c best solutions with e3 and with d3 weigh 8 and 7, subproblem difference 1.\n";
const D3: &str = "c directed clique D3, unit weights.\n";

fn generate(dir: &Path, random: Option<usize>, seed: u64, arcs: &str) -> Result<String> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut files: Vec<(String, String)> = Vec::new();
    match random {
        Some(count) => {
            let spec = fixtures::RandomSpec::small().with_arcs(parse_range(arcs)?);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for i in 0..count {
                let g = fixtures::random_graph(&mut rng, &spec);
                let header = format!("c random instance {i}, seed {seed}, arcs {arcs}\n");
                files.push((format!("random_{i:03}.fas"), header + &write_fas(&g)));
            }
        }
        None => {
            files.push((
                "parallel_example.fas".into(),
                named_file(PARALLEL_EXAMPLE, &fixtures::parallel_example()),
            ));
            files.push(("cactus.fas".into(), named_file(CACTUS, &fixtures::cactus())));
            files.push((
                "relative_weight_example.fas".into(),
                named_file(RELATIVE_WEIGHT_EXAMPLE, &fixtures::relative_weight_example()),
            ));
            files.push(("d3.fas".into(), format!("{D3}{}", write_fas(&fixtures::d3()))));
            for d in 1..=8 {
                let header = format!("c diamond chain, {d} diamonds in a ring, unit weights\n");
                files.push((
                    format!("diamond_{d}.fas"),
                    header + &write_fas(&fixtures::diamond_chain(d)),
                ));
            }
        }
    }
    let mut out = String::new();
    for (name, text) in files {
        let path = dir.join(&name);
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        writeln!(out, "c wrote {}", path.display())?;
    }
    Ok(out)
}
