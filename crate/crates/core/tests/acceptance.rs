//! Acceptance suite: one line per criterion, `PASS` or `FAIL`, with the
//! measured values next to the pinned tolerances. Exits non-zero if any
//! criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use fasolve::fixtures::{self, RandomSpec};
use fasolve::heuristics::{greedy_cut, lower_bounds, theta, Effective};
use fasolve::meta::{meta_graph, relative_weight_general};
use fasolve::oracle::{brute_force_fasp, brute_force_fvsp, enumerate_elementary_cycles, fasp_optimum};
use fasolve::reductions::{fvsp_to_fasp, solve_fvs, RimWeights};
use fasolve::{
    cut, cut_resolve, cut_with, elementary_subgraph, essential_minor, is_acyclic, lift_solution, resolve,
    solve_resolvable, SolverConfig, Weight, WeightedMultiDigraph,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x05ee_dfa5;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn suite(n: usize, spec: &RandomSpec, seed: u64) -> Vec<WeightedMultiDigraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| fixtures::random_graph(&mut rng, spec)).collect()
}

fn exactness(solver: fn(&WeightedMultiDigraph) -> fasolve::Result<fasolve::FeedbackReport>) -> Outcome {
    let graphs = suite(500, &RandomSpec::small(), SEED);
    let mut wrong = 0;
    let mut infeasible = 0;
    let mut solve_time = Duration::ZERO;
    for g in &graphs {
        let start = Instant::now();
        let r = solver(g).expect("solver succeeds");
        solve_time += start.elapsed();
        if r.weight != fasp_optimum(g).unwrap() {
            wrong += 1;
        }
        if !is_acyclic(&g.without_arcs(r.solution.ids())) {
            infeasible += 1;
        }
    }
    outcome(
        wrong == 0 && infeasible == 0 && solve_time < Duration::from_secs(60),
        format!(
            "500 instances, {wrong} weight mismatches, {infeasible} infeasible, solve time {:.2?} (limit 60 s)",
            solve_time
        ),
    )
}

fn c3_minor_invariance() -> Outcome {
    let graphs = suite(200, &RandomSpec::small(), SEED + 3);
    let mut bad = 0;
    for g in &graphs {
        let omega = fasp_optimum(g).unwrap();
        let t = essential_minor(g).unwrap();
        let inner = brute_force_fasp(&t.minor).unwrap();
        let lifted = lift_solution(&t, inner.first().ids()).unwrap();
        let invariant = inner.optimum + t.forced.weight() == omega;
        let feasible = is_acyclic(&g.without_arcs(lifted.ids())) && lifted.weight() == omega;
        if !(invariant && feasible) {
            bad += 1;
        }
    }
    outcome(
        bad == 0,
        format!("200 instances (<= 12 arcs), {bad} violations of Ω(C,δ) + forced = Ω(G) or lifted feasibility"),
    )
}

fn c4_elementary_subgraph() -> Outcome {
    let graphs = suite(200, &RandomSpec::small().with_arcs(4..=10), SEED + 4);
    let (mut anchors, mut bad) = (0, 0);
    for g in &graphs {
        let cycles = enumerate_elementary_cycles(g, 10_000).unwrap();
        for e in g.arc_ids() {
            anchors += 1;
            let want: BTreeSet<_> = cycles.iter().filter(|c| c.contains(&e)).flatten().copied().collect();
            let got: BTreeSet<_> = elementary_subgraph(g, e).unwrap().ids().into_iter().collect();
            if got != want {
                bad += 1;
            }
        }
    }
    outcome(
        bad == 0,
        format!("200 instances (<= 10 arcs), {anchors} anchors, {bad} differ from the Johnson union"),
    )
}

fn c5_bellman() -> Outcome {
    let graphs = suite(100, &RandomSpec::small().with_arcs(4..=10), SEED + 5);
    let (mut checked, mut bad) = (0, 0);
    for g in &graphs {
        let omega_without = |a| fasp_optimum(&g.without_arcs(&[a])).unwrap() as i64;
        for c in enumerate_elementary_cycles(g, 10_000).unwrap() {
            let m = meta_graph(g, &c).unwrap();
            for &e in &c {
                for &f in &c {
                    if e == f {
                        continue;
                    }
                    checked += 1;
                    let re = relative_weight_general(g, &m, e, f).unwrap();
                    let rf = relative_weight_general(g, &m, f, e).unwrap();
                    let (we, wf) = (g.weight(e).unwrap() as i64, g.weight(f).unwrap() as i64);
                    let lhs = (we - re.optimum as i64) - (wf - rf.optimum as i64);
                    let rhs = (we + omega_without(e)) - (wf + omega_without(f));
                    if lhs != rhs {
                        bad += 1;
                    }
                }
            }
        }
    }
    outcome(
        bad == 0,
        format!("100 instances (<= 10 arcs), {checked} (c, e, f) triples, {bad} identity failures (exact)"),
    )
}

fn c6_resolvability() -> Outcome {
    let cactus = fixtures::cactus().graph;
    let relative_weight_example = fixtures::relative_weight_example().graph;
    let cactus_ok = solve_resolvable(&cactus).map(|r| r.weight) == Ok(fasp_optimum(&cactus).unwrap());
    let d3_not = !resolve(&fixtures::d3()).unwrap().resolvable;
    let relative_weight_example_not = !resolve(&relative_weight_example).unwrap().resolvable;
    let relative_weight_example_unit = resolve(&relative_weight_example.unit_weights()).unwrap().resolvable;
    outcome(
        cactus_ok && d3_not && relative_weight_example_not && relative_weight_example_unit,
        format!(
            "cactus resolvable with oracle weight: {cactus_ok}; D3 not resolvable: {d3_not}; \
             relative-weight example not resolvable: {relative_weight_example_not}; with unit weights resolvable: {relative_weight_example_unit}"
        ),
    )
}

fn c7_lower_bounds() -> Outcome {
    let graphs = suite(200, &RandomSpec::small(), SEED + 7);
    let mut bad = 0;
    for g in &graphs {
        let omega = fasp_optimum(g).unwrap();
        let b = lower_bounds(g);
        if b.mu.is_none_or(|mu| mu > omega) || b.upsilon > omega {
            bad += 1;
        }
    }
    let mut chain_bad = Vec::new();
    for k in 1..=10 {
        let g = fixtures::path_chain(k);
        if lower_bounds(&g).mu != Some(path_chain_optimum(&g, k)) {
            chain_bad.push(k);
        }
    }
    outcome(
        bad == 0 && chain_bad.is_empty(),
        format!("200 instances, {bad} with μ or υ above Ω; path chains k=1..10 with μ ≠ Ω: {chain_bad:?}"),
    )
}

/// Ω of `k` cycles overlapping like a path: each shared arc hits two
/// neighbours, so ⌈k/2⌉. The structure is checked by enumeration and the
/// value against brute force where that fits.
fn path_chain_optimum(g: &WeightedMultiDigraph, k: usize) -> Weight {
    let cycles: Vec<BTreeSet<usize>> = enumerate_elementary_cycles(g, 1 << 16)
        .unwrap()
        .into_iter()
        .map(|c| c.into_iter().collect())
        .collect();
    assert_eq!(cycles.len(), k, "path chain cycle count");
    let meets = |a: &BTreeSet<usize>, b: &BTreeSet<usize>| a.intersection(b).count();
    let degrees: Vec<usize> = (0..k)
        .map(|i| (0..k).filter(|&j| j != i && meets(&cycles[i], &cycles[j]) > 0).count())
        .collect();
    assert!(degrees.iter().all(|&d| d <= 2) && degrees.iter().filter(|&&d| d < 2).count() == k.min(2));
    let value = k.div_ceil(2) as Weight;
    if g.num_arcs() <= fasolve::oracle::MAX_FAS_ARCS {
        assert_eq!(fasp_optimum(g).unwrap(), value);
    }
    value
}

fn c8_greedy() -> Outcome {
    let unit: Vec<_> = suite(200, &RandomSpec::small().with_weights(1..=1), SEED + 8);
    let mut cap_bad = 0;
    for g in &unit {
        for eff in [Effective::Xi, Effective::Eta] {
            if greedy_cut(g, eff).unwrap().solution.len() > g.num_arcs() / 2 {
                cap_bad += 1;
            }
        }
    }
    let weighted = suite(200, &RandomSpec::small(), SEED + 80);
    let mut ratio_bad = 0;
    for g in &weighted {
        let omega = fasp_optimum(g).unwrap();
        if omega == 0 {
            continue;
        }
        let greedy = greedy_cut(g, Effective::Xi).unwrap().weight;
        let closure = fasolve::cycle_closure(g);
        let theta_max = closure.arc_ids().map(|e| theta(&closure, e).unwrap()).max().unwrap();
        // greedy / Ω ≤ ω_max θ_max / ω_min, cross-multiplied
        let lhs = u128::from(greedy) * u128::from(closure.min_weight());
        let rhs = u128::from(omega) * u128::from(closure.max_weight()) * u128::from(theta_max);
        if lhs > rhs {
            ratio_bad += 1;
        }
    }
    let d3 = fixtures::d3();
    let r = greedy_cut(&d3, Effective::Xi).unwrap();
    let d3_ok = r.solution.len() == 3 && r.bounds.and_then(|b| b.mu) == Some(3);
    outcome(
        cap_bad == 0 && ratio_bad == 0 && d3_ok,
        format!(
            "unit weights: {cap_bad} of 400 runs above ⌊|E|/2⌋; weighted: {ratio_bad} of 200 above the ratio bound; \
             D3 greedy 3 arcs with μ = 3: {d3_ok}"
        ),
    )
}

fn c9_c11_reductions() -> (Outcome, Outcome) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 9);
    // gadget graphs have large meta dimension and overlap counts; the exact solver
    // does not need the resource guards
    let cfg = SolverConfig {
        m_budget: usize::MAX,
        branch_limit: u64::MAX,
    };
    let (mut bad, mut size_bad) = (0, 0);
    for _ in 0..100 {
        let g = fixtures::random_vertex_weighted(&mut rng, 6);
        match solve_fvs(&g, |s| cut_with(s, &cfg)) {
            Ok((vs, w, _)) if w == brute_force_fvsp(&g).unwrap().optimum && g.is_feedback_set(&vs) => {}
            _ => bad += 1,
        }
        let star = fvsp_to_fasp(&g, RimWeights::Heavy).unwrap().transformed;
        let (n, m, delta) = (g.num_vertices(), g.graph.num_arcs(), g.graph.max_degree());
        if star.num_vertices() != m + 2 * n || star.num_arcs() > (delta + 1) * n {
            size_bad += 1;
        }
    }
    (
        outcome(
            bad == 0,
            format!("100 instances (|V| <= 6), {bad} pulled-back weights differ from the vertex oracle"),
        ),
        outcome(
            size_bad == 0,
            format!("100 reductions, {size_bad} violate |V*| = |E| + 2|V| or |E*| <= (Δ+1)|V|"),
        ),
    )
}

fn c10_diamond_chains() -> Outcome {
    let mut points = Vec::new();
    let mut problems = Vec::new();
    for d in 1..=8 {
        let g = fixtures::diamond_chain(d);
        let mut best = Duration::MAX;
        let mut weight: Weight = 0;
        let mut m = None;
        for _ in 0..3 {
            let start = Instant::now();
            let r = cut_resolve(&g).unwrap();
            best = best.min(start.elapsed());
            weight = r.weight;
            m = r.stats.m_parameter;
        }
        if m != Some(0) || best >= Duration::from_secs(1) || weight != 1 {
            problems.push(format!("D={d}: m={m:?} time={best:?} weight={weight}"));
        }
        points.push(((g.num_arcs() as f64).ln(), best.as_secs_f64().max(1e-7).ln()));
    }
    // least-squares slope of log time against log |E|
    let n = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
    let (mx, my) = (sx / n, sy / n);
    let num: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let den: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = num / den;
    outcome(
        problems.is_empty() && slope < 5.0,
        format!("D=1..8: global m 0, < 1 s each, weight 1; fit exponent {slope:.2} (limit 5); problems: {problems:?}"),
    )
}

fn main() {
    let (c9, c11) = c9_c11_reductions();
    let results = [
        ("1 CUT exactness", exactness(cut)),
        ("2 CUT&RESOLVE exactness", exactness(cut_resolve)),
        ("3 essential minor invariance", c3_minor_invariance()),
        ("4 G_el equals Johnson union", c4_elementary_subgraph()),
        ("5 Bellman identity", c5_bellman()),
        ("6 resolvability fast path", c6_resolvability()),
        ("7 lower bounds", c7_lower_bounds()),
        ("8 greedy guarantees", c8_greedy()),
        ("9 FVS round trip", c9),
        ("10 diamond-chain scaling", c10_diamond_chains()),
        ("11 reduction size bounds", c11),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        println!("{} criterion {name}: {}", if o.ok { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.ok);
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
