//! Greedy cuts driven by effective weights, lower bounds and the hybrid
//! meta spanning tree strategy.
//!
//! θ(e) counts the elementary cycles through `e`, φ(e) the arcs of G_el(e).
//! The effective weights ξ = θ/ω and η = φ/ω measure how much cycle
//! structure an arc breaks per unit of weight; the greedy solvers cut the
//! arc with the largest one. θ is counted exactly by enumeration under a
//! budget.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num_rational::Ratio;

use crate::cycles::{cycle_components, el_mask};
use crate::error::{Error, Result};
use crate::graph::{cycle_closure, ArcId, ArcSet, Weight, WeightedMultiDigraph};
use crate::meta::{meta_graph, MetaGraph};
use crate::resolve::resolve;
use crate::solver::{cut_resolve, Bounds, Chain, FeedbackReport, Method, SolveStats};
use crate::topo::{self, Mask, Topology};

/// Default number of partial paths explored when counting cycles.
pub const THETA_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Effective {
    /// ξ = θ/ω
    Xi,
    /// η = φ/ω
    Eta,
}

/// Counts elementary paths `from → to` over the arcs of `mask`.
fn count_paths(t: &Topology, mask: &Mask, from: usize, to: usize, budget: &mut u64) -> Result<u64> {
    let useful = topo::walk_mask(t, mask, from, to);
    let mut on_path = vec![false; t.n()];
    let mut count = 0;
    // iterative DFS: stack of (vertex, next out-arc index)
    let mut stack = vec![(from, 0usize)];
    on_path[from] = true;
    while let Some(&mut (v, ref mut i)) = stack.last_mut() {
        if v == to {
            count += 1;
            on_path[v] = false;
            stack.pop();
            continue;
        }
        let Some(&a) = t.out[v].get(*i) else {
            on_path[v] = false;
            stack.pop();
            continue;
        };
        *i += 1;
        let w = t.head[a];
        if useful.contains(a) && !on_path[w] {
            if *budget == 0 {
                return Err(Error::BudgetExceeded {
                    what: "elementary path enumeration",
                    limit: THETA_BUDGET,
                });
            }
            *budget -= 1;
            on_path[w] = true;
            stack.push((w, 0));
        }
    }
    Ok(count)
}

fn theta_in(t: &Topology, mask: &Mask, e: usize, budget: &mut u64) -> Result<u64> {
    let mut rest = mask.clone();
    rest.set(e, false);
    count_paths(t, &rest, t.head[e], t.tail[e], budget)
}

/// θ(e): the number of elementary cycles through `e`.
pub fn theta(g: &WeightedMultiDigraph, e: ArcId) -> Result<u64> {
    let t = g.topology();
    let pe = t.pos(e).ok_or(Error::UnknownArc(e))?;
    let mut budget = THETA_BUDGET;
    theta_in(&t, &t.full_mask(), pe, &mut budget)
}

/// φ(e): the number of arcs of G_el(e) (0 if `e` is on no cycle).
pub fn phi(g: &WeightedMultiDigraph, e: ArcId) -> Result<u64> {
    let t = g.topology();
    let pe = t.pos(e).ok_or(Error::UnknownArc(e))?;
    Ok(el_mask(&t, &t.full_mask(), pe).count_ones(..) as u64)
}

/// The number of elementary cycles: each cycle is counted at its lowest arc.
fn count_cycles(t: &Topology, mask: &Mask, budget: &mut u64) -> Result<u64> {
    let mut total = 0;
    let mut above = mask.clone();
    for e in mask.ones() {
        above.set(e, false);
        total += count_paths(t, &above, t.head[e], t.tail[e], budget)?;
    }
    Ok(total)
}

/// Lower and upper bounds on the feedback length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    /// `None` when cycle counting exceeded its budget.
    pub theta_max: Option<u64>,
    pub phi_max: u64,
    pub xi_max: Option<Ratio<u64>>,
    pub eta_max: Ratio<u64>,
    /// Number of elementary cycles, when counted.
    pub cycles: Option<u64>,
    pub mu: Option<Weight>,
    pub upsilon: Weight,
    /// `⌈|E|/2⌉ · ω_max` over the cycle closure.
    pub upper: Weight,
}

impl BoundReport {
    pub fn bounds(&self) -> Bounds {
        Bounds {
            mu: self.mu,
            upsilon: self.upsilon,
        }
    }

    /// The larger of the two lower bounds.
    pub fn lower(&self) -> Weight {
        self.mu.unwrap_or(0).max(self.upsilon)
    }
}

/// μ = ⌈|O_el| / ξ_max⌉ and υ = ⌈|E| / η_max⌉, both over the cycle closure
/// of `g` (arcs on no cycle would only dilute η).
pub fn lower_bounds(g: &WeightedMultiDigraph) -> BoundReport {
    let g = cycle_closure(g);
    let t = g.topology();
    let full = t.full_mask();
    let zero = Ratio::from_integer(0);
    let mut budget = THETA_BUDGET;
    let mut counted = || -> Result<(u64, u64, Ratio<u64>)> {
        let cycles = count_cycles(&t, &full, &mut budget)?;
        let mut theta_max = 0;
        let mut xi_max = zero;
        for e in 0..t.m() {
            let th = theta_in(&t, &full, e, &mut budget)?;
            theta_max = theta_max.max(th);
            xi_max = xi_max.max(Ratio::new(th, t.weight[e]));
        }
        Ok((cycles, theta_max, xi_max))
    };
    let (cycles, theta_max, xi_max, mu) = match counted() {
        Ok((n, th, xi)) => {
            let mu = if n == 0 {
                0
            } else {
                (Ratio::from_integer(n) / xi).ceil().to_integer()
            };
            (Some(n), Some(th), Some(xi), Some(mu))
        }
        Err(_) => (None, None, None, None),
    };
    let mut phi_max = 0;
    let mut eta_max = zero;
    for e in 0..t.m() {
        let ph = el_mask(&t, &full, e).count_ones(..) as u64;
        phi_max = phi_max.max(ph);
        eta_max = eta_max.max(Ratio::new(ph, t.weight[e]));
    }
    let m = t.m() as u64;
    let upsilon = if m == 0 {
        0
    } else {
        (Ratio::from_integer(m) / eta_max).ceil().to_integer()
    };
    BoundReport {
        theta_max,
        phi_max,
        xi_max,
        eta_max,
        cycles,
        mu,
        upsilon,
        upper: m.div_ceil(2) * g.max_weight(),
    }
}

/// The arc of the closure of `mask` with the largest effective weight; ties
/// go to the lowest id. For ξ, an exhausted counting budget falls back to η.
fn pick(t: &Topology, mask: &Mask, effective: Effective) -> Option<usize> {
    let closed = topo::closure(t, mask);
    let score = |counts: &dyn Fn(usize) -> Result<u64>| -> Result<Option<usize>> {
        let mut best: Option<(u64, Weight, usize)> = None;
        for e in closed.ones() {
            let c = counts(e)?;
            let w = t.weight[e];
            let better = match best {
                None => true,
                Some((bc, bw, _)) => u128::from(c) * u128::from(bw) > u128::from(bc) * u128::from(w),
            };
            if better {
                best = Some((c, w, e));
            }
        }
        Ok(best.map(|b| b.2))
    };
    let eta = |e: usize| Ok(el_mask(t, &closed, e).count_ones(..) as u64);
    match effective {
        Effective::Eta => score(&eta).expect("φ never fails"),
        Effective::Xi => {
            let budget = std::cell::Cell::new(THETA_BUDGET);
            let xi = |e: usize| {
                let mut b = budget.get();
                let r = theta_in(t, &closed, e, &mut b);
                budget.set(b);
                r
            };
            score(&xi).unwrap_or_else(|_| score(&eta).expect("φ never fails"))
        }
    }
}

/// GREEDY-CUT: cut the arc of largest effective weight until acyclic.
pub fn greedy_cut(g: &WeightedMultiDigraph, effective: Effective) -> Result<FeedbackReport> {
    let start = Instant::now();
    let t = g.topology();
    let mut mask = t.full_mask();
    let mut solution = Vec::new();
    while let Some(k) = pick(&t, &mask, effective) {
        solution.push(t.ids[k]);
        mask.set(k, false);
    }
    let stats = SolveStats {
        wall_time: start.elapsed(),
        ..SolveStats::default()
    };
    let report = FeedbackReport::new(ArcSet::new(g, solution)?, Method::Greedy, false, stats);
    Ok(report.with_bounds(lower_bounds(g).bounds()))
}

/// GREEDY-CUT & RESOLVE: resolve, cut the arc of largest effective weight of
/// the resolved graph, resolve again.
pub fn greedy_cut_resolve(g: &WeightedMultiDigraph, effective: Effective) -> Result<FeedbackReport> {
    let start = Instant::now();
    let mut chain = Chain(vec![resolve(g)?]);
    let mut solution = chain.committed_last();
    let mut cuts = 0;
    loop {
        let s = chain.0.last().unwrap().resolved.clone();
        let t = s.topology();
        let Some(k) = pick(&t, &t.full_mask(), effective) else {
            break;
        };
        cuts += 1;
        solution.extend(chain.lift(&BTreeSet::from([t.ids[k]])));
        chain.0.push(resolve(&s.without_arcs(&[t.ids[k]]))?);
        solution.extend(chain.committed_last());
    }
    let stats = SolveStats {
        wall_time: start.elapsed(),
        ..SolveStats::default()
    };
    // resolution alone is exact
    let report = FeedbackReport::new(ArcSet::new(g, solution)?, Method::GreedyResolve, cuts == 0, stats);
    Ok(report.with_bounds(lower_bounds(g).bounds()))
}

/// Heuristic-grade feedback vertex set of an undirected meta graph: strip
/// nodes of degree ≤ 1, then take the node of largest degree (lowest id on
/// ties), repeat. A stand-in for a proper meta FVS method.
pub fn meta_fvs_greedy(m: &MetaGraph) -> BTreeSet<ArcId> {
    let mut edges = m.edges.clone();
    let mut fvs = BTreeSet::new();
    loop {
        let mut degree: BTreeMap<ArcId, usize> = BTreeMap::new();
        for &(a, b) in &edges {
            *degree.entry(a).or_default() += 1;
            *degree.entry(b).or_default() += 1;
        }
        if let Some((&leaf, _)) = degree.iter().find(|(_, &d)| d <= 1) {
            edges.retain(|&(a, b)| a != leaf && b != leaf);
            continue;
        }
        let Some((&top, _)) = degree.iter().max_by(|x, y| x.1.cmp(y.1).then(y.0.cmp(x.0))) else {
            return fvs;
        };
        fvs.insert(top);
        edges.retain(|&(a, b)| a != top && b != top);
    }
}

/// Outcome of [`hybrid_strategy`] with its quality indicators.
#[derive(Clone, Debug, PartialEq)]
pub struct HybridReport {
    pub report: FeedbackReport,
    /// Arcs withheld from exact treatment (ν_M), as origin ids.
    pub forbidden: BTreeSet<ArcId>,
    pub arcs: usize,
    /// Average weight of forbidden arcs (0 if none) and of all arcs.
    pub forbidden_avg_weight: f64,
    pub global_avg_weight: f64,
}

/// Undirected max spanning forest of the meta graph under
/// `1 / (ω(a) + ω(b))`, i.e. a min spanning forest under `ω(a) + ω(b)`.
/// Returns the edges left out.
fn non_tree_edges(m: &MetaGraph, weight: impl Fn(ArcId) -> Weight) -> Vec<(ArcId, ArcId)> {
    let mut edges: Vec<(ArcId, ArcId)> = m.edges.iter().copied().collect();
    edges.sort_by_key(|&(a, b)| (weight(a) + weight(b), a, b));
    let mut parent: BTreeMap<ArcId, ArcId> = m.nodes.iter().map(|&a| (a, a)).collect();
    fn find(p: &mut BTreeMap<ArcId, ArcId>, mut x: ArcId) -> ArcId {
        while p[&x] != x {
            let up = p[&p[&x]];
            p.insert(x, up);
            x = up;
        }
        x
    }
    let mut left_out = Vec::new();
    for (a, b) in edges {
        let (x, y) = (find(&mut parent, a), find(&mut parent, b));
        if x == y {
            left_out.push((a, b));
        } else {
            parent.insert(x, y);
        }
    }
    left_out
}

/// Keeps every forbidden arc by contracting it. Arcs running against a
/// contracted arc become loops and are returned as forced cuts; arcs
/// parallel to it become loops too but are dropped, since keeping them adds
/// no cycle the contracted arc does not already close.
fn contract(q: &WeightedMultiDigraph, forbidden: &BTreeSet<ArcId>) -> Result<(WeightedMultiDigraph, Vec<ArcId>)> {
    let mut rep: BTreeMap<usize, usize> = q.vertices().map(|v| (v, v)).collect();
    fn find(p: &mut BTreeMap<usize, usize>, mut x: usize) -> usize {
        while p[&x] != x {
            x = p[&x];
        }
        x
    }
    let mut kept = BTreeSet::new();
    for &f in forbidden {
        let a = q.arc(f)?;
        let (x, y) = (find(&mut rep, a.tail), find(&mut rep, a.head));
        if x != y {
            rep.insert(y, x);
            kept.insert(f);
        }
    }
    let mut out = WeightedMultiDigraph::new();
    let mut forced = Vec::new();
    for (a, w) in q.weighted_arcs() {
        if kept.contains(&a.id) {
            continue;
        }
        let (x, y) = (find(&mut rep, a.tail), find(&mut rep, a.head));
        if x != y {
            out.insert_arc(a.id, x, y, w)?;
            continue;
        }
        let along = kept.iter().any(|&f| {
            let k = q.arc(f).expect("kept arcs exist");
            k.tail == a.tail && k.head == a.head
        });
        if !along {
            forced.push(a.id);
        }
    }
    Ok((out, forced))
}

/// Resolution, then per cycle component: build the meta graph of its first
/// cycle; if its cycle dimension exceeds `threshold`, keep (forbid from
/// cutting) the heavier endpoint of every edge outside a maximum spanning
/// tree and solve the rest exactly by CUT & RESOLVE. Without forbidden arcs
/// the result is optimal.
pub fn hybrid_strategy(g: &WeightedMultiDigraph, threshold: usize) -> Result<HybridReport> {
    let start = Instant::now();
    let trace = resolve(g)?;
    let mut s = trace.resolved.clone();
    let mut cuts: BTreeSet<ArcId> = BTreeSet::new();
    let mut forbidden: BTreeSet<ArcId> = BTreeSet::new();
    let mut m_max = 0;
    while !s.is_empty() {
        let t = s.topology();
        let comps = cycle_components(&t, &t.full_mask());
        let q = s.arc_subgraph(&t.ids_of(&comps[0]));
        let qt = q.topology();
        let seed: Vec<ArcId> = topo::first_cycle(&qt, &qt.full_mask())
            .expect("component has a cycle")
            .into_iter()
            .map(|p| qt.ids[p])
            .collect();
        let meta = meta_graph(&q, &seed)?;
        let dim = meta.cycle_dim();
        m_max = m_max.max(dim);
        let mut local_forbidden = BTreeSet::new();
        if dim > threshold {
            for (a, b) in non_tree_edges(&meta, |x| q.weight(x).unwrap_or(0)) {
                let (wa, wb) = (q.weight(a)?, q.weight(b)?);
                local_forbidden.insert(if (wa, a) > (wb, b) { a } else { b });
            }
        }
        let (contracted, forced) = contract(&q, &local_forbidden)?;
        let mut part: BTreeSet<ArcId> = forced.into_iter().collect();
        part.extend(cut_resolve(&contracted)?.solution.iter());
        if part.is_empty() {
            // cannot happen for a cyclic component, but never loop forever
            let c = &seed;
            let k = *c.iter().min_by_key(|&&a| (q.weight(a).unwrap_or(0), a)).unwrap();
            part.insert(k);
        }
        forbidden.extend(local_forbidden);
        cuts.extend(part.iter().copied());
        s = cycle_closure(&s.without_arcs(&part));
    }
    let solution = trace.lift_solution(&cuts)?;
    let forbidden_origin = trace.lift(&forbidden)?;
    let stats = SolveStats {
        m_parameter: Some(m_max),
        sigma_evaluations: 0,
        wall_time: start.elapsed(),
    };
    let report = FeedbackReport::new(solution, Method::Hybrid, forbidden.is_empty(), stats)
        .with_bounds(lower_bounds(g).bounds());
    let avg = |ids: &BTreeSet<ArcId>| {
        if ids.is_empty() {
            0.0
        } else {
            g.weight_of(ids).unwrap_or(0) as f64 / ids.len() as f64
        }
    };
    let all: BTreeSet<ArcId> = g.arc_ids().collect();
    Ok(HybridReport {
        report,
        arcs: g.num_arcs(),
        forbidden_avg_weight: avg(&forbidden_origin),
        global_avg_weight: avg(&all),
        forbidden: forbidden_origin,
    })
}
