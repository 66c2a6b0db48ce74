//! Exact feedback arc sets: CUT and CUT & RESOLVE.
//!
//! Both repeatedly take an elementary cycle and cut the arc `k` that is
//! minimal under the pairwise score, i.e. the arc with the smallest
//! `ω(k) + Ω(G ∖ k)`. Every feedback set cuts some arc of the cycle, so the
//! chosen arc extends to an optimal solution.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use crate::engine::{Engine, DEFAULT_BRANCH_LIMIT};
use crate::error::{Error, Result};
use crate::graph::{ArcId, ArcSet, Weight, WeightedMultiDigraph};
use crate::meta::global_m;
use crate::resolve::{resolve, ResolveTrace};
use crate::topo;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Resolvable,
    Cut,
    CutResolve,
    Greedy,
    GreedyResolve,
    Hybrid,
    Oracle,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Resolvable => "resolvable",
            Method::Cut => "cut",
            Method::CutResolve => "cut-resolve",
            Method::Greedy => "greedy",
            Method::GreedyResolve => "greedy-resolve",
            Method::Hybrid => "hybrid",
            Method::Oracle => "oracle",
        })
    }
}

/// Lower bounds attached to a report; `mu` is absent when cycle counting
/// ran out of budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub mu: Option<Weight>,
    pub upsilon: Weight,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub m_parameter: Option<usize>,
    pub sigma_evaluations: u64,
    pub wall_time: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeedbackReport {
    pub solution: ArcSet,
    pub weight: Weight,
    pub method: Method,
    pub bounds: Option<Bounds>,
    pub certified_optimal: bool,
    pub stats: SolveStats,
}

impl FeedbackReport {
    pub fn new(solution: ArcSet, method: Method, certified_optimal: bool, stats: SolveStats) -> Self {
        FeedbackReport {
            weight: solution.weight(),
            solution,
            method,
            bounds: None,
            certified_optimal,
            stats,
        }
    }

    pub fn with_bounds(mut self, bounds: Bounds) -> Self {
        self.bounds = Some(bounds);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    /// Largest global m the exact solvers accept.
    pub m_budget: usize,
    /// Cap on branches per relative-weight evaluation.
    pub branch_limit: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            m_budget: 20,
            branch_limit: DEFAULT_BRANCH_LIMIT,
        }
    }
}

fn check_m(g: &WeightedMultiDigraph, cfg: &SolverConfig) -> Result<usize> {
    let m = global_m(g)?;
    if m > cfg.m_budget {
        return Err(Error::BudgetExceeded {
            what: "global m (try the greedy heuristics)",
            limit: cfg.m_budget as u64,
        });
    }
    Ok(m)
}

/// `s(e, h) = (ω(e) + Ω(G∖e)) − (ω(h) + Ω(G∖h))`, computed from relative
/// weights on `G ∖ h` and `G ∖ e`.
pub fn pairwise_score(g: &WeightedMultiDigraph, e: ArcId, h: ArcId) -> Result<i64> {
    let t = g.topology();
    let pe = t.pos(e).ok_or(Error::UnknownArc(e))?;
    let ph = t.pos(h).ok_or(Error::UnknownArc(h))?;
    Engine::new(&t).pairwise_score(&t.full_mask(), pe, ph)
}

/// CUT with the default configuration.
pub fn cut(g: &WeightedMultiDigraph) -> Result<FeedbackReport> {
    cut_with(g, &SolverConfig::default())
}

pub fn cut_with(g: &WeightedMultiDigraph, cfg: &SolverConfig) -> Result<FeedbackReport> {
    let start = Instant::now();
    let m = check_m(g, cfg)?;
    let t = g.topology();
    let mut engine = Engine::new(&t).with_branch_limit(cfg.branch_limit);
    let mut remaining = topo::closure(&t, &t.full_mask());
    let mut solution = Vec::new();
    while let Some(f) = remaining.ones().next() {
        let mut work = engine.el(&remaining, f);
        loop {
            let closed = topo::closure(&t, &remaining);
            let Some(e) = work.ones().find(|&e| closed.contains(e)) else {
                break;
            };
            let cycle = topo::cycle_through(&t, &closed, e).expect("arc lies on a cycle");
            let k = engine.select(&closed, &cycle)?;
            solution.push(t.ids[k]);
            remaining.set(k, false);
            work.set(k, false);
        }
        remaining = topo::closure(&t, &remaining);
    }
    let stats = SolveStats {
        m_parameter: Some(m),
        sigma_evaluations: engine.evaluations,
        wall_time: start.elapsed(),
    };
    Ok(FeedbackReport::new(ArcSet::new(g, solution)?, Method::Cut, true, stats))
}

/// A chain of resolutions: each trace's origin is the previous resolved
/// graph minus one cut arc.
pub(crate) struct Chain(pub Vec<ResolveTrace>);

impl Chain {
    pub fn lift(&self, ids: &BTreeSet<ArcId>) -> BTreeSet<ArcId> {
        let mut ids = ids.clone();
        for trace in self.0.iter().rev() {
            ids = trace.lift(&ids).expect("ids of a resolved graph");
        }
        ids
    }

    /// Committed arcs of the newest trace, as ids of the first origin.
    pub fn committed_last(&self) -> BTreeSet<ArcId> {
        let last = self.0.last().expect("chain is non-empty");
        let mut ids = last.committed().ids().clone();
        for trace in self.0[..self.0.len() - 1].iter().rev() {
            ids = trace.lift(&ids).expect("ids of a resolved graph");
        }
        ids
    }
}

/// CUT & RESOLVE with the default configuration.
pub fn cut_resolve(g: &WeightedMultiDigraph) -> Result<FeedbackReport> {
    cut_resolve_with(g, &SolverConfig::default())
}

/// Resolves first, then cuts one selected arc per cycle of the resolved
/// graph and resolves again. The reported m parameter is global m of the
/// first resolved graph, the graph the relative weights run on.
pub fn cut_resolve_with(g: &WeightedMultiDigraph, cfg: &SolverConfig) -> Result<FeedbackReport> {
    let start = Instant::now();
    let first = resolve(g)?;
    let m = check_m(&first.resolved, cfg)?;
    let mut chain = Chain(vec![first]);
    let mut solution: BTreeSet<ArcId> = chain.committed_last();
    let mut evaluations = 0;
    loop {
        let s = chain.0.last().unwrap().resolved.clone();
        if s.is_empty() {
            break;
        }
        let t = s.topology();
        let mut engine = Engine::new(&t).with_branch_limit(cfg.branch_limit);
        let full = t.full_mask();
        let cycle = topo::first_cycle(&t, &full).expect("resolved graph is a cycle closure");
        let k = engine.select(&full, &cycle)?;
        evaluations += engine.evaluations;
        solution.extend(chain.lift(&BTreeSet::from([t.ids[k]])));
        chain.0.push(resolve(&s.without_arcs(&[t.ids[k]]))?);
        solution.extend(chain.committed_last());
    }
    let stats = SolveStats {
        m_parameter: Some(m),
        sigma_evaluations: evaluations,
        wall_time: start.elapsed(),
    };
    let method = if chain.0.len() == 1 {
        Method::Resolvable
    } else {
        Method::CutResolve
    };
    Ok(FeedbackReport::new(ArcSet::new(g, solution)?, method, true, stats))
}

/// Resolution first, CUT & RESOLVE when global m of the resolved graph is
/// within budget, greedy with bounds otherwise.
pub fn auto(g: &WeightedMultiDigraph, cfg: &SolverConfig) -> Result<FeedbackReport> {
    match cut_resolve_with(g, cfg) {
        Err(Error::BudgetExceeded { .. }) => {
            crate::heuristics::greedy_cut(g, crate::heuristics::Effective::Xi).map(|r| {
                let b = crate::heuristics::lower_bounds(g);
                r.with_bounds(b.bounds())
            })
        }
        other => other,
    }
}
