//! Isolated cycles and the resolved graph.
//!
//! A cycle through `e` is isolated when its other arcs lie on no cycle
//! avoiding `e`. If cutting `e` is an optimal feedback set for the union of
//! isolated cycles through `e` (checked by a min cut), `e` belongs to some
//! optimal solution and can be committed. Resolution alternates this with
//! the essential minor until nothing is committed; what is left is the
//! resolved graph `(S, τ)`.

use std::collections::BTreeSet;

use crate::cycles::{anchored, el_mask, CycleKind, CycleSubgraph};
use crate::error::{Error, Result};
use crate::flow::anchored_cut;
use crate::graph::{cycle_closure, ArcId, ArcSet, WeightedMultiDigraph};
use crate::minor::{essential_minor, MinorTrace};
use crate::topo::{self, Mask, Topology};

/// Union of the isolated cycles through `e` within `mask`: the elementary
/// cycles through `e` that avoid every arc lying on a cycle without `e`'s
/// parallel class.
fn isolated_mask(t: &Topology, mask: &Mask, e: usize) -> Mask {
    let class = t.parallels(mask, e);
    let mut others = mask.clone();
    others.difference_with(&class);
    let mut allowed = mask.clone();
    allowed.difference_with(&topo::closure(t, &others));
    el_mask(t, &allowed, e)
}

/// G_I(e): the union of all isolated cycles through `e`.
pub fn isolated_subgraph(g: &WeightedMultiDigraph, e: ArcId) -> Result<CycleSubgraph> {
    let t = g.topology();
    let pe = t.pos(e).ok_or(Error::UnknownArc(e))?;
    let m = isolated_mask(&t, &t.full_mask(), pe);
    anchored(g, &t, e, pe, CycleKind::Isolated, &m)
}

/// One round of resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolveStage {
    /// Essential minor of this round's input graph.
    pub minor: MinorTrace,
    /// Minor arcs committed in this round, in commit order.
    pub committed: Vec<ArcId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolveTrace {
    pub origin: WeightedMultiDigraph,
    pub stages: Vec<ResolveStage>,
    /// The resolved graph `(S, τ)`; its arc ids are ids of the last
    /// stage's minor.
    pub resolved: WeightedMultiDigraph,
    pub resolvable: bool,
}

impl ResolveTrace {
    /// Lifts ids of stage `level`'s input graph to ids of the origin.
    fn lift_level(&self, level: usize, ids: BTreeSet<ArcId>) -> BTreeSet<ArcId> {
        let mut ids = ids;
        for stage in self.stages[..level].iter().rev() {
            ids = stage.minor.lift_ids(&ids).expect("ids of a minor");
        }
        ids
    }

    /// Origin arcs standing for arcs of the resolved graph.
    pub fn lift<'a, I>(&self, ids: I) -> Result<BTreeSet<ArcId>>
    where
        I: IntoIterator<Item = &'a ArcId>,
    {
        let Some(last) = self.stages.last() else {
            return Ok(ids.into_iter().copied().collect());
        };
        let inner = last.minor.lift_ids(ids)?;
        Ok(self.lift_level(self.stages.len() - 1, inner))
    }

    /// Every origin arc decided during resolution: committed arcs and the
    /// forced cuts of each minor.
    pub fn committed(&self) -> ArcSet {
        let mut all = BTreeSet::new();
        for (i, stage) in self.stages.iter().enumerate() {
            let mut local = stage
                .minor
                .lift_ids(&stage.committed)
                .expect("committed arcs are minor arcs");
            local.extend(stage.minor.forced.iter());
            all.extend(self.lift_level(i, local));
        }
        ArcSet::new(&self.origin, all).expect("lifted arcs belong to the origin")
    }

    /// A feedback arc set of the origin from one of the resolved graph.
    pub fn lift_solution(&self, sol: &BTreeSet<ArcId>) -> Result<ArcSet> {
        let mut ids = self.lift(sol)?;
        ids.extend(self.committed().iter());
        ArcSet::new(&self.origin, ids)
    }
}

/// Commits arcs of `c` in id order whose isolated cycles are optimally cut
/// at the arc itself.
fn commit_round(c: &WeightedMultiDigraph) -> Vec<ArcId> {
    let t = c.topology();
    let mut current = t.full_mask();
    let mut committed = Vec::new();
    for e in 0..t.m() {
        if !current.contains(e) || !topo::closure(&t, &current).contains(e) {
            continue;
        }
        let iso = isolated_mask(&t, &current, e);
        if iso.is_clear() {
            continue;
        }
        let class = t.parallels(&current, e);
        let mut rest = iso.clone();
        rest.difference_with(&class);
        if anchored_cut(&t, &rest, &class, e).is_none() {
            for a in class.ones() {
                committed.push(t.ids[a]);
            }
            current.difference_with(&class);
        }
    }
    committed
}

/// Resolves `g` to its resolved graph.
pub fn resolve(g: &WeightedMultiDigraph) -> Result<ResolveTrace> {
    let mut stages = Vec::new();
    let mut graph = g.clone();
    let resolved = loop {
        let minor = essential_minor(&graph)?;
        let committed = commit_round(&minor.minor);
        let done = committed.is_empty();
        let next = cycle_closure(&minor.minor.without_arcs(&committed));
        let s = minor.minor.clone();
        stages.push(ResolveStage { minor, committed });
        if done {
            break s;
        }
        graph = next;
    };
    Ok(ResolveTrace {
        origin: g.clone(),
        stages,
        resolvable: resolved.is_empty(),
        resolved,
    })
}

/// An optimal feedback arc set of a resolvable graph, or
/// [`Error::NotResolvable`].
pub fn solve_resolvable(g: &WeightedMultiDigraph) -> Result<crate::solver::FeedbackReport> {
    let start = std::time::Instant::now();
    let trace = resolve(g)?;
    if !trace.resolvable {
        return Err(Error::NotResolvable);
    }
    let solution = trace.committed();
    Ok(crate::solver::FeedbackReport::new(
        solution,
        crate::solver::Method::Resolvable,
        true,
        crate::solver::SolveStats {
            m_parameter: Some(0),
            sigma_evaluations: 0,
            wall_time: start.elapsed(),
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::is_acyclic;
    use crate::oracle::fasp_optimum;

    #[test]
    fn cactus_is_resolvable() {
        let f = fixtures::cactus();
        let trace = resolve(&f.graph).unwrap();
        assert!(trace.resolvable);
        let r = solve_resolvable(&f.graph).unwrap();
        assert_eq!(r.weight, fasp_optimum(&f.graph).unwrap());
        assert!(is_acyclic(&f.graph.without_arcs(r.solution.ids())));
    }

    #[test]
    fn d3_is_not_resolvable() {
        let g = fixtures::d3();
        let trace = resolve(&g).unwrap();
        assert!(!trace.resolvable);
        assert_eq!(trace.resolved, g);
        assert!(trace.committed().is_empty());
        assert_eq!(solve_resolvable(&g).unwrap_err(), Error::NotResolvable);
    }

    #[test]
    fn relative_weight_example_depends_on_weights() {
        let f = fixtures::relative_weight_example();
        let trace = resolve(&f.graph).unwrap();
        assert!(!trace.resolvable);
        // the path d3 e2 is contracted and cut at its lighter arc
        let d3 = f.arc("d3");
        assert!(trace.resolved.contains_arc(d3) && !trace.resolved.contains_arc(f.arc("e2")));
        assert_eq!(trace.lift([d3].iter()).unwrap(), BTreeSet::from([d3]));
        let unit = f.graph.unit_weights();
        assert!(resolve(&unit).unwrap().resolvable);
        assert_eq!(solve_resolvable(&unit).unwrap().weight, fasp_optimum(&unit).unwrap());
    }

    #[test]
    fn isolated_subgraphs() {
        let f = fixtures::cactus();
        let iso = isolated_subgraph(&f.graph, f.arc("e1")).unwrap();
        assert_eq!(iso.ids(), f.arcs(&["e1", "f1"]));
        // c1 is isolated as seen from e1 (c3 avoids e1 but not d1),
        // c3 as seen from e3 (c1 avoids e3); c2 is never isolated
        let f = fixtures::relative_weight_example();
        for e in f.graph.arc_ids() {
            let iso = isolated_subgraph(&f.graph, e).unwrap();
            match f.name(e) {
                "e1" => assert_eq!(iso.ids(), f.arcs(&["e1", "d1"])),
                "e3" => assert_eq!(iso.ids(), f.arcs(&["e3", "d3", "e2"])),
                other => assert!(iso.is_empty(), "{other}"),
            }
        }
        assert!(isolated_subgraph(&f.graph, 99).is_err());
    }

    #[test]
    fn diamond_chain_resolves_by_forced_cut() {
        for d in 1..=6 {
            let g = fixtures::diamond_chain(d);
            let trace = resolve(&g).unwrap();
            assert!(trace.resolvable);
            assert_eq!(trace.committed().weight(), 1);
        }
    }

    #[test]
    fn partial_resolution_lifts_back() {
        // D3 with a pendant 2-cycle on vertex 3
        let mut g = fixtures::d3();
        g.add_arc(3, 4, 5).unwrap();
        g.add_arc(4, 3, 1).unwrap();
        let trace = resolve(&g).unwrap();
        assert!(!trace.resolvable);
        let omega_s = fasp_optimum(&trace.resolved).unwrap();
        let sol = crate::oracle::brute_force_fasp(&trace.resolved).unwrap();
        let lifted = trace.lift_solution(sol.first().ids()).unwrap();
        assert_eq!(lifted.weight(), fasp_optimum(&g).unwrap());
        assert_eq!(trace.committed().weight() + omega_s, lifted.weight());
        assert!(is_acyclic(&g.without_arcs(lifted.ids())));
    }
}
