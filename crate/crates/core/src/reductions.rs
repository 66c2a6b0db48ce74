//! Translations between feedback arc and feedback vertex problems.
//!
//! Arcs become vertices through the line graph. Vertices become arcs through
//! a gadget per vertex `v`: an in-node `t_v`, an out-node `h_v` and the arc
//! `h*_v = t_v → h_v` weighted γ(v); every arc `a = (u, v)` becomes a node
//! `n_a` with rim arcs `h_u → n_a → t_v`.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::Result;
use crate::graph::{line_graph, ArcId, VertexId, VertexWeightedDigraph, Weight, WeightedMultiDigraph};
use crate::solver::FeedbackReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    FasToFvs,
    FvsToFas,
}

/// Weights of the rim arcs of the vertex gadgets.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RimWeights {
    /// `1 + Σγ`: never worth cutting, so optimal cuts use gadget arcs only.
    #[default]
    Heavy,
    /// γ of the gadget the rim arc attaches to.
    Literal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    pub direction: Direction,
    pub transformed: WeightedMultiDigraph,
    /// Vertex weights of the transformed instance (line graph only).
    pub vertex_weight: BTreeMap<VertexId, Weight>,
    /// Transformed element (vertex of the line graph, or arc of G*) to the
    /// original element (arc, or vertex).
    pub pullback: BTreeMap<usize, usize>,
}

impl ReductionTrace {
    /// Original elements standing for a solution of the transformed instance.
    pub fn pull_back<I: IntoIterator<Item = usize>>(&self, elements: I) -> BTreeSet<usize> {
        elements
            .into_iter()
            .filter_map(|x| self.pullback.get(&x).copied())
            .collect()
    }

    /// The transformed instance as a vertex-weighted graph (line graph only).
    pub fn as_vertex_weighted(&self) -> Option<VertexWeightedDigraph> {
        (self.direction == Direction::FasToFvs).then(|| VertexWeightedDigraph {
            graph: self.transformed.clone(),
            vertex_weight: self.vertex_weight.clone(),
        })
    }
}

/// The line graph with γ = ω on its vertices. A feedback vertex set of it is
/// a feedback arc set of `g` of the same weight.
pub fn fasp_to_fvsp(g: &WeightedMultiDigraph) -> ReductionTrace {
    let lg = line_graph(g);
    ReductionTrace {
        direction: Direction::FasToFvs,
        pullback: g.arc_ids().map(|a| (a, a)).collect(),
        transformed: lg.graph,
        vertex_weight: lg.vertex_weight,
    }
}

/// The gadget graph G* with `|V*| = |E| + 2|V|` and `|E*| = |V| + 2|E|`.
/// Arc `i` of G* is the gadget arc of the `i`-th vertex (ascending order);
/// rim arcs follow.
pub fn fvsp_to_fasp(g: &VertexWeightedDigraph, rims: RimWeights) -> Result<ReductionTrace> {
    let vs: Vec<VertexId> = g.vertices().collect();
    let index: BTreeMap<VertexId, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let t_node = |v: VertexId| 2 * index[&v] + 1;
    let h_node = |v: VertexId| 2 * index[&v] + 2;
    let heavy = 1 + g.vertex_weight.values().sum::<Weight>();
    let rim = |v: VertexId| -> Result<Weight> {
        Ok(match rims {
            RimWeights::Heavy => heavy,
            RimWeights::Literal => g.weight(v)?,
        })
    };

    let mut star = WeightedMultiDigraph::new();
    let mut pullback = BTreeMap::new();
    for &v in &vs {
        let id = star.add_arc(t_node(v), h_node(v), g.weight(v)?)?;
        pullback.insert(id, v);
    }
    for (j, a) in g.graph.arcs().enumerate() {
        let n = 2 * vs.len() + 1 + j;
        let out = star.add_arc(h_node(a.tail), n, rim(a.tail)?)?;
        let inn = star.add_arc(n, t_node(a.head), rim(a.head)?)?;
        pullback.insert(out, a.tail);
        pullback.insert(inn, a.head);
    }
    Ok(ReductionTrace {
        direction: Direction::FvsToFas,
        transformed: star,
        vertex_weight: BTreeMap::new(),
        pullback,
    })
}

/// Solves a feedback vertex instance through G* with the given arc solver;
/// returns the pulled-back vertex set, its weight and the arc report.
pub fn solve_fvs<F>(g: &VertexWeightedDigraph, solver: F) -> Result<(BTreeSet<VertexId>, Weight, FeedbackReport)>
where
    F: FnOnce(&WeightedMultiDigraph) -> Result<FeedbackReport>,
{
    let trace = fvsp_to_fasp(g, RimWeights::Heavy)?;
    let report = solver(&trace.transformed)?;
    let vertices = trace.pull_back(report.solution.iter());
    let weight = g.weight_of(&vertices)?;
    Ok((vertices, weight, report))
}

/// Pulls a vertex set of the line graph back to arcs.
pub fn arcs_of(trace: &ReductionTrace, vertices: &BTreeSet<VertexId>) -> BTreeSet<ArcId> {
    trace.pull_back(vertices.iter().copied())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{brute_force_fasp, brute_force_fvsp, fasp_optimum};

    fn two_cycle() -> VertexWeightedDigraph {
        VertexWeightedDigraph {
            graph: WeightedMultiDigraph::from_arcs([(1, 2, 1), (2, 1, 1)]).unwrap(),
            vertex_weight: BTreeMap::from([(1, 1), (2, 2)]),
        }
    }

    #[test]
    fn triangle_line_graph() {
        let g = WeightedMultiDigraph::from_arcs([(1, 2, 3), (2, 3, 1), (3, 1, 2)]).unwrap();
        let tr = fasp_to_fvsp(&g);
        let vw = tr.as_vertex_weighted().unwrap();
        let r = brute_force_fvsp(&vw).unwrap();
        assert_eq!(r.optimum, 1);
        assert_eq!(arcs_of(&tr, &r.all_optimal_sets[0]), BTreeSet::from([1]));
    }

    #[test]
    fn two_cycle_gadget() {
        let g = two_cycle();
        let tr = fvsp_to_fasp(&g, RimWeights::Heavy).unwrap();
        assert_eq!(tr.transformed.num_vertices(), 2 + 4);
        assert_eq!(tr.transformed.num_arcs(), 2 + 4);
        let r = brute_force_fasp(&tr.transformed).unwrap();
        assert_eq!(r.optimum, 1);
        assert_eq!(tr.pull_back(r.first().iter()), BTreeSet::from([1]));
        let (vs, w, _) = solve_fvs(&g, crate::solver::cut).unwrap();
        assert_eq!((vs, w), (BTreeSet::from([1]), 1));
    }

    #[test]
    fn literal_rims_preserve_the_optimum() {
        let g = two_cycle();
        let tr = fvsp_to_fasp(&g, RimWeights::Literal).unwrap();
        assert_eq!(fasp_optimum(&tr.transformed).unwrap(), 1);
    }

    #[test]
    fn acyclic_stays_acyclic() {
        let g = VertexWeightedDigraph {
            graph: WeightedMultiDigraph::from_arcs([(1, 2, 1)]).unwrap(),
            vertex_weight: BTreeMap::from([(1, 1), (2, 1)]),
        };
        let tr = fvsp_to_fasp(&g, RimWeights::Heavy).unwrap();
        assert!(crate::graph::is_acyclic(&tr.transformed));
        assert!(tr.as_vertex_weighted().is_none());
    }
}
