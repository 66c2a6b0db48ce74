//! Minimum s-t cuts via Dinic's max-flow, and the single-anchor feedback
//! arc set built on them.

use std::collections::{BTreeMap, VecDeque};

use crate::cycles::el_mask;
use crate::error::{Error, Result};
use crate::graph::{ArcId, ArcSet, VertexId, Weight, WeightedMultiDigraph};
use crate::topo::{self, Mask, Topology};

/// Capacity used for arcs that must not be cut.
pub(crate) const INFINITE: u128 = u128::MAX >> 8;

struct Edge {
    to: usize,
    cap: u128,
}

/// Dinic's algorithm on a residual graph with paired edges.
struct Dinic {
    adj: Vec<Vec<usize>>,
    edges: Vec<Edge>,
    level: Vec<i64>,
    iter: Vec<usize>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Dinic {
            adj: vec![Vec::new(); n],
            edges: Vec::new(),
            level: vec![-1; n],
            iter: vec![0; n],
        }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: u128) -> usize {
        let id = self.edges.len();
        self.edges.push(Edge { to, cap });
        self.edges.push(Edge { to: from, cap: 0 });
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
        id
    }

    fn bfs(&mut self, s: usize) {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            for &id in &self.adj[v] {
                let e = &self.edges[id];
                if e.cap > 0 && self.level[e.to] < 0 {
                    self.level[e.to] = self.level[v] + 1;
                    q.push_back(e.to);
                }
            }
        }
    }

    fn dfs(&mut self, v: usize, t: usize, f: u128) -> u128 {
        if v == t {
            return f;
        }
        while self.iter[v] < self.adj[v].len() {
            let id = self.adj[v][self.iter[v]];
            let (to, cap) = (self.edges[id].to, self.edges[id].cap);
            if cap > 0 && self.level[v] < self.level[to] {
                let d = self.dfs(to, t, f.min(cap));
                if d > 0 {
                    self.edges[id].cap -= d;
                    self.edges[id ^ 1].cap += d;
                    return d;
                }
            }
            self.iter[v] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> u128 {
        let mut flow = 0;
        loop {
            self.bfs(s);
            if self.level[t] < 0 {
                return flow;
            }
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, u128::MAX);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
    }

    /// Vertices reachable from `s` in the residual graph.
    fn source_side(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &id in &self.adj[v] {
                let e = &self.edges[id];
                if e.cap > 0 && !seen[e.to] {
                    seen[e.to] = true;
                    stack.push(e.to);
                }
            }
        }
        seen
    }
}

/// Minimum cut separating `s` from `t` over the arcs of `mask` with the given
/// per-position capacities. Zero-capacity arcs are free to cut. Returns the
/// cut value and the crossing arcs (source side of the final residual
/// reachability).
pub(crate) fn min_cut(
    t: &Topology,
    mask: &Mask,
    s: usize,
    sink: usize,
    cap: impl Fn(usize) -> u128,
) -> (u128, Vec<usize>) {
    let mut d = Dinic::new(t.n());
    let mut arcs = Vec::new();
    for a in mask.ones() {
        let c = cap(a);
        if c > 0 {
            d.add_edge(t.tail[a], t.head[a], c);
        }
        arcs.push(a);
    }
    let value = d.max_flow(s, sink);
    let side = d.source_side(s);
    let cut = arcs
        .into_iter()
        .filter(|&a| side[t.tail[a]] && !side[t.head[a]])
        .collect();
    (value, cut)
}

/// A flow network over the arcs of a graph.
#[derive(Clone, Debug)]
pub struct FlowNetwork {
    pub graph: WeightedMultiDigraph,
    pub source: VertexId,
    pub sink: VertexId,
    /// Arc capacities; defaults to the arc weights.
    pub capacity: BTreeMap<ArcId, Weight>,
}

impl FlowNetwork {
    pub fn new(graph: WeightedMultiDigraph, source: VertexId, sink: VertexId) -> Result<Self> {
        if source == sink {
            return Err(Error::Invalid("source and sink must differ".into()));
        }
        for v in [source, sink] {
            if !graph.has_vertex(v) {
                return Err(Error::UnknownVertex(v));
            }
        }
        let capacity = graph.weighted_arcs().map(|(a, w)| (a.id, w)).collect();
        Ok(FlowNetwork {
            graph,
            source,
            sink,
            capacity,
        })
    }

    fn solve(&self) -> (Weight, Vec<ArcId>) {
        let t = self.graph.topology();
        let s = t.vertex(self.source).unwrap();
        let k = t.vertex(self.sink).unwrap();
        let (value, cut) = min_cut(&t, &t.full_mask(), s, k, |a| {
            u128::from(self.capacity.get(&t.ids[a]).copied().unwrap_or(0))
        });
        (value as Weight, cut.into_iter().map(|a| t.ids[a]).collect())
    }

    pub fn max_flow(&self) -> Weight {
        self.solve().0
    }
}

/// A minimum-capacity arc set whose removal disconnects sink from source.
/// The returned set's weight is measured in the graph's arc weights, which
/// equals the cut capacity for the default capacities.
pub fn min_st_cut(n: &FlowNetwork) -> Result<ArcSet> {
    let (_, cut) = n.solve();
    ArcSet::new(&n.graph, cut)
}

/// An optimal feedback arc set of G_el(e).
///
/// When every cycle of G_el(e) passes through e's parallel class, the optimum
/// is the cheaper of that class and a minimum cut from `head(e)` to `tail(e)`
/// in the rest (ties go to the class). Otherwise G_el(e) also contains cycles
/// avoiding e and the exact solver is used.
pub fn local_fas(g: &WeightedMultiDigraph, e: ArcId) -> Result<ArcSet> {
    let t = g.topology();
    let pe = t.pos(e).ok_or(Error::UnknownArc(e))?;
    let full = t.full_mask();
    let el = el_mask(&t, &full, pe);
    if el.is_clear() {
        return Ok(ArcSet::empty());
    }
    let class = t.parallels(&full, pe);
    let mut region = el.clone();
    region.union_with(&class);
    let mut rest = region.clone();
    rest.difference_with(&class);
    if !topo::closure(&t, &rest).is_clear() {
        let sub = g.arc_subgraph(&t.ids_of(&el));
        return crate::solver::cut(&sub).map(|r| r.solution);
    }
    match anchored_cut(&t, &rest, &class, pe) {
        Some(cut) => ArcSet::new(g, cut.into_iter().map(|a| t.ids[a])),
        None => ArcSet::new(g, t.ids_of(&class)),
    }
}

/// The min cut of the paths closing cycles through the anchor, when it is
/// strictly cheaper than the anchor class; `None` means cutting the class
/// is optimal.
pub(crate) fn anchored_cut(t: &Topology, rest: &Mask, class: &Mask, pe: usize) -> Option<Vec<usize>> {
    let (value, cut) = min_cut(t, rest, t.head[pe], t.tail[pe], |a| u128::from(t.weight[a]));
    (value < u128::from(t.weight_of(class))).then_some(cut)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn single_arc() {
        let g = WeightedMultiDigraph::from_arcs([(1, 2, 7)]).unwrap();
        let n = FlowNetwork::new(g, 1, 2).unwrap();
        let cut = min_st_cut(&n).unwrap();
        assert_eq!(cut.to_vec(), vec![0]);
        assert_eq!(cut.weight(), 7);
        assert_eq!(n.max_flow(), 7);
    }

    #[test]
    fn disjoint_paths_add_up() {
        let g = WeightedMultiDigraph::from_arcs([(1, 2, 5), (2, 4, 1), (1, 3, 2), (3, 4, 9)]).unwrap();
        let n = FlowNetwork::new(g, 1, 4).unwrap();
        assert_eq!(min_st_cut(&n).unwrap().weight(), 3);
        assert_eq!(min_st_cut(&n).unwrap().to_vec(), vec![1, 2]);
    }

    #[test]
    fn no_path_gives_empty_cut() {
        let g = WeightedMultiDigraph::from_arcs([(2, 1, 5)]).unwrap();
        let n = FlowNetwork::new(g, 1, 2).unwrap();
        assert!(min_st_cut(&n).unwrap().is_empty());
        assert!(FlowNetwork::new(WeightedMultiDigraph::from_arcs([(1, 2, 1)]).unwrap(), 1, 1).is_err());
    }

    #[test]
    fn parallel_arcs_keep_separate_capacity() {
        let g = WeightedMultiDigraph::from_arcs([(1, 2, 2), (1, 2, 3)]).unwrap();
        let n = FlowNetwork::new(g, 1, 2).unwrap();
        assert_eq!(n.max_flow(), 5);
    }

    #[test]
    fn local_fas_on_two_cycle() {
        let f = fixtures::cactus();
        let s = local_fas(&f.graph, f.arc("e1")).unwrap();
        assert_eq!(s.to_vec(), vec![f.arc("f1")]);
        assert_eq!(s.weight(), 2);
    }

    #[test]
    fn local_fas_prefers_anchor_when_cheaper() {
        // anchor 2->1 weight 1, two heavier paths back
        let g = WeightedMultiDigraph::from_arcs([(2, 1, 1), (1, 3, 4), (3, 2, 4), (1, 2, 5)]).unwrap();
        assert_eq!(local_fas(&g, 0).unwrap().to_vec(), vec![0]);
        let acyclic = WeightedMultiDigraph::from_arcs([(1, 2, 1)]).unwrap();
        assert!(local_fas(&acyclic, 0).unwrap().is_empty());
    }

    #[test]
    fn local_fas_when_el_has_extra_cycles() {
        // u=1 -> a=2 -> b=3 -> v=4 and u -> b -> a -> v; the 2-cycle a<->b
        // avoids the anchor 4 -> 1
        let g = WeightedMultiDigraph::from_arcs([
            (4, 1, 1),
            (1, 2, 5),
            (2, 3, 1),
            (3, 4, 5),
            (1, 3, 5),
            (3, 2, 1),
            (2, 4, 5),
        ])
        .unwrap();
        let s = local_fas(&g, 0).unwrap();
        assert_eq!(s.weight(), 2);
        assert!(crate::graph::is_acyclic(&g.without_arcs(s.ids())));
    }
}
