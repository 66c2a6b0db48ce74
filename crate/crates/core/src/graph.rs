//! Weighted loop-free multi-digraphs with stable arc identities.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::topo::{self, Topology};

pub type ArcId = usize;
pub type VertexId = usize;
pub type Weight = u64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arc {
    pub id: ArcId,
    pub tail: VertexId,
    pub head: VertexId,
}

/// A loop-free multi-digraph with positive integer arc weights.
///
/// Arc ids are stable: every subgraph operation keeps the ids of the
/// surviving arcs, so solutions computed on derived graphs always refer to
/// arcs of the input.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightedMultiDigraph {
    vertices: BTreeSet<VertexId>,
    arcs: Vec<Arc>,
    weights: Vec<Weight>,
}

impl WeightedMultiDigraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from `(tail, head, weight)` triples; arc `i` gets id `i`.
    pub fn from_arcs<I>(arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId, Weight)>,
    {
        let mut g = Self::new();
        for (tail, head, weight) in arcs {
            g.add_arc(tail, head, weight)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, v: VertexId) {
        self.vertices.insert(v);
    }

    /// Adds an arc with the next free id (one past the largest id in use).
    pub fn add_arc(&mut self, tail: VertexId, head: VertexId, weight: Weight) -> Result<ArcId> {
        let id = self.arcs.last().map_or(0, |a| a.id + 1);
        self.insert_arc(id, tail, head, weight)?;
        Ok(id)
    }

    /// Adds an arc with an explicit id.
    pub fn insert_arc(&mut self, id: ArcId, tail: VertexId, head: VertexId, weight: Weight) -> Result<()> {
        if tail == head {
            return Err(Error::Loop(tail));
        }
        if weight == 0 {
            return Err(Error::ZeroWeight);
        }
        let pos = match self.arcs.binary_search_by_key(&id, |a| a.id) {
            Ok(_) => return Err(Error::DuplicateArc(id)),
            Err(pos) => pos,
        };
        self.arcs.insert(pos, Arc { id, tail, head });
        self.weights.insert(pos, weight);
        self.vertices.insert(tail);
        self.vertices.insert(head);
        Ok(())
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// Arcs in ascending id order.
    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.arcs.iter().copied()
    }

    pub fn arc_ids(&self) -> impl Iterator<Item = ArcId> + '_ {
        self.arcs.iter().map(|a| a.id)
    }

    /// `(arc, weight)` pairs in ascending id order.
    pub fn weighted_arcs(&self) -> impl Iterator<Item = (Arc, Weight)> + '_ {
        self.arcs.iter().copied().zip(self.weights.iter().copied())
    }

    fn position(&self, id: ArcId) -> Option<usize> {
        self.arcs.binary_search_by_key(&id, |a| a.id).ok()
    }

    pub fn contains_arc(&self, id: ArcId) -> bool {
        self.position(id).is_some()
    }

    pub fn arc(&self, id: ArcId) -> Result<Arc> {
        self.position(id).map(|p| self.arcs[p]).ok_or(Error::UnknownArc(id))
    }

    pub fn weight(&self, id: ArcId) -> Result<Weight> {
        self.position(id).map(|p| self.weights[p]).ok_or(Error::UnknownArc(id))
    }

    pub fn set_weight(&mut self, id: ArcId, weight: Weight) -> Result<()> {
        if weight == 0 {
            return Err(Error::ZeroWeight);
        }
        let p = self.position(id).ok_or(Error::UnknownArc(id))?;
        self.weights[p] = weight;
        Ok(())
    }

    pub fn total_weight(&self) -> Weight {
        self.weights.iter().sum()
    }

    pub fn max_weight(&self) -> Weight {
        self.weights.iter().copied().max().unwrap_or(0)
    }

    pub fn min_weight(&self) -> Weight {
        self.weights.iter().copied().min().unwrap_or(0)
    }

    /// Sum of weights of the given arcs.
    pub fn weight_of<'a, I>(&self, ids: I) -> Result<Weight>
    where
        I: IntoIterator<Item = &'a ArcId>,
    {
        ids.into_iter().map(|&id| self.weight(id)).sum()
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.arcs.iter().filter(|a| a.tail == v).count()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.arcs.iter().filter(|a| a.head == v).count()
    }

    /// Maximum total degree Δ(G).
    pub fn max_degree(&self) -> usize {
        let mut deg: BTreeMap<VertexId, usize> = BTreeMap::new();
        for a in &self.arcs {
            *deg.entry(a.tail).or_default() += 1;
            *deg.entry(a.head).or_default() += 1;
        }
        deg.values().copied().max().unwrap_or(0)
    }

    /// The parallel class F⁺(e): all arcs with the same tail and head as `e`,
    /// including `e` itself.
    pub fn parallel_class(&self, id: ArcId) -> Result<Vec<ArcId>> {
        let e = self.arc(id)?;
        Ok(self
            .arcs
            .iter()
            .filter(|a| a.tail == e.tail && a.head == e.head)
            .map(|a| a.id)
            .collect())
    }

    /// Arcs running opposite to `e`.
    pub fn antiparallel(&self, id: ArcId) -> Result<Vec<ArcId>> {
        let e = self.arc(id)?;
        Ok(self
            .arcs
            .iter()
            .filter(|a| a.tail == e.head && a.head == e.tail)
            .map(|a| a.id)
            .collect())
    }

    /// The subgraph formed by the given arcs and their endpoints.
    pub fn arc_subgraph<'a, I>(&self, ids: I) -> Self
    where
        I: IntoIterator<Item = &'a ArcId>,
    {
        let keep: BTreeSet<ArcId> = ids.into_iter().copied().collect();
        self.filter_arcs(|a| keep.contains(&a.id))
    }

    /// The subgraph of arcs accepted by `keep`, restricted to their endpoints.
    pub fn filter_arcs(&self, mut keep: impl FnMut(&Arc) -> bool) -> Self {
        let mut g = Self::new();
        for (a, w) in self.weighted_arcs() {
            if keep(&a) {
                g.arcs.push(a);
                g.weights.push(w);
                g.vertices.insert(a.tail);
                g.vertices.insert(a.head);
            }
        }
        g
    }

    /// `G ∖ ids`; the vertex set is kept.
    pub fn without_arcs<'a, I>(&self, ids: I) -> Self
    where
        I: IntoIterator<Item = &'a ArcId>,
    {
        let drop: BTreeSet<ArcId> = ids.into_iter().copied().collect();
        let mut g = self.filter_arcs(|a| !drop.contains(&a.id));
        g.vertices = self.vertices.clone();
        g
    }

    /// Same structure with every weight replaced by `f(arc, weight)`.
    pub fn map_weights(&self, mut f: impl FnMut(Arc, Weight) -> Weight) -> Result<Self> {
        let mut g = self.clone();
        for (i, (a, w)) in self.weighted_arcs().enumerate() {
            let nw = f(a, w);
            if nw == 0 {
                return Err(Error::ZeroWeight);
            }
            g.weights[i] = nw;
        }
        Ok(g)
    }

    /// Same structure with all weights set to one.
    pub fn unit_weights(&self) -> Self {
        let mut g = self.clone();
        g.weights.iter_mut().for_each(|w| *w = 1);
        g
    }

    pub(crate) fn topology(&self) -> Topology {
        Topology::new(self)
    }
}

impl fmt::Display for WeightedMultiDigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G(|V|={}, |E|={})", self.num_vertices(), self.num_arcs())
    }
}

/// A set of arcs together with its total weight.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ArcSet {
    ids: BTreeSet<ArcId>,
    weight: Weight,
}

impl ArcSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Collects `ids` and sums their weights in `g`.
    pub fn new<I>(g: &WeightedMultiDigraph, ids: I) -> Result<Self>
    where
        I: IntoIterator<Item = ArcId>,
    {
        let ids: BTreeSet<ArcId> = ids.into_iter().collect();
        let weight = g.weight_of(&ids)?;
        Ok(Self { ids, weight })
    }

    pub fn ids(&self) -> &BTreeSet<ArcId> {
        &self.ids
    }

    pub fn iter(&self) -> impl Iterator<Item = ArcId> + '_ {
        self.ids.iter().copied()
    }

    pub fn weight(&self) -> Weight {
        self.weight
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn contains(&self, id: ArcId) -> bool {
        self.ids.contains(&id)
    }

    pub fn to_vec(&self) -> Vec<ArcId> {
        self.ids.iter().copied().collect()
    }
}

/// A digraph with vertex weights, the input of the feedback vertex set problem.
/// Arc weights of `graph` are ignored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VertexWeightedDigraph {
    pub graph: WeightedMultiDigraph,
    pub vertex_weight: BTreeMap<VertexId, Weight>,
}

impl VertexWeightedDigraph {
    pub fn weight(&self, v: VertexId) -> Result<Weight> {
        self.vertex_weight.get(&v).copied().ok_or(Error::UnknownVertex(v))
    }

    pub fn weight_of<'a, I>(&self, vs: I) -> Result<Weight>
    where
        I: IntoIterator<Item = &'a VertexId>,
    {
        vs.into_iter().map(|&v| self.weight(v)).sum()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertex_weight.keys().copied()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_weight.len()
    }

    /// True iff deleting `vs` leaves an acyclic graph.
    pub fn is_feedback_set(&self, vs: &BTreeSet<VertexId>) -> bool {
        let rest = self
            .graph
            .filter_arcs(|a| !vs.contains(&a.tail) && !vs.contains(&a.head));
        is_acyclic(&rest)
    }
}

/// True iff `g` has no directed cycle.
pub fn is_acyclic(g: &WeightedMultiDigraph) -> bool {
    let t = g.topology();
    !topo::has_cycle(&t, &t.full_mask())
}

/// The cycle closure G_o: the arcs lying on at least one directed cycle.
///
/// An arc survives iff both endpoints belong to the same strongly connected
/// component, which is exactly the fixpoint of repeatedly deleting arcs
/// `(u, v)` without a return path `v → u`.
pub fn cycle_closure(g: &WeightedMultiDigraph) -> WeightedMultiDigraph {
    let t = g.topology();
    let keep = topo::closure(&t, &t.full_mask());
    g.arc_subgraph(&t.ids_of(&keep))
}

/// Dimension of the cycle space, `|E| − |V| + #components`.
pub fn cycle_space_dim(g: &WeightedMultiDigraph) -> usize {
    let t = g.topology();
    (g.num_arcs() + topo::weak_components(&t, &t.full_mask())) - g.num_vertices()
}

/// The line graph L(G) with the arc weights of G carried as vertex weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineGraph {
    /// Vertices are the arc ids of the source graph; arcs have unit weight.
    pub graph: WeightedMultiDigraph,
    pub vertex_weight: BTreeMap<VertexId, Weight>,
}

impl LineGraph {
    pub fn into_vertex_weighted(self) -> VertexWeightedDigraph {
        VertexWeightedDigraph {
            graph: self.graph,
            vertex_weight: self.vertex_weight,
        }
    }
}

/// Builds L(G): one vertex per arc, and an arc `(e, f)` whenever
/// `head(e) = tail(f)`.
pub fn line_graph(g: &WeightedMultiDigraph) -> LineGraph {
    let mut out: BTreeMap<VertexId, Vec<ArcId>> = BTreeMap::new();
    for a in g.arcs() {
        out.entry(a.tail).or_default().push(a.id);
    }
    let mut lg = WeightedMultiDigraph::new();
    let mut vertex_weight = BTreeMap::new();
    for (a, w) in g.weighted_arcs() {
        lg.add_vertex(a.id);
        vertex_weight.insert(a.id, w);
    }
    for a in g.arcs() {
        for &f in out.get(&a.head).into_iter().flatten() {
            // head(a) = tail(f) and a is loop-free, so f ≠ a
            lg.add_arc(a.id, f, 1).expect("line graph arcs are loop-free");
        }
    }
    LineGraph {
        graph: lg,
        vertex_weight,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> WeightedMultiDigraph {
        WeightedMultiDigraph::from_arcs([(1, 2, 1), (2, 3, 1), (3, 1, 1)]).unwrap()
    }

    #[test]
    fn rejects_loops_and_zero_weights() {
        let mut g = WeightedMultiDigraph::new();
        assert_eq!(g.add_arc(1, 1, 1), Err(Error::Loop(1)));
        assert_eq!(g.add_arc(1, 2, 0), Err(Error::ZeroWeight));
        assert_eq!(g.add_arc(1, 2, 4), Ok(0));
        assert_eq!(g.insert_arc(0, 2, 1, 1), Err(Error::DuplicateArc(0)));
    }

    #[test]
    fn acyclicity() {
        assert!(!is_acyclic(&triangle()));
        let path = WeightedMultiDigraph::from_arcs([(1, 2, 1), (2, 3, 1)]).unwrap();
        assert!(is_acyclic(&path));
        assert!(is_acyclic(&WeightedMultiDigraph::new()));
    }

    #[test]
    fn closure_drops_pendant_arc() {
        let mut g = triangle();
        g.add_arc(3, 4, 1).unwrap();
        let c = cycle_closure(&g);
        assert_eq!(c.arc_ids().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert!(cycle_closure(&WeightedMultiDigraph::from_arcs([(1, 2, 1)]).unwrap()).is_empty());
    }

    #[test]
    fn cycle_space_dimension() {
        assert_eq!(cycle_space_dim(&triangle()), 1);
        let mut two = triangle();
        for (u, v) in [(4, 5), (5, 6), (6, 4)] {
            two.add_arc(u, v, 1).unwrap();
        }
        assert_eq!(cycle_space_dim(&two), 2);
        let d3 = crate::fixtures::d3();
        assert_eq!(cycle_space_dim(&d3), 4);
    }

    #[test]
    fn line_graph_of_cycle_and_single_arc() {
        let lg = line_graph(&triangle());
        assert_eq!(lg.graph.num_vertices(), 3);
        assert_eq!(lg.graph.num_arcs(), 3);
        assert!(!is_acyclic(&lg.graph));

        let single = WeightedMultiDigraph::from_arcs([(1, 2, 7)]).unwrap();
        let lg = line_graph(&single);
        assert_eq!(lg.graph.num_vertices(), 1);
        assert_eq!(lg.graph.num_arcs(), 0);
        assert_eq!(lg.vertex_weight[&0], 7);
    }

    #[test]
    fn parallel_and_antiparallel_classes() {
        let g = WeightedMultiDigraph::from_arcs([(1, 2, 1), (1, 2, 2), (2, 1, 3)]).unwrap();
        assert_eq!(g.parallel_class(1).unwrap(), vec![0, 1]);
        assert_eq!(g.antiparallel(0).unwrap(), vec![2]);
        assert_eq!(g.max_degree(), 3);
    }

    #[test]
    fn subgraphs_keep_ids() {
        let g = triangle();
        let h = g.without_arcs(&[1]);
        assert_eq!(h.arc_ids().collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(h.num_vertices(), 3);
        let s = g.arc_subgraph(&[2]);
        assert_eq!(
            s.arc(2).unwrap(),
            Arc {
                id: 2,
                tail: 3,
                head: 1
            }
        );
        assert_eq!(s.num_vertices(), 2);
    }
}
