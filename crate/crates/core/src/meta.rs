//! Arc sensitivity, meta graphs and relative weights.
//!
//! An arc `f` is sensitive to `e` when it lies on an elementary cycle through
//! `e` and still lies on a cycle once `e` is gone: cutting `e` does not settle
//! `f`. The meta graph of a seed cycle records how sensitivity spreads from
//! the seed; its cycle-space dimension measures how far the exact solver has
//! to branch.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::cycles::el_mask;
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::graph::{ArcId, Weight, WeightedMultiDigraph};
use crate::io::display_id;
use crate::topo::{self, Mask, Topology};

/// Meta graph of a seed cycle: an undirected graph on arcs of G.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetaGraph {
    pub nodes: BTreeSet<ArcId>,
    /// Unordered pairs stored as `(min, max)`.
    pub edges: BTreeSet<(ArcId, ArcId)>,
    pub seed_cycle: Vec<ArcId>,
    /// Construction layer of each node (0 for the seed cycle).
    pub layers: BTreeMap<ArcId, usize>,
}

fn edge(a: ArcId, b: ArcId) -> (ArcId, ArcId) {
    (a.min(b), a.max(b))
}

/// `(|edges|, |nodes|, #components)` of an undirected graph.
fn shape(nodes: &BTreeSet<ArcId>, edges: &BTreeSet<(ArcId, ArcId)>) -> (usize, usize, usize) {
    let index: BTreeMap<ArcId, usize> = nodes.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let mut parent: Vec<usize> = (0..nodes.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut components = nodes.len();
    for &(a, b) in edges {
        let (x, y) = (find(&mut parent, index[&a]), find(&mut parent, index[&b]));
        if x != y {
            parent[x] = y;
            components -= 1;
        }
    }
    (edges.len(), nodes.len(), components)
}

impl MetaGraph {
    /// Dimension of the cycle space: `|E| − |V| + #components`.
    pub fn cycle_dim(&self) -> usize {
        let (e, v, c) = shape(&self.nodes, &self.edges);
        e + c - v
    }

    pub fn is_forest(&self) -> bool {
        self.cycle_dim() == 0
    }

    /// Nodes of the component of `M ∖ f` that contains `anchor`.
    pub fn component_without(&self, f: ArcId, anchor: ArcId) -> BTreeSet<ArcId> {
        let mut seen = BTreeSet::from([anchor]);
        let mut stack = vec![anchor];
        while let Some(x) = stack.pop() {
            for &(a, b) in &self.edges {
                let y = if a == x {
                    b
                } else if b == x {
                    a
                } else {
                    continue;
                };
                if y != f && seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        seen
    }

    /// Undirected DOT rendering; node labels are 1-based arc ids, seed
    /// nodes are boxed.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph meta {\n");
        for &a in &self.nodes {
            let shape = if self.layers[&a] == 0 { "box" } else { "ellipse" };
            let _ = writeln!(
                s,
                "  a{} [label=\"{}\", shape={shape}, layer={}];",
                display_id(a),
                display_id(a),
                self.layers[&a]
            );
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(s, "  a{} -- a{};", display_id(a), display_id(b));
        }
        s.push_str("}\n");
        s
    }
}

/// Arcs sensitive to `h` within the arcs of `mask`.
fn sensitive_to(t: &Topology, mask: &Mask, h: usize) -> Mask {
    let mut el = el_mask(t, mask, h);
    if el.is_clear() {
        return el;
    }
    let mut rest = mask.clone();
    rest.set(h, false);
    el.intersect_with(&topo::closure(t, &rest));
    el.set(h, false);
    el
}

/// Whether `f` is sensitive to `e`: `f` lies in G_el(e) and on some cycle of
/// `G ∖ e`.
pub fn arc_sensitive(g: &WeightedMultiDigraph, f: ArcId, e: ArcId) -> Result<bool> {
    let t = g.topology();
    let pf = t.pos(f).ok_or(Error::UnknownArc(f))?;
    let pe = t.pos(e).ok_or(Error::UnknownArc(e))?;
    if pe == pf {
        return Ok(false);
    }
    Ok(sensitive_to(&t, &t.full_mask(), pe).contains(pf))
}

/// Checks that `cycle` is the arc set of an elementary cycle of `g`.
pub fn check_cycle(g: &WeightedMultiDigraph, cycle: &[ArcId]) -> Result<()> {
    let set: BTreeSet<ArcId> = cycle.iter().copied().collect();
    if set.is_empty() || set.len() != cycle.len() {
        return Err(Error::NotACycle);
    }
    let mut next = BTreeMap::new();
    for &a in &set {
        let arc = g.arc(a)?;
        if next.insert(arc.tail, arc.head).is_some() {
            return Err(Error::NotACycle);
        }
    }
    let start = *next.keys().next().unwrap();
    let (mut v, mut steps) = (start, 0);
    loop {
        v = *next.get(&v).ok_or(Error::NotACycle)?;
        steps += 1;
        if v == start {
            break;
        }
    }
    if steps == set.len() {
        Ok(())
    } else {
        Err(Error::NotACycle)
    }
}

/// The meta graph `M_c` of the seed cycle `c`.
///
/// Layer 0 is the arc set of `c`. Layer `k` collects, for every `h` in layer
/// `k−1`, the arcs sensitive to `h` in `G ∖ (W_{k−1} ∖ {h})`, where
/// `W_{k−1}` holds layers `0..k−1` for `k ≥ 2` and is empty for `k = 1`.
/// Nodes already placed are not placed again, so layers are disjoint. An
/// edge `[h, f]` joins `h` to every such sensitive `f` in layers `k−1` or `k`.
pub fn meta_graph(g: &WeightedMultiDigraph, cycle: &[ArcId]) -> Result<MetaGraph> {
    check_cycle(g, cycle)?;
    let t = g.topology();
    let mut seed: Vec<ArcId> = cycle.to_vec();
    seed.sort_unstable();
    let mut layers: BTreeMap<ArcId, usize> = seed.iter().map(|&a| (a, 0)).collect();
    let mut edges = BTreeSet::new();
    let mut previous: Vec<usize> = seed.iter().map(|&a| t.pos(a).unwrap()).collect();
    // W_{k-1}; empty while building layer 1
    let mut placed = t.empty_mask();
    let mut k = 1;
    while !previous.is_empty() {
        let mut layer = t.empty_mask();
        let mut found: Vec<(usize, Mask)> = Vec::new();
        for &h in &previous {
            let mut mask = t.full_mask();
            mask.difference_with(&placed);
            mask.insert(h);
            let n = sensitive_to(&t, &mask, h);
            for f in n.ones() {
                if !layers.contains_key(&t.ids[f]) {
                    layer.insert(f);
                }
            }
            found.push((h, n));
        }
        let mut current = Vec::new();
        for f in layer.ones() {
            layers.insert(t.ids[f], k);
            current.push(f);
        }
        for (h, n) in found {
            for f in n.ones() {
                let lf = layers.get(&t.ids[f]).copied();
                if lf == Some(k) || lf == Some(k - 1) {
                    edges.insert(edge(t.ids[h], t.ids[f]));
                }
            }
        }
        // W_k holds every layer up to k, the seed included
        for &a in layers.keys() {
            placed.insert(t.pos(a).unwrap());
        }
        previous = current;
        k += 1;
    }
    Ok(MetaGraph {
        nodes: layers.keys().copied().collect(),
        edges,
        seed_cycle: seed,
        layers,
    })
}

/// Cycle-space dimension of `M ∖ f` (summed over its components).
pub fn meta_cycle_dim(m: &MetaGraph, f: ArcId) -> Result<usize> {
    if !m.nodes.contains(&f) {
        return Err(Error::UnknownArc(f));
    }
    let mut nodes = m.nodes.clone();
    nodes.remove(&f);
    let edges = m.edges.iter().copied().filter(|&(a, b)| a != f && b != f).collect();
    let (e, v, c) = shape(&nodes, &edges);
    Ok(e + c - v)
}

/// `m(c, f)`: cycle-space dimension of the component of `M ∖ f` containing
/// `anchor`.
pub fn meta_cycle_dim_at(m: &MetaGraph, f: ArcId, anchor: ArcId) -> Result<usize> {
    for a in [f, anchor] {
        if !m.nodes.contains(&a) {
            return Err(Error::UnknownArc(a));
        }
    }
    if f == anchor {
        return Err(Error::Invalid("anchor and excluded arc coincide".into()));
    }
    let nodes = m.component_without(f, anchor);
    let edges = m
        .edges
        .iter()
        .copied()
        .filter(|(a, b)| nodes.contains(a) && nodes.contains(b))
        .collect();
    let (e, v, c) = shape(&nodes, &edges);
    Ok(e + c - v)
}

/// Meta graphs of a decomposition of the cycle arcs: seed the first cycle of
/// the remaining closure, build its meta graph in the remaining graph, drop
/// its nodes, re-close and repeat.
pub fn meta_decomposition(g: &WeightedMultiDigraph) -> Result<Vec<MetaGraph>> {
    let mut out = Vec::new();
    let mut rest = crate::graph::cycle_closure(g);
    while !rest.is_empty() {
        let t = rest.topology();
        let cycle = topo::first_cycle(&t, &t.full_mask()).expect("closure has a cycle");
        let ids: Vec<ArcId> = cycle.iter().map(|&p| t.ids[p]).collect();
        let m = meta_graph(&rest, &ids)?;
        rest = crate::graph::cycle_closure(&rest.without_arcs(&m.nodes));
        out.push(m);
    }
    Ok(out)
}

/// The largest meta cycle dimension `m(c)` over [`meta_decomposition`]; 0
/// for acyclic graphs.
///
/// `m(c)` is the dimension of the whole meta graph. Neither it nor the
/// per-exclusion values `m(c, f)` are bounded by the cycle space dimension
/// of `g` (see the tests), so this is a budget measure, not a certificate.
pub fn global_m(g: &WeightedMultiDigraph) -> Result<usize> {
    Ok(meta_decomposition(g)?
        .iter()
        .map(MetaGraph::cycle_dim)
        .max()
        .unwrap_or(0))
}

/// Relative weights of the arcs around anchor `e` once `f` is excluded.
///
/// `sigma` lists the arcs of `G_el(e) ∖ e` in `G ∖ f`. Arcs on no cycle of
/// `G ∖ {e, f}` keep their weight; an arc whose cycle component touches the
/// paths only there gets `ω(h) − (Ω(Q) − Ω(Q ∖ h))`. Arcs sharing a
/// component with other path arcs are listed in `overlaps` (their `sigma`
/// entry is the single-arc value, which is not additive across the group).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeWeight {
    pub seed: Vec<ArcId>,
    pub anchor: ArcId,
    pub excluded: ArcId,
    /// Arcs of the path network `G_el(e) ∖ e` in `G ∖ f`.
    pub paths: BTreeSet<ArcId>,
    pub sigma: BTreeMap<ArcId, i64>,
    pub overlaps: Vec<BTreeSet<ArcId>>,
    /// `Ω(H_{e,f}, σ)`: the cheaper of `ω(e)` and the σ-cut of the paths.
    pub optimum: Weight,
}

impl RelativeWeight {
    /// σ(h), defaulting to ω(h) for arcs off the path network.
    pub fn sigma_of(&self, g: &WeightedMultiDigraph, h: ArcId) -> Result<i64> {
        match self.sigma.get(&h) {
            Some(&s) => Ok(s),
            None => Ok(g.weight(h)? as i64),
        }
    }
}

fn relative_weight(g: &WeightedMultiDigraph, m: &MetaGraph, e: ArcId, f: ArcId) -> Result<RelativeWeight> {
    let t = g.topology();
    let pe = t.pos(e).ok_or(Error::UnknownArc(e))?;
    let pf = t.pos(f).ok_or(Error::UnknownArc(f))?;
    if pe == pf {
        return Err(Error::Invalid("anchor and excluded arc coincide".into()));
    }
    let mut mask = t.full_mask();
    mask.set(pf, false);
    let mut engine = Engine::new(&t);
    let rel = engine.relative(&mask, pe)?;
    let mut sigma: BTreeMap<ArcId, i64> = rel.sigma.iter().map(|&(a, s)| (t.ids[a], s as i64)).collect();
    let mut overlaps = Vec::new();
    for o in &rel.overlaps {
        for (i, &h) in o.attachments.iter().enumerate() {
            // cost of cutting h alone
            let single = o.costs[1 << i] as i64;
            sigma.insert(t.ids[h], single);
        }
        overlaps.push(o.attachments.iter().map(|&h| t.ids[h]).collect());
    }
    Ok(RelativeWeight {
        seed: m.seed_cycle.clone(),
        anchor: e,
        excluded: f,
        paths: t.ids_of(&rel.paths).into_iter().collect(),
        sigma,
        overlaps,
        optimum: rel.value,
    })
}

/// Relative weights when the meta component of `e` in `M ∖ f` is a tree.
/// Fails with [`Error::NonTreeMeta`] if that component has a cycle or the
/// path network needs branching over overlapping components.
pub fn relative_weight_tree(g: &WeightedMultiDigraph, m: &MetaGraph, e: ArcId, f: ArcId) -> Result<RelativeWeight> {
    if m.nodes.contains(&e) && m.nodes.contains(&f) && meta_cycle_dim_at(m, f, e)? > 0 {
        return Err(Error::NonTreeMeta(format!(
            "component of arc {} without arc {} has cycles",
            display_id(e),
            display_id(f)
        )));
    }
    let r = relative_weight(g, m, e, f)?;
    if !r.overlaps.is_empty() {
        return Err(Error::NonTreeMeta(format!(
            "paths of arc {} meet a cycle component more than once",
            display_id(e)
        )));
    }
    Ok(r)
}

/// Relative weights for any meta graph; branches over overlapping
/// components, so it is exponential in their number of attachments.
pub fn relative_weight_general(g: &WeightedMultiDigraph, m: &MetaGraph, e: ArcId, f: ArcId) -> Result<RelativeWeight> {
    relative_weight(g, m, e, f)
}
