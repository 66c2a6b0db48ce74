//! Subgraphs spanned by the cycles through an arc: G(u,v), G_el(e), G_si(e).
//!
//! A cycle through `e = (u, v)` is `e` followed by a path from `head(e)` back
//! to `tail(e)`.

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::graph::{line_graph, ArcId, ArcSet, VertexId, WeightedMultiDigraph};
use crate::topo::{self, Mask, Topology};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Anchor {
    Arc(ArcId),
    Pair(VertexId, VertexId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycleKind {
    /// Arcs on directed walks between a vertex pair.
    Walk,
    Elementary,
    Simple,
    /// Union of the cycles isolated at the anchor.
    Isolated,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleSubgraph {
    pub anchor: Anchor,
    pub kind: CycleKind,
    pub arcs: ArcSet,
    /// Arcs parallel to an arc anchor. They share the anchor's path set but
    /// are not on cycles through it, so they are not part of `arcs`.
    pub parallels: Vec<ArcId>,
}

impl CycleSubgraph {
    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn contains(&self, id: ArcId) -> bool {
        self.arcs.contains(id)
    }

    pub fn ids(&self) -> Vec<ArcId> {
        self.arcs.to_vec()
    }

    /// The subgraph of `base` formed by the member arcs.
    pub fn subgraph(&self, base: &WeightedMultiDigraph) -> WeightedMultiDigraph {
        base.arc_subgraph(self.arcs.ids())
    }
}

/// G(u, v): all arcs on some directed walk from `u` to `v`.
pub fn reachable_subgraph(g: &WeightedMultiDigraph, u: VertexId, v: VertexId) -> Result<CycleSubgraph> {
    let t = g.topology();
    let iu = t.vertex(u).ok_or(Error::UnknownVertex(u))?;
    let iv = t.vertex(v).ok_or(Error::UnknownVertex(v))?;
    let w = topo::walk_mask(&t, &t.full_mask(), iu, iv);
    Ok(CycleSubgraph {
        anchor: Anchor::Pair(u, v),
        kind: CycleKind::Walk,
        arcs: ArcSet::new(g, t.ids_of(&w))?,
        parallels: Vec::new(),
    })
}

/// G_el(e): the union of all elementary cycles through `e`.
pub fn elementary_subgraph(g: &WeightedMultiDigraph, e: ArcId) -> Result<CycleSubgraph> {
    let t = g.topology();
    let pe = t.pos(e).ok_or(Error::UnknownArc(e))?;
    let el = el_mask(&t, &t.full_mask(), pe);
    anchored(g, &t, e, pe, CycleKind::Elementary, &el)
}

pub(crate) fn anchored(
    g: &WeightedMultiDigraph,
    t: &Topology,
    e: ArcId,
    pe: usize,
    kind: CycleKind,
    mask: &Mask,
) -> Result<CycleSubgraph> {
    let parallels = if mask.is_clear() {
        Vec::new()
    } else {
        let mut p = t.parallels(&t.full_mask(), pe);
        p.set(pe, false);
        t.ids_of(&p)
    };
    Ok(CycleSubgraph {
        anchor: Anchor::Arc(e),
        kind,
        arcs: ArcSet::new(g, t.ids_of(mask))?,
        parallels,
    })
}

/// G_el(e) restricted to the arcs of `mask`, as a mask (empty if `e` lies on
/// no cycle).
///
/// A polynomial filter first discards arcs `f = (p, q)` that cannot lie on an
/// elementary path `u → v` (`u = head(e)`, `v = tail(e)`): those without a
/// path `u → p` avoiding `{q, v}` or a path `q → v` avoiding `{p, u}`. The
/// filter is iterated with the walk-graph recomputation until stable. It is
/// not exact on its own (membership is a two-disjoint-paths question), so
/// every surviving arc is then certified by a witness path.
pub(crate) fn el_mask(t: &Topology, mask: &Mask, e: usize) -> Mask {
    let (u, v) = (t.head[e], t.tail[e]);
    let mut search = mask.clone();
    search.difference_with(&t.parallels(mask, e));
    let mut w = topo::walk_mask(t, &search, u, v);
    let mut blocked = FixedBitSet::with_capacity(t.n());
    loop {
        let mut keep = w.clone();
        for f in w.ones() {
            let (p, q) = (t.tail[f], t.head[f]);
            let ok = p != v
                && q != u
                && {
                    blocked.clear();
                    blocked.insert(q);
                    blocked.insert(v);
                    topo::reach(t, &w, u, &blocked, true).contains(p)
                }
                && {
                    blocked.clear();
                    blocked.insert(p);
                    blocked.insert(u);
                    topo::reach(t, &w, v, &blocked, false).contains(q)
                };
            if !ok {
                keep.set(f, false);
            }
        }
        if keep == w {
            break;
        }
        w = topo::walk_mask(t, &keep, u, v);
    }

    let mut certified = t.empty_mask();
    for f in w.ones() {
        if certified.contains(f) {
            continue;
        }
        if let Some(path) = witness(t, &w, u, v, f) {
            for a in path {
                certified.insert(a);
            }
        }
    }
    if !certified.is_clear() {
        certified.insert(e);
    }
    certified
}

/// An elementary path `u → v` within `w` that uses arc `f`.
fn witness(t: &Topology, w: &Mask, u: usize, v: usize, f: usize) -> Option<Vec<usize>> {
    struct Search<'a> {
        t: &'a Topology,
        w: &'a Mask,
        v: usize,
        f: usize,
        visited: FixedBitSet,
        path: Vec<usize>,
    }
    impl Search<'_> {
        fn run(&mut self, x: usize) -> Option<Vec<usize>> {
            let t = self.t;
            let (p, q) = (t.tail[self.f], t.head[self.f]);
            if x == p {
                if self.visited.contains(q) {
                    return None;
                }
                let rest = if q == self.v {
                    Vec::new()
                } else {
                    let mut allowed = self.w.clone();
                    for a in self.w.ones() {
                        if self.visited.contains(t.head[a]) || self.visited.contains(t.tail[a]) {
                            allowed.set(a, false);
                        }
                    }
                    topo::shortest_path(t, &allowed, q, self.v)?
                };
                let mut full = self.path.clone();
                full.push(self.f);
                full.extend(rest);
                return Some(full);
            }
            let mut avoid = self.visited.clone();
            avoid.insert(q);
            avoid.insert(self.v);
            for &a in &t.out[x] {
                let y = t.head[a];
                if !self.w.contains(a) || avoid.contains(y) {
                    continue;
                }
                // y must still reach p without touching the path so far
                if !topo::reach(t, self.w, y, &avoid, true).contains(p) {
                    continue;
                }
                self.visited.insert(y);
                self.path.push(a);
                if let Some(found) = self.run(y) {
                    return Some(found);
                }
                self.path.pop();
                self.visited.set(y, false);
            }
            None
        }
    }
    let mut visited = FixedBitSet::with_capacity(t.n());
    visited.insert(u);
    let mut s = Search {
        t,
        w,
        v,
        f,
        visited,
        path: Vec::new(),
    };
    s.run(u)
}

/// Arc-connected cycle components of `mask`: classes of the transitive
/// closure of "lie on a common elementary cycle". Arcs on no cycle belong to
/// no component. Components are ordered by their smallest arc.
pub(crate) fn cycle_components(t: &Topology, mask: &Mask) -> Vec<Mask> {
    let closed = topo::closure(t, mask);
    let mut parent: Vec<usize> = (0..t.m()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut covered = t.empty_mask();
    for a in closed.ones() {
        let el = el_mask(t, &closed, a);
        for b in el.ones() {
            let (x, y) = (find(&mut parent, a), find(&mut parent, b));
            if x != y {
                parent[x.max(y)] = x.min(y);
            }
        }
        covered.union_with(&el);
    }
    debug_assert_eq!(covered, closed);
    let mut comps: Vec<(usize, Mask)> = Vec::new();
    for a in closed.ones() {
        let r = find(&mut parent, a);
        match comps.iter_mut().find(|(root, _)| *root == r) {
            Some((_, m)) => m.insert(a),
            None => {
                let mut m = t.empty_mask();
                m.insert(a);
                comps.push((r, m));
            }
        }
    }
    comps.into_iter().map(|(_, m)| m).collect()
}

/// Arc-connected cycle components of `g` as arc id sets.
pub fn cycle_components_of(g: &WeightedMultiDigraph) -> Vec<BTreeSet<ArcId>> {
    let t = g.topology();
    cycle_components(&t, &t.full_mask())
        .iter()
        .map(|m| t.ids_of(m).into_iter().collect())
        .collect()
}

/// G_si(e): the union of all simple cycles (closed trails) through `e`.
///
/// Simple paths `head(e) → tail(e)` in `G ∖ e` are the elementary paths of
/// the line graph between two sentinel arcs `x* → head(e)` and
/// `tail(e) → y*`; closing them with a temporary arc turns the question into
/// an elementary-subgraph query on the line graph.
pub fn simple_subgraph(g: &WeightedMultiDigraph, e: ArcId) -> Result<CycleSubgraph> {
    let anchor = g.arc(e)?;
    let mut aug = g.without_arcs(&[e]);
    let fresh_v = g.vertices().max().unwrap_or(0) + 1;
    let fresh_a = g.arc_ids().max().unwrap_or(0) + 1;
    let (s, z) = (fresh_a, fresh_a + 1);
    aug.insert_arc(s, fresh_v, anchor.head, 1)?;
    aug.insert_arc(z, anchor.tail, fresh_v + 1, 1)?;

    let mut lg = line_graph(&aug).graph;
    let closing = lg.add_arc(z, s, 1)?;
    let lt = lg.topology();
    let pc = lt.pos(closing).expect("closing arc present");
    let el = el_mask(&lt, &lt.full_mask(), pc);

    let mut members = BTreeSet::new();
    for p in el.ones() {
        for x in [lt.vertex_ids[lt.tail[p]], lt.vertex_ids[lt.head[p]]] {
            if x != s && x != z {
                members.insert(x);
            }
        }
    }
    if !members.is_empty() {
        members.insert(e);
    }
    let parallels = if members.is_empty() {
        Vec::new()
    } else {
        g.parallel_class(e)?.into_iter().filter(|&p| p != e).collect()
    };
    Ok(CycleSubgraph {
        anchor: Anchor::Arc(e),
        kind: CycleKind::Simple,
        arcs: ArcSet::new(g, members)?,
        parallels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn reachable_pair() {
        let g = WeightedMultiDigraph::from_arcs([(1, 2, 1), (2, 3, 1), (4, 5, 1)]).unwrap();
        assert_eq!(reachable_subgraph(&g, 1, 3).unwrap().ids(), vec![0, 1]);
        let tri = WeightedMultiDigraph::from_arcs([(1, 2, 1), (2, 3, 1), (3, 1, 1)]).unwrap();
        assert_eq!(reachable_subgraph(&tri, 1, 1).unwrap().ids(), vec![0, 1, 2]);
        assert!(reachable_subgraph(&tri, 1, 9).is_err());
    }

    #[test]
    fn cactus_anchor_e1() {
        let f = fixtures::cactus();
        let el = elementary_subgraph(&f.graph, f.arc("e1")).unwrap();
        assert_eq!(el.ids(), f.arcs(&["e1", "f1"]));
    }

    #[test]
    fn parallel_example_elementary_and_simple() {
        let f = fixtures::parallel_example();
        let el = elementary_subgraph(&f.graph, f.arc("e")).unwrap();
        assert_eq!(el.ids(), f.arcs(&["e", "f", "g", "i"]));
        let si = simple_subgraph(&f.graph, f.arc("e")).unwrap();
        assert_eq!(si.ids(), f.arcs(&["e", "f", "g", "h", "i"]));
        assert_eq!(si.kind, CycleKind::Simple);
    }

    #[test]
    fn arc_on_no_cycle() {
        let g = WeightedMultiDigraph::from_arcs([(1, 2, 1), (2, 3, 1), (3, 1, 1), (3, 4, 1)]).unwrap();
        assert!(elementary_subgraph(&g, 3).unwrap().is_empty());
        assert!(simple_subgraph(&g, 3).unwrap().is_empty());
        assert_eq!(elementary_subgraph(&g, 0).unwrap().ids(), vec![0, 1, 2]);
    }

    #[test]
    fn parallels_reported_alongside() {
        let g = WeightedMultiDigraph::from_arcs([(1, 2, 1), (1, 2, 3), (2, 1, 1)]).unwrap();
        let el = elementary_subgraph(&g, 0).unwrap();
        assert_eq!(el.ids(), vec![0, 2]);
        assert_eq!(el.parallels, vec![1]);
    }

    #[test]
    fn filter_alone_is_not_enough() {
        // u = 1, v = 2 (anchor 2 -> 1). The arc 5 -> 6 passes every
        // pairwise reachability test, but any path through it must reuse a
        // vertex: 1 -> 3 -> 5 -> 6 -> 3 ... and 5 -> 6 -> 4 -> 5 ... close
        // back on themselves.
        let g = WeightedMultiDigraph::from_arcs([
            (2, 1, 1), // anchor
            (1, 3, 1),
            (3, 5, 1),
            (5, 6, 1),
            (6, 3, 1),
            (6, 4, 1),
            (4, 5, 1),
            (4, 2, 1),
            (1, 4, 1),
            (3, 2, 1),
        ])
        .unwrap();
        let el = elementary_subgraph(&g, 0).unwrap();
        let cycles = crate::oracle::enumerate_elementary_cycles(&g, 1000).unwrap();
        let want: BTreeSet<ArcId> = cycles.iter().filter(|c| c.contains(&0)).flatten().copied().collect();
        assert_eq!(el.arcs.ids(), &want);
    }

    #[test]
    fn components_of_two_triangles_sharing_a_vertex() {
        let g = WeightedMultiDigraph::from_arcs([
            (1, 2, 1),
            (2, 3, 1),
            (3, 1, 1),
            (3, 4, 1),
            (4, 5, 1),
            (5, 3, 1),
            (5, 6, 1),
        ])
        .unwrap();
        let comps = cycle_components_of(&g);
        assert_eq!(comps, vec![BTreeSet::from([0, 1, 2]), BTreeSet::from([3, 4, 5])]);
    }
}
