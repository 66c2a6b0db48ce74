//! Compact index-based view of a graph used by the algorithms. Arc subsets
//! are bit masks over arc positions (positions follow ascending arc id).

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;

use crate::graph::{ArcId, VertexId, Weight, WeightedMultiDigraph};

pub(crate) type Mask = FixedBitSet;

#[derive(Clone, Debug)]
pub(crate) struct Topology {
    pub ids: Vec<ArcId>,
    pub tail: Vec<usize>,
    pub head: Vec<usize>,
    pub weight: Vec<Weight>,
    pub vertex_ids: Vec<VertexId>,
    pub out: Vec<Vec<usize>>,
    pub inc: Vec<Vec<usize>>,
}

impl Topology {
    pub fn new(g: &WeightedMultiDigraph) -> Self {
        let vertex_ids: Vec<VertexId> = g.vertices().collect();
        let index = |v: VertexId| vertex_ids.binary_search(&v).expect("endpoint is a vertex");
        let n = vertex_ids.len();
        let mut t = Topology {
            ids: Vec::with_capacity(g.num_arcs()),
            tail: Vec::with_capacity(g.num_arcs()),
            head: Vec::with_capacity(g.num_arcs()),
            weight: Vec::with_capacity(g.num_arcs()),
            vertex_ids: vertex_ids.clone(),
            out: vec![Vec::new(); n],
            inc: vec![Vec::new(); n],
        };
        for (pos, (a, w)) in g.weighted_arcs().enumerate() {
            let (u, v) = (index(a.tail), index(a.head));
            t.ids.push(a.id);
            t.tail.push(u);
            t.head.push(v);
            t.weight.push(w);
            t.out[u].push(pos);
            t.inc[v].push(pos);
        }
        t
    }

    pub fn m(&self) -> usize {
        self.ids.len()
    }

    pub fn n(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn full_mask(&self) -> Mask {
        let mut m = Mask::with_capacity(self.m());
        m.insert_range(..);
        m
    }

    pub fn empty_mask(&self) -> Mask {
        Mask::with_capacity(self.m())
    }

    pub fn pos(&self, id: ArcId) -> Option<usize> {
        self.ids.binary_search(&id).ok()
    }

    pub fn vertex(&self, v: VertexId) -> Option<usize> {
        self.vertex_ids.binary_search(&v).ok()
    }

    pub fn ids_of(&self, mask: &Mask) -> Vec<ArcId> {
        mask.ones().map(|p| self.ids[p]).collect()
    }

    pub fn weight_of(&self, mask: &Mask) -> Weight {
        mask.ones().map(|p| self.weight[p]).sum()
    }

    /// Positions of arcs parallel to `e` (same tail and head), including `e`.
    pub fn parallels(&self, mask: &Mask, e: usize) -> Mask {
        let mut m = self.empty_mask();
        for &a in &self.out[self.tail[e]] {
            if mask.contains(a) && self.head[a] == self.head[e] {
                m.insert(a);
            }
        }
        m.insert(e);
        m
    }

    fn vertex_set(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.n())
    }
}

/// Kahn's algorithm on the arcs in `mask`.
pub(crate) fn has_cycle(t: &Topology, mask: &Mask) -> bool {
    let mut indeg = vec![0usize; t.n()];
    for a in mask.ones() {
        indeg[t.head[a]] += 1;
    }
    let mut stack: Vec<usize> = (0..t.n()).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = stack.pop() {
        seen += 1;
        for &a in &t.out[v] {
            if mask.contains(a) {
                let w = t.head[a];
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
    }
    seen < t.n()
}

/// Strongly connected components (iterative Tarjan); returns a component
/// index per vertex.
pub(crate) fn scc(t: &Topology, mask: &Mask) -> Vec<usize> {
    const UNSEEN: usize = usize::MAX;
    let n = t.n();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut next = 0;
    let mut ncomp = 0;
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        // frames of (vertex, next out-arc slot)
        let mut frames = vec![(root, 0usize)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut slot)) = frames.last_mut() {
            if let Some(&a) = t.out[v].get(*slot) {
                *slot += 1;
                if !mask.contains(a) {
                    continue;
                }
                let w = t.head[a];
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                frames.pop();
                if let Some(&(p, _)) = frames.last() {
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == index[v] {
                    while let Some(w) = stack.pop() {
                        on_stack[w] = false;
                        comp[w] = ncomp;
                        if w == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
            }
        }
    }
    comp
}

/// Arcs of `mask` lying on a directed cycle.
pub(crate) fn closure(t: &Topology, mask: &Mask) -> Mask {
    let comp = scc(t, mask);
    let mut keep = t.empty_mask();
    for a in mask.ones() {
        if comp[t.tail[a]] == comp[t.head[a]] {
            keep.insert(a);
        }
    }
    keep
}

/// Number of weakly connected components over all vertices of `t`.
pub(crate) fn weak_components(t: &Topology, mask: &Mask) -> usize {
    let mut parent: Vec<usize> = (0..t.n()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut count = t.n();
    for a in mask.ones() {
        let (x, y) = (find(&mut parent, t.tail[a]), find(&mut parent, t.head[a]));
        if x != y {
            parent[x] = y;
            count -= 1;
        }
    }
    count
}

/// Vertices reachable from `start` along arcs of `mask` (forward) or
/// reaching `start` (backward), never entering `blocked`.
pub(crate) fn reach(t: &Topology, mask: &Mask, start: usize, blocked: &FixedBitSet, forward: bool) -> FixedBitSet {
    let mut seen = t.vertex_set();
    if blocked.contains(start) {
        return seen;
    }
    seen.insert(start);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        let arcs = if forward { &t.out[v] } else { &t.inc[v] };
        for &a in arcs {
            if !mask.contains(a) {
                continue;
            }
            let w = if forward { t.head[a] } else { t.tail[a] };
            if !seen.contains(w) && !blocked.contains(w) {
                seen.insert(w);
                stack.push(w);
            }
        }
    }
    seen
}

/// G(u, v): arcs on some directed walk from `u` to `v`.
pub(crate) fn walk_mask(t: &Topology, mask: &Mask, u: usize, v: usize) -> Mask {
    let none = t.vertex_set();
    let fwd = reach(t, mask, u, &none, true);
    let bwd = reach(t, mask, v, &none, false);
    let mut out = t.empty_mask();
    for a in mask.ones() {
        if fwd.contains(t.tail[a]) && bwd.contains(t.head[a]) {
            out.insert(a);
        }
    }
    out
}

/// Shortest path (in arcs) from `from` to `to`; arcs are explored in
/// position order so the result is deterministic.
pub(crate) fn shortest_path(t: &Topology, mask: &Mask, from: usize, to: usize) -> Option<Vec<usize>> {
    let mut pred: Vec<Option<usize>> = vec![None; t.n()];
    let mut seen = t.vertex_set();
    seen.insert(from);
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            let mut path = Vec::new();
            let mut x = to;
            while x != from {
                let a = pred[x].expect("predecessor recorded");
                path.push(a);
                x = t.tail[a];
            }
            path.reverse();
            return Some(path);
        }
        for &a in &t.out[v] {
            let w = t.head[a];
            if mask.contains(a) && !seen.contains(w) {
                seen.insert(w);
                pred[w] = Some(a);
                queue.push_back(w);
            }
        }
    }
    None
}

/// A shortest elementary cycle through arc `e`, starting with `e`.
pub(crate) fn cycle_through(t: &Topology, mask: &Mask, e: usize) -> Option<Vec<usize>> {
    let mut rest = mask.clone();
    rest.set(e, false);
    let mut path = shortest_path(t, &rest, t.head[e], t.tail[e])?;
    path.insert(0, e);
    Some(path)
}

/// The cycle through the lowest-positioned arc that lies on any cycle.
pub(crate) fn first_cycle(t: &Topology, mask: &Mask) -> Option<Vec<usize>> {
    let c = closure(t, mask);
    let e = c.ones().next()?;
    cycle_through(t, &c, e)
}
