//! Brute-force ground truth for small instances: exhaustive FAS/FVS solving
//! and elementary cycle enumeration.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{ArcId, ArcSet, VertexId, VertexWeightedDigraph, Weight, WeightedMultiDigraph};
use crate::topo::{self, Topology};

pub const MAX_FAS_ARCS: usize = 20;
pub const MAX_FVS_VERTICES: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub optimum: Weight,
    /// Every minimum-weight feedback arc set, in discovery order.
    pub all_optimal_sets: Vec<ArcSet>,
}

impl OracleResult {
    pub fn first(&self) -> &ArcSet {
        &self.all_optimal_sets[0]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexOracleResult {
    pub optimum: Weight,
    pub all_optimal_sets: Vec<BTreeSet<VertexId>>,
}

/// Small graph with arcs as bits of a `u32`.
struct Bits {
    n: usize,
    tail: Vec<usize>,
    head: Vec<usize>,
    weight: Vec<Weight>,
    out: Vec<Vec<usize>>,
}

impl Bits {
    fn new(t: &Topology) -> Self {
        Bits {
            n: t.n(),
            tail: t.tail.clone(),
            head: t.head.clone(),
            weight: t.weight.clone(),
            out: t.out.clone(),
        }
    }

    /// Shortest cycle among arcs not in `cut`, as arc indices; ties go to
    /// the cycle found first when scanning anchor arcs in order.
    fn shortest_cycle(&self, cut: u32) -> Option<Vec<usize>> {
        let mut best: Option<Vec<usize>> = None;
        for e in 0..self.tail.len() {
            if cut >> e & 1 == 1 {
                continue;
            }
            let (from, to) = (self.head[e], self.tail[e]);
            let mut pred: Vec<Option<usize>> = vec![None; self.n];
            let mut seen = vec![false; self.n];
            seen[from] = true;
            let mut queue = VecDeque::from([from]);
            let mut found = false;
            while let Some(v) = queue.pop_front() {
                if v == to {
                    found = true;
                    break;
                }
                for &a in &self.out[v] {
                    let w = self.head[a];
                    if cut >> a & 1 == 0 && a != e && !seen[w] {
                        seen[w] = true;
                        pred[w] = Some(a);
                        queue.push_back(w);
                    }
                }
            }
            if !found {
                continue;
            }
            let mut cycle = vec![e];
            let mut x = to;
            while x != from {
                let a = pred[x].unwrap();
                cycle.push(a);
                x = self.tail[a];
            }
            if best.as_ref().is_none_or(|b| cycle.len() < b.len()) {
                best = Some(cycle);
            }
        }
        best
    }
}

/// Exhaustive minimum-weight feedback arc set search.
///
/// Best-first search over partial solutions: a state is a set of cut arcs plus
/// a set of arcs that may no longer be cut; it is expanded on a shortest
/// remaining cycle `a_1..a_k` into children "cut `a_i`, forbid `a_1..a_{i-1}`".
/// Every minimal feedback set is reached exactly once and states pop in order
/// of weight, so the first acyclic state is optimal.
pub fn brute_force_fasp(g: &WeightedMultiDigraph) -> Result<OracleResult> {
    if g.num_arcs() > MAX_FAS_ARCS {
        return Err(Error::TooLarge {
            what: "oracle arc count",
            size: g.num_arcs(),
            limit: MAX_FAS_ARCS,
        });
    }
    let t = Topology::new(g);
    let b = Bits::new(&t);
    let mut heap = BinaryHeap::from([Reverse((0 as Weight, 0u32, 0u32))]);
    let mut optimum: Option<Weight> = None;
    let mut sets = Vec::new();
    while let Some(Reverse((w, cut, forbidden))) = heap.pop() {
        if optimum.is_some_and(|o| w > o) {
            break;
        }
        match b.shortest_cycle(cut) {
            None => {
                optimum = Some(w);
                let ids = (0..t.m()).filter(|&a| cut >> a & 1 == 1).map(|a| t.ids[a]);
                sets.push(ArcSet::new(g, ids)?);
            }
            Some(cycle) => {
                let mut forb = forbidden;
                for &a in &cycle {
                    if forb >> a & 1 == 0 {
                        heap.push(Reverse((w + b.weight[a], cut | 1 << a, forb)));
                    }
                    forb |= 1 << a;
                }
            }
        }
    }
    Ok(OracleResult {
        optimum: optimum.expect("cutting every arc is always feasible"),
        all_optimal_sets: sets,
    })
}

/// Optimal feedback length by exhaustion.
pub fn fasp_optimum(g: &WeightedMultiDigraph) -> Result<Weight> {
    brute_force_fasp(g).map(|r| r.optimum)
}

/// Exhaustive minimum-weight feedback vertex set search over all vertex
/// subsets.
pub fn brute_force_fvsp(g: &VertexWeightedDigraph) -> Result<VertexOracleResult> {
    let n = g.num_vertices();
    if n > MAX_FVS_VERTICES {
        return Err(Error::TooLarge {
            what: "oracle vertex count",
            size: n,
            limit: MAX_FVS_VERTICES,
        });
    }
    let vs: Vec<VertexId> = g.vertices().collect();
    let mut optimum = Weight::MAX;
    let mut sets = Vec::new();
    for bits in 0u32..(1 << n) {
        let chosen: BTreeSet<VertexId> = (0..n).filter(|i| bits >> i & 1 == 1).map(|i| vs[i]).collect();
        let w = g.weight_of(&chosen)?;
        if w > optimum || !g.is_feedback_set(&chosen) {
            continue;
        }
        if w < optimum {
            optimum = w;
            sets.clear();
        }
        sets.push(chosen);
    }
    Ok(VertexOracleResult {
        optimum,
        all_optimal_sets: sets,
    })
}

/// All elementary cycles (Johnson's algorithm), each as the list of its arc
/// ids in traversal order starting from its smallest vertex. Parallel arcs
/// give distinct cycles. Fails once more than `budget` cycles are found.
pub fn enumerate_elementary_cycles(g: &WeightedMultiDigraph, budget: usize) -> Result<Vec<Vec<ArcId>>> {
    let t = Topology::new(g);
    let mut out = Vec::new();
    for s in 0..t.n() {
        // subgraph induced on vertices >= s, restricted to the SCC of s
        let mut mask = t.empty_mask();
        for a in 0..t.m() {
            if t.tail[a] >= s && t.head[a] >= s {
                mask.insert(a);
            }
        }
        let comp = topo::scc(&t, &mask);
        let mut inside = t.empty_mask();
        for a in mask.ones() {
            if comp[t.tail[a]] == comp[s] && comp[t.head[a]] == comp[s] {
                inside.insert(a);
            }
        }
        if inside.is_clear() {
            continue;
        }
        let mut j = Johnson {
            t: &t,
            mask: &inside,
            s,
            blocked: vec![false; t.n()],
            b: vec![Vec::new(); t.n()],
            path: Vec::new(),
            out: &mut out,
            budget,
        };
        j.circuit(s)?;
    }
    Ok(out
        .into_iter()
        .map(|c| c.into_iter().map(|a| t.ids[a]).collect())
        .collect())
}

struct Johnson<'a> {
    t: &'a Topology,
    mask: &'a topo::Mask,
    s: usize,
    blocked: Vec<bool>,
    b: Vec<Vec<usize>>,
    path: Vec<usize>,
    out: &'a mut Vec<Vec<usize>>,
    budget: usize,
}

impl Johnson<'_> {
    fn unblock(&mut self, v: usize) {
        self.blocked[v] = false;
        while let Some(w) = self.b[v].pop() {
            if self.blocked[w] {
                self.unblock(w);
            }
        }
    }

    fn circuit(&mut self, v: usize) -> Result<bool> {
        let mut found = false;
        self.blocked[v] = true;
        for &a in &self.t.out[v] {
            if !self.mask.contains(a) {
                continue;
            }
            let w = self.t.head[a];
            self.path.push(a);
            if w == self.s {
                if self.out.len() >= self.budget {
                    return Err(Error::BudgetExceeded {
                        what: "cycle enumeration",
                        limit: self.budget as u64,
                    });
                }
                self.out.push(self.path.clone());
                found = true;
            } else if !self.blocked[w] && self.circuit(w)? {
                found = true;
            }
            self.path.pop();
        }
        if found {
            self.unblock(v);
        } else {
            for &a in &self.t.out[v] {
                if self.mask.contains(a) {
                    let w = self.t.head[a];
                    if !self.b[w].contains(&v) {
                        self.b[w].push(v);
                    }
                }
            }
        }
        Ok(found)
    }
}

/// All simple cycles (closed trails: arcs distinct, vertices may repeat),
/// each as an arc sequence starting with its smallest arc id.
pub fn enumerate_simple_cycles(g: &WeightedMultiDigraph, budget: usize) -> Result<Vec<Vec<ArcId>>> {
    let t = Topology::new(g);
    let mut out = Vec::new();
    fn extend(
        t: &Topology,
        start: usize,
        v: usize,
        used: &mut Vec<bool>,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        budget: usize,
    ) -> Result<()> {
        for &a in &t.out[v] {
            if a <= start || used[a] {
                continue;
            }
            used[a] = true;
            path.push(a);
            if t.head[a] == t.tail[start] {
                if out.len() >= budget {
                    return Err(Error::BudgetExceeded {
                        what: "simple cycle enumeration",
                        limit: budget as u64,
                    });
                }
                out.push(path.clone());
            }
            extend(t, start, t.head[a], used, path, out, budget)?;
            path.pop();
            used[a] = false;
        }
        Ok(())
    }
    let mut used = vec![false; t.m()];
    for start in 0..t.m() {
        let mut path = vec![start];
        extend(&t, start, t.head[start], &mut used, &mut path, &mut out, budget)?;
    }
    Ok(out
        .into_iter()
        .map(|c| c.into_iter().map(|a| t.ids[a]).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn two_cycle_picks_lighter_arc() {
        let g = WeightedMultiDigraph::from_arcs([(1, 2, 1), (2, 1, 2)]).unwrap();
        let r = brute_force_fasp(&g).unwrap();
        assert_eq!(r.optimum, 1);
        assert_eq!(r.all_optimal_sets, vec![ArcSet::new(&g, [0]).unwrap()]);
    }

    #[test]
    fn d3_needs_three_arcs() {
        let r = brute_force_fasp(&fixtures::d3()).unwrap();
        assert_eq!(r.optimum, 3);
        // one arc per 2-cycle, 2^3 choices, minus the two that keep a 3-cycle
        assert!(r.all_optimal_sets.iter().all(|s| s.len() == 3));
        assert_eq!(r.all_optimal_sets.len(), 6);
    }

    #[test]
    fn guards() {
        let arcs = (0..21).map(|i| (i, i + 1, 1));
        let g = WeightedMultiDigraph::from_arcs(arcs).unwrap();
        assert!(matches!(brute_force_fasp(&g), Err(Error::TooLarge { .. })));
        assert!(enumerate_elementary_cycles(&fixtures::d3(), 2).is_err());
    }

    #[test]
    fn cycle_counts() {
        let tri = WeightedMultiDigraph::from_arcs([(1, 2, 1), (2, 3, 1), (3, 1, 1)]).unwrap();
        assert_eq!(enumerate_elementary_cycles(&tri, 10).unwrap(), vec![vec![0, 1, 2]]);
        let d3 = enumerate_elementary_cycles(&fixtures::d3(), 100).unwrap();
        assert_eq!(d3.len(), 5);
        assert_eq!(d3.iter().filter(|c| c.len() == 2).count(), 3);
        for d in 1..=4 {
            let g = fixtures::diamond_chain(d);
            let n = enumerate_elementary_cycles(&g, 1000).unwrap().len();
            assert_eq!(n, 1 << d);
        }
    }

    #[test]
    fn parallel_arcs_give_distinct_cycles() {
        let g = WeightedMultiDigraph::from_arcs([(1, 2, 1), (1, 2, 1), (2, 1, 1)]).unwrap();
        assert_eq!(enumerate_elementary_cycles(&g, 10).unwrap().len(), 2);
        // closed trails: 1-2-1 twice, no trail uses both parallels
        assert_eq!(enumerate_simple_cycles(&g, 10).unwrap().len(), 2);
    }

    #[test]
    fn fvs_small_cases() {
        let two = VertexWeightedDigraph {
            graph: WeightedMultiDigraph::from_arcs([(1, 2, 1), (2, 1, 1)]).unwrap(),
            vertex_weight: [(1, 1), (2, 2)].into(),
        };
        assert_eq!(brute_force_fvsp(&two).unwrap().optimum, 1);
        let tri = VertexWeightedDigraph {
            graph: WeightedMultiDigraph::from_arcs([(1, 2, 1), (2, 3, 1), (3, 1, 1)]).unwrap(),
            vertex_weight: [(1, 1), (2, 1), (3, 1)].into(),
        };
        let r = brute_force_fvsp(&tri).unwrap();
        assert_eq!(r.optimum, 1);
        assert_eq!(r.all_optimal_sets.len(), 3);
    }
}
