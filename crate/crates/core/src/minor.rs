//! The essential minor: contract branch-free paths (Γ, keeping the lightest
//! arc) and merge parallel arcs (Φ, summing weights) until nothing changes.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{cycle_closure, ArcId, ArcSet, VertexId, Weight, WeightedMultiDigraph};

/// An essential minor (or an intermediate contraction) with its back-map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorTrace {
    /// The minor (C, δ). Arc ids are ids of the origin: a Γ-class keeps the
    /// id of its lightest arc, a Φ-class the smallest id of the class.
    pub minor: WeightedMultiDigraph,
    /// κ: minor arc → the origin arcs it stands for.
    pub kappa: BTreeMap<ArcId, BTreeSet<ArcId>>,
    /// Origin arcs that must be cut regardless of the minor's solution: a
    /// branch-free path that closes on itself becomes a loop, which is cut at
    /// its lightest arc.
    pub forced: ArcSet,
    pub origin: WeightedMultiDigraph,
}

#[derive(Clone, Debug)]
struct WorkArc {
    tail: VertexId,
    head: VertexId,
    weight: Weight,
    kappa: BTreeSet<ArcId>,
}

#[derive(Clone, Debug)]
struct Work {
    arcs: BTreeMap<ArcId, WorkArc>,
    forced: BTreeSet<ArcId>,
}

impl Work {
    fn from_graph(g: &WeightedMultiDigraph) -> Self {
        let arcs = g
            .weighted_arcs()
            .map(|(a, w)| {
                (
                    a.id,
                    WorkArc {
                        tail: a.tail,
                        head: a.head,
                        weight: w,
                        kappa: BTreeSet::from([a.id]),
                    },
                )
            })
            .collect();
        Work {
            arcs,
            forced: BTreeSet::new(),
        }
    }

    fn from_trace(t: &MinorTrace) -> Self {
        let mut w = Work::from_graph(&t.minor);
        for (id, arc) in w.arcs.iter_mut() {
            arc.kappa = t.kappa[id].clone();
        }
        w.forced = t.forced.ids().clone();
        w
    }

    /// Lighter of two arcs, ties to the smaller id.
    fn lighter(&self, a: ArcId, b: ArcId) -> ArcId {
        let (wa, wb) = (self.arcs[&a].weight, self.arcs[&b].weight);
        if (wa, a) <= (wb, b) {
            a
        } else {
            b
        }
    }

    fn gamma(&mut self) -> bool {
        let mut changed = false;
        loop {
            let mut ins: BTreeMap<VertexId, Vec<ArcId>> = BTreeMap::new();
            let mut outs: BTreeMap<VertexId, Vec<ArcId>> = BTreeMap::new();
            for (&id, a) in &self.arcs {
                outs.entry(a.tail).or_default().push(id);
                ins.entry(a.head).or_default().push(id);
            }
            let pick = ins.iter().find_map(|(v, i)| {
                let o = outs.get(v)?;
                (i.len() == 1 && o.len() == 1).then(|| (i[0], o[0]))
            });
            let Some((a, b)) = pick else { break };
            changed = true;
            let keep = self.lighter(a, b);
            let (u, w) = (self.arcs[&a].tail, self.arcs[&b].head);
            let kept = self.arcs[&keep].clone();
            self.arcs.remove(&a);
            self.arcs.remove(&b);
            if u == w {
                self.forced.extend(kept.kappa);
            } else {
                self.arcs.insert(
                    keep,
                    WorkArc {
                        tail: u,
                        head: w,
                        ..kept
                    },
                );
            }
        }
        changed
    }

    fn phi(&mut self) -> bool {
        let mut classes: BTreeMap<(VertexId, VertexId), Vec<ArcId>> = BTreeMap::new();
        for (&id, a) in &self.arcs {
            classes.entry((a.tail, a.head)).or_default().push(id);
        }
        let mut changed = false;
        for ids in classes.values().filter(|ids| ids.len() > 1) {
            changed = true;
            let rep = ids[0];
            for &other in &ids[1..] {
                let gone = self.arcs.remove(&other).unwrap();
                let r = self.arcs.get_mut(&rep).unwrap();
                r.weight += gone.weight;
                r.kappa.extend(gone.kappa);
            }
        }
        changed
    }

    fn finish(self, origin: &WeightedMultiDigraph) -> Result<MinorTrace> {
        let mut minor = WeightedMultiDigraph::new();
        let mut kappa = BTreeMap::new();
        for (id, a) in self.arcs {
            minor.insert_arc(id, a.tail, a.head, a.weight)?;
            kappa.insert(id, a.kappa);
        }
        Ok(MinorTrace {
            minor,
            kappa,
            forced: ArcSet::new(origin, self.forced)?,
            origin: origin.clone(),
        })
    }
}

/// Contracts every vertex with in- and out-degree one, repeatedly.
pub fn contract_gamma(g: &WeightedMultiDigraph) -> Result<MinorTrace> {
    let mut w = Work::from_graph(g);
    w.gamma();
    w.finish(g)
}

/// Collapses each class of parallel arcs into one arc with summed weight.
pub fn merge_phi(t: &MinorTrace) -> Result<MinorTrace> {
    let mut w = Work::from_trace(t);
    w.phi();
    w.finish(&t.origin)
}

/// The essential minor of the cycle closure of `g`.
pub fn essential_minor(g: &WeightedMultiDigraph) -> Result<MinorTrace> {
    let mut w = Work::from_graph(&cycle_closure(g));
    loop {
        let a = w.gamma();
        let b = w.phi();
        if !a && !b {
            break;
        }
    }
    w.finish(g)
}

impl MinorTrace {
    /// Origin arcs standing for the given minor arcs (forced arcs excluded).
    pub fn lift_ids<'a, I>(&self, sol: I) -> Result<BTreeSet<ArcId>>
    where
        I: IntoIterator<Item = &'a ArcId>,
    {
        let mut out = BTreeSet::new();
        for id in sol {
            let k = self.kappa.get(id).ok_or(Error::UnknownArc(*id))?;
            out.extend(k.iter().copied());
        }
        Ok(out)
    }
}

/// Lifts a feedback arc set of the minor to one of the origin: the union of
/// κ over the solution plus the forced arcs. The lifted weight is the minor
/// weight of `sol` plus the forced weight.
pub fn lift_solution(t: &MinorTrace, sol: &BTreeSet<ArcId>) -> Result<ArcSet> {
    let mut ids = t.lift_ids(sol)?;
    ids.extend(t.forced.iter());
    ArcSet::new(&t.origin, ids)
}
