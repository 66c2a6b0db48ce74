//! Exact feedback lengths and marginal costs by the Bellman decomposition.
//!
//! For an arc `e` of a graph `K` the marginal `Ω(K) − Ω(K ∖ e)` is the
//! optimum of a cut problem on the paths `head(e) → tail(e)` (the arcs of
//! `G_el(e) ∖ e`) with relative weights σ. The rest `R = G_o(K ∖ e)` splits into
//! arc-connected cycle components `Q`. An arc `h` of `Q` on such a path is
//! sensitive to `e`; cutting it while solving `Q` optimally costs
//! `σ(h) = ω(h) − (Ω(Q) − Ω(Q ∖ h))` extra. When a component carries several
//! sensitive arcs their costs are not additive, so the cut problem branches
//! over which of them are cut. Path arcs on no cycle of `R` keep σ = ω.
//!
//! `Ω(K)` follows from the marginals: every feedback set cuts some arc of a
//! cycle `c`, so `Ω(K) = min_{k ∈ c} ω(k) + Ω(K ∖ k)` and the minimizing `k`
//! is the one with the smallest `ω(k) − marginal(K, k)`.

use std::collections::HashMap;

use crate::cycles::{cycle_components, el_mask};
use crate::error::{Error, Result};
use crate::flow::{min_cut, INFINITE};
use crate::graph::Weight;
use crate::topo::{self, Mask, Topology};

/// Default cap on the number of branches of a single marginal evaluation.
pub const DEFAULT_BRANCH_LIMIT: u64 = 1 << 16;

/// Cycle component of `R` with several sensitive arcs.
#[derive(Clone, Debug)]
pub(crate) struct Overlap {
    pub attachments: Vec<usize>,
    /// For each subset `Y` of the attachments (bit `i` = attachment `i`):
    /// `ω(Y) + Ω(Q ∖ Y) − Ω(Q)`.
    pub costs: Vec<Weight>,
}

/// The cut problem behind one marginal.
#[derive(Clone, Debug)]
pub(crate) struct Relative {
    /// Arcs of the path network, `G_el(e) ∖ e` within `K`.
    pub paths: Mask,
    /// σ for path arcs outside overlaps (ω for arcs on no cycle of `R`).
    pub sigma: Vec<(usize, Weight)>,
    pub overlaps: Vec<Overlap>,
    /// `min(ω(e), Ω(paths, σ))` = `Ω(K) − Ω(K ∖ e)`.
    pub value: Weight,
}

pub(crate) struct Engine<'t> {
    pub t: &'t Topology,
    omega: HashMap<Mask, Weight>,
    marginal: HashMap<(Mask, usize), Weight>,
    components: HashMap<Mask, Vec<Mask>>,
    el: HashMap<(Mask, usize), Mask>,
    branch_limit: u64,
    pub evaluations: u64,
}

impl<'t> Engine<'t> {
    pub fn new(t: &'t Topology) -> Self {
        Engine {
            t,
            omega: HashMap::new(),
            marginal: HashMap::new(),
            components: HashMap::new(),
            el: HashMap::new(),
            branch_limit: DEFAULT_BRANCH_LIMIT,
            evaluations: 0,
        }
    }

    pub fn with_branch_limit(mut self, limit: u64) -> Self {
        self.branch_limit = limit;
        self
    }

    pub fn el(&mut self, mask: &Mask, e: usize) -> Mask {
        let key = (mask.clone(), e);
        if let Some(m) = self.el.get(&key) {
            return m.clone();
        }
        let m = el_mask(self.t, mask, e);
        self.el.insert(key, m.clone());
        m
    }

    fn components(&mut self, closed: &Mask) -> Vec<Mask> {
        if let Some(c) = self.components.get(closed) {
            return c.clone();
        }
        let c = cycle_components(self.t, closed);
        self.components.insert(closed.clone(), c.clone());
        c
    }

    /// Ω of the arcs in `mask`.
    pub fn omega(&mut self, mask: &Mask) -> Result<Weight> {
        let closed = topo::closure(self.t, mask);
        let mut total = 0;
        for q in self.components(&closed) {
            total += self.omega_component(&q)?;
        }
        Ok(total)
    }

    fn single_cycle(&self, q: &Mask) -> bool {
        let mut indeg = vec![0u8; self.t.n()];
        let mut outdeg = vec![0u8; self.t.n()];
        for a in q.ones() {
            let (u, v) = (self.t.tail[a], self.t.head[a]);
            outdeg[u] = outdeg[u].saturating_add(1);
            indeg[v] = indeg[v].saturating_add(1);
        }
        indeg.iter().zip(&outdeg).all(|(&i, &o)| i == o && i <= 1)
    }

    fn omega_component(&mut self, q: &Mask) -> Result<Weight> {
        if let Some(&w) = self.omega.get(q) {
            return Ok(w);
        }
        let w = if self.single_cycle(q) {
            q.ones().map(|a| self.t.weight[a]).min().unwrap_or(0)
        } else {
            let cycle = topo::first_cycle(self.t, q).expect("component has a cycle");
            let k = self.best_arc(q, &cycle)?;
            let mut rest = q.clone();
            rest.set(k, false);
            self.t.weight[k] + self.omega(&rest)?
        };
        self.omega.insert(q.clone(), w);
        Ok(w)
    }

    /// Arc of `cycle` minimizing `ω(k) + Ω(K ∖ k)`; ties go to the smaller
    /// position.
    pub fn best_arc(&mut self, mask: &Mask, cycle: &[usize]) -> Result<usize> {
        let mut best: Option<(Weight, usize)> = None;
        let mut arcs = cycle.to_vec();
        arcs.sort_unstable();
        for k in arcs {
            let cost = self.t.weight[k] - self.marginal(mask, k)?;
            if best.is_none_or(|(c, _)| cost < c) {
                best = Some((cost, k));
            }
        }
        Ok(best.expect("cycle is non-empty").1)
    }

    /// `Ω(K) − Ω(K ∖ e)` for `K = mask`.
    pub fn marginal(&mut self, mask: &Mask, e: usize) -> Result<Weight> {
        let closed = topo::closure(self.t, mask);
        if !closed.contains(e) {
            return Ok(0);
        }
        let key = (closed, e);
        if let Some(&v) = self.marginal.get(&key) {
            return Ok(v);
        }
        let v = self.relative(&key.0, e)?.value;
        self.marginal.insert(key, v);
        Ok(v)
    }

    /// The relative-weight cut problem for anchor `e` in `mask`.
    pub fn relative(&mut self, mask: &Mask, e: usize) -> Result<Relative> {
        self.evaluations += 1;
        let t = self.t;
        let closed = topo::closure(t, mask);
        let mut paths = self.el(&closed, e);
        paths.set(e, false);
        let mut rel = Relative {
            paths: paths.clone(),
            sigma: Vec::new(),
            overlaps: Vec::new(),
            value: 0,
        };
        if paths.is_clear() {
            return Ok(rel);
        }

        let mut rest = closed.clone();
        rest.set(e, false);
        let rest = topo::closure(t, &rest);
        let mut in_component = t.empty_mask();
        for q in self.components(&rest) {
            in_component.union_with(&q);
            let mut att = q.clone();
            att.intersect_with(&paths);
            let attachments: Vec<usize> = att.ones().collect();
            match attachments.len() {
                0 => {}
                1 => {
                    let h = attachments[0];
                    let sigma = t.weight[h] - self.marginal(&q, h)?;
                    rel.sigma.push((h, sigma));
                }
                n => {
                    if n >= 63 {
                        return Err(self.budget_error());
                    }
                    let base = self.omega_component(&q)?;
                    let mut costs = Vec::with_capacity(1 << n);
                    for bits in 0u64..(1 << n) {
                        let mut without = q.clone();
                        let mut w = 0;
                        for (i, &h) in attachments.iter().enumerate() {
                            if bits >> i & 1 == 1 {
                                without.set(h, false);
                                w += t.weight[h];
                            }
                        }
                        costs.push(w + self.omega(&without)? - base);
                    }
                    rel.overlaps.push(Overlap { attachments, costs });
                }
            }
        }
        for a in paths.ones() {
            if !in_component.contains(a) {
                rel.sigma.push((a, t.weight[a]));
            }
        }
        rel.sigma.sort_unstable();

        let combos: u64 = rel
            .overlaps
            .iter()
            .map(|o| 1u64 << o.attachments.len())
            .try_fold(1u64, |acc, x| acc.checked_mul(x))
            .filter(|&c| c <= self.branch_limit)
            .ok_or_else(|| self.budget_error())?;

        let mut cap = vec![0u128; t.m()];
        for &(a, s) in &rel.sigma {
            cap[a] = u128::from(s);
        }
        let mut best = t.weight[e];
        let mut choice = vec![0usize; rel.overlaps.len()];
        for _ in 0..combos {
            let mut offset: Weight = 0;
            for (o, &bits) in rel.overlaps.iter().zip(&choice) {
                offset += o.costs[bits];
                for (i, &h) in o.attachments.iter().enumerate() {
                    cap[h] = if bits >> i & 1 == 1 { 0 } else { INFINITE };
                }
            }
            if offset < best {
                let (value, _) = min_cut(t, &paths, t.head[e], t.tail[e], |a| cap[a]);
                let total = u128::from(offset) + value;
                if total < u128::from(best) {
                    best = total as Weight;
                }
            }
            // advance the mixed-radix counter
            for (slot, o) in choice.iter_mut().zip(&rel.overlaps) {
                *slot += 1;
                if *slot < 1 << o.attachments.len() {
                    break;
                }
                *slot = 0;
            }
        }
        rel.value = best;
        Ok(rel)
    }

    fn budget_error(&self) -> Error {
        Error::BudgetExceeded {
            what: "relative weight branches",
            limit: self.branch_limit,
        }
    }

    /// `s(e, h) = (ω(e) − marginal(K∖h, e)) − (ω(h) − marginal(K∖e, h))`,
    /// which equals `(ω(e) + Ω(K∖e)) − (ω(h) + Ω(K∖h))`.
    pub fn pairwise_score(&mut self, mask: &Mask, e: usize, h: usize) -> Result<i64> {
        let mut without_h = mask.clone();
        without_h.set(h, false);
        let mut without_e = mask.clone();
        without_e.set(e, false);
        let left = self.t.weight[e] as i64 - self.marginal(&without_h, e)? as i64;
        let right = self.t.weight[h] as i64 - self.marginal(&without_e, h)? as i64;
        Ok(left - right)
    }

    /// The minimum of `cycle` under the pairwise-score preorder; ties keep
    /// the smaller arc position.
    pub fn select(&mut self, mask: &Mask, cycle: &[usize]) -> Result<usize> {
        let mut arcs = cycle.to_vec();
        arcs.sort_unstable();
        let mut k = arcs[0];
        for &h in &arcs[1..] {
            if self.pairwise_score(mask, h, k)? < 0 {
                k = h;
            }
        }
        Ok(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::WeightedMultiDigraph;
    use crate::oracle::fasp_optimum;

    fn check_all_marginals(g: &WeightedMultiDigraph) {
        let t = g.topology();
        let mut eng = Engine::new(&t);
        let full = t.full_mask();
        let omega = fasp_optimum(g).unwrap();
        assert_eq!(eng.omega(&full).unwrap(), omega);
        for e in 0..t.m() {
            let without = g.without_arcs(&[t.ids[e]]);
            let want = omega - fasp_optimum(&without).unwrap();
            assert_eq!(eng.marginal(&full, e).unwrap(), want, "arc {e}");
        }
    }

    #[test]
    fn relative_weight_example_marginals_and_score() {
        let f = fixtures::relative_weight_example();
        check_all_marginals(&f.graph);
        let t = f.graph.topology();
        let mut eng = Engine::new(&t);
        let full = t.full_mask();
        let (e3, d3) = (f.arc("e3"), f.arc("d3"));
        assert_eq!(eng.pairwise_score(&full, e3, d3).unwrap(), 1);
        let mut no_d3 = full.clone();
        no_d3.set(d3, false);
        let rel = eng.relative(&no_d3, e3).unwrap();
        assert_eq!(rel.value, 3);
        let e1 = f.arc("e1");
        assert!(rel.sigma.contains(&(e1, 3)));
    }

    #[test]
    fn d3_needs_branching() {
        let g = fixtures::d3();
        check_all_marginals(&g);
        let t = g.topology();
        let mut eng = Engine::new(&t);
        let rel = eng.relative(&t.full_mask(), 0).unwrap();
        assert_eq!(rel.overlaps.len(), 1);
    }

    #[test]
    fn branch_limit_is_enforced() {
        let g = fixtures::d3();
        let t = g.topology();
        let mut eng = Engine::new(&t).with_branch_limit(2);
        assert!(matches!(eng.omega(&t.full_mask()), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn fixtures_match_oracle() {
        check_all_marginals(&fixtures::cactus().graph);
        check_all_marginals(&fixtures::parallel_example().graph);
        check_all_marginals(&fixtures::diamond_chain(2));
        check_all_marginals(&fixtures::path_chain(4));
    }
}
