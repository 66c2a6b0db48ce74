//! Reference instances: the worked examples (parallel arcs, cactus,
//! relative weights, D_3), the diamond chain, path-like cycle chains and
//! seeded random generators.
//!
//! Vertices are numbered from 1 so the graphs match the files under
//! `fixtures/` line by line.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use rand::Rng;

use crate::graph::{ArcId, VertexWeightedDigraph, Weight, WeightedMultiDigraph};

/// A graph whose arcs carry the names used in the worked examples.
#[derive(Clone, Debug)]
pub struct Named {
    pub graph: WeightedMultiDigraph,
    names: Vec<&'static str>,
}

impl Named {
    fn build(arcs: &[(&'static str, usize, usize, Weight)]) -> Self {
        let graph = WeightedMultiDigraph::from_arcs(arcs.iter().map(|&(_, u, v, w)| (u, v, w)))
            .expect("fixture arcs are valid");
        Named {
            graph,
            names: arcs.iter().map(|a| a.0).collect(),
        }
    }

    /// Arc id of the arc called `name`.
    pub fn arc(&self, name: &str) -> ArcId {
        self.names
            .iter()
            .position(|&n| n == name)
            .unwrap_or_else(|| panic!("no arc named {name}"))
    }

    pub fn arcs(&self, names: &[&str]) -> Vec<ArcId> {
        let mut ids: Vec<ArcId> = names.iter().map(|n| self.arc(n)).collect();
        ids.sort_unstable();
        ids
    }

    pub fn name(&self, id: ArcId) -> &'static str {
        self.names[id]
    }

    /// Arc names in id order.
    pub fn names(&self) -> &[&'static str] {
        &self.names
    }
}

/// Parallel arcs and a simple non-elementary cycle: vertices a=1, b=2, c=3. `{e,f,i}`, `{f,h}` and `{h,g}` are
/// elementary cycles and `{e,f,g,h,i}` is a simple, non-elementary cycle.
/// Since `f` and `g` both run against `h` they are parallel, so `{e,g,i}` is
/// elementary as well.
pub fn parallel_example() -> Named {
    Named::build(&[
        ("e", 2, 3, 1),
        ("f", 1, 2, 1),
        ("g", 1, 2, 1),
        ("h", 2, 1, 1),
        ("i", 3, 1, 1),
    ])
}

/// A cactus-like graph rebuilt from its list of isolated cycles
/// `{e1,f1}, {e2,f3}, {e3,f3}, {e4,f4}, {e5,e6,e7,f5,f4}, {e5,e8,e9,e7,f5,f4}`.
/// No weights are given for it, so the weights here are chosen.
pub fn cactus() -> Named {
    Named::build(&[
        ("f1", 1, 2, 2),
        ("e1", 2, 1, 3),
        ("e2", 2, 3, 1),
        ("e3", 2, 3, 2),
        ("f3", 3, 2, 4),
        ("f4", 3, 4, 5),
        ("e4", 4, 3, 2),
        ("e5", 4, 5, 3),
        ("e6", 5, 6, 1),
        ("e7", 6, 7, 4),
        ("f5", 7, 3, 6),
        ("e8", 5, 8, 2),
        ("e9", 8, 6, 3),
    ])
}

/// The relative-weight example, vertices x=1, y=2,
/// z=3, w=4 and cycles `c3 = {e3,d3,e2}`, `c2 = {e3,e1,d2}`, `c1 = {e1,d1}`.
/// Weights satisfy every number quoted for the example: ω(e1) = 5,
/// σ(e1) = 5 − 2 = 3, the best solutions with e3 and with d3 weigh 8 and 7,
/// and the subproblem difference (6 − 3) − (2 − 0) = 1.
pub fn relative_weight_example() -> Named {
    Named::build(&[
        ("e3", 1, 2, 6),
        ("d3", 2, 3, 2),
        ("e2", 3, 1, 3),
        ("e1", 2, 4, 5),
        ("d2", 4, 1, 4),
        ("d1", 4, 2, 2),
    ])
}

/// The directed clique on three vertices with unit weights.
pub fn d3() -> WeightedMultiDigraph {
    WeightedMultiDigraph::from_arcs([(1, 2, 1), (2, 1, 1), (2, 3, 1), (3, 2, 1), (3, 1, 1), (1, 3, 1)]).unwrap()
}

/// `d` diamonds `s → {a, b} → t` joined in a ring by spine arcs `t → s'`;
/// unit weights, `|E| = 5d`, `|V| = 4d`, `2^d` elementary cycles. The spine
/// arc of diamond `i` has id `5i + 4`.
pub fn diamond_chain(d: usize) -> WeightedMultiDigraph {
    assert!(d >= 1);
    let mut g = WeightedMultiDigraph::new();
    for i in 0..d {
        let s = 4 * i + 1;
        let (a, b, t) = (s + 1, s + 2, s + 3);
        let next = 4 * ((i + 1) % d) + 1;
        for (u, v) in [(s, a), (s, b), (a, t), (b, t), (t, next)] {
            g.add_arc(u, v, 1).unwrap();
        }
    }
    g
}

/// `k` elementary cycles arranged path-like: consecutive cycles share exactly
/// one arc and no other pair of cycles meets. Unit weights.
pub fn path_chain(k: usize) -> WeightedMultiDigraph {
    assert!(k >= 1);
    if k == 1 {
        return WeightedMultiDigraph::from_arcs([(1, 2, 1), (2, 3, 1), (3, 1, 1)]).unwrap();
    }
    // shared arc s_i = x_i -> y_i with x_i = 2i+1, y_i = 2i+2
    let x = |i: usize| 2 * i + 1;
    let y = |i: usize| 2 * i + 2;
    let shared = k - 1;
    let mut g = WeightedMultiDigraph::new();
    for i in 0..shared {
        g.add_arc(x(i), y(i), 1).unwrap();
    }
    // first and last cycle close through an extra vertex each
    let w0 = 2 * shared + 1;
    let w1 = w0 + 1;
    g.add_arc(y(0), w0, 1).unwrap();
    g.add_arc(w0, x(0), 1).unwrap();
    g.add_arc(y(shared - 1), w1, 1).unwrap();
    g.add_arc(w1, x(shared - 1), 1).unwrap();
    // middle cycles s_{i-1}, y_{i-1} -> x_i, s_i, y_i -> x_{i-1}
    for i in 1..shared {
        g.add_arc(y(i - 1), x(i), 1).unwrap();
        g.add_arc(y(i), x(i - 1), 1).unwrap();
    }
    g
}

/// Shape of a random instance.
#[derive(Clone, Debug)]
pub struct RandomSpec {
    pub vertices: RangeInclusive<usize>,
    pub arcs: RangeInclusive<usize>,
    pub weights: RangeInclusive<Weight>,
}

impl RandomSpec {
    /// `|V| ∈ [3,7]`, `|E| ∈ [4,12]`, weights in `[1,9]`.
    pub fn small() -> Self {
        RandomSpec {
            vertices: 3..=7,
            arcs: 4..=12,
            weights: 1..=9,
        }
    }

    pub fn with_arcs(mut self, arcs: RangeInclusive<usize>) -> Self {
        self.arcs = arcs;
        self
    }

    pub fn with_weights(mut self, weights: RangeInclusive<Weight>) -> Self {
        self.weights = weights;
        self
    }
}

/// A loop-free multi-digraph with uniformly random arcs (parallel arcs
/// allowed) on vertices `1..=n`.
pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, spec: &RandomSpec) -> WeightedMultiDigraph {
    let n = rng.gen_range(spec.vertices.clone()).max(2);
    let m = rng.gen_range(spec.arcs.clone());
    let mut g = WeightedMultiDigraph::new();
    for v in 1..=n {
        g.add_vertex(v);
    }
    for _ in 0..m {
        let u = rng.gen_range(1..=n);
        let mut v = rng.gen_range(1..n);
        if v >= u {
            v += 1;
        }
        g.add_arc(u, v, rng.gen_range(spec.weights.clone())).unwrap();
    }
    g
}

/// A vertex-weighted digraph on `2..=max_vertices` vertices with no parallel
/// arcs and weights in `[1,9]`.
pub fn random_vertex_weighted<R: Rng + ?Sized>(rng: &mut R, max_vertices: usize) -> VertexWeightedDigraph {
    let n = rng.gen_range(2..=max_vertices.max(2));
    let m = rng.gen_range(n..=(2 * n + 2).min(n * (n - 1)));
    let mut pairs: Vec<(usize, usize)> = (1..=n)
        .flat_map(|u| (1..=n).filter(move |&v| v != u).map(move |v| (u, v)))
        .collect();
    let mut g = WeightedMultiDigraph::new();
    for _ in 0..m {
        let (u, v) = pairs.swap_remove(rng.gen_range(0..pairs.len()));
        g.add_arc(u, v, 1).unwrap();
    }
    let vertex_weight: BTreeMap<usize, Weight> = (1..=n).map(|v| (v, rng.gen_range(1..=9))).collect();
    for &v in vertex_weight.keys() {
        g.add_vertex(v);
    }
    VertexWeightedDigraph {
        graph: g,
        vertex_weight,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::enumerate_elementary_cycles;
    use rand::SeedableRng;

    #[test]
    fn relative_weight_example_has_three_cycles_and_quoted_optimum() {
        let f = relative_weight_example();
        let cycles = enumerate_elementary_cycles(&f.graph, 10).unwrap();
        assert_eq!(cycles.len(), 3);
        let r = crate::oracle::brute_force_fasp(&f.graph).unwrap();
        assert_eq!(r.optimum, 7);
        assert_eq!(r.all_optimal_sets.len(), 1);
        assert_eq!(r.first().to_vec(), f.arcs(&["d3", "e1"]));
    }

    #[test]
    fn cactus_cycles_match_caption() {
        let f = cactus();
        let mut got: Vec<Vec<ArcId>> = enumerate_elementary_cycles(&f.graph, 100)
            .unwrap()
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        got.sort();
        let mut want: Vec<Vec<ArcId>> = [
            &["e1", "f1"][..],
            &["e2", "f3"],
            &["e3", "f3"],
            &["e4", "f4"],
            &["e5", "e6", "e7", "f5", "f4"],
            &["e5", "e8", "e9", "e7", "f5", "f4"],
        ]
        .iter()
        .map(|c| f.arcs(c))
        .collect();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn path_chain_has_k_cycles() {
        for k in 1..=10 {
            let g = path_chain(k);
            let cycles = enumerate_elementary_cycles(&g, 1000).unwrap();
            assert_eq!(cycles.len(), k, "k = {k}");
        }
    }

    #[test]
    fn random_graphs_respect_spec() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let g = random_graph(&mut rng, &RandomSpec::small());
            assert!((4..=12).contains(&g.num_arcs()));
            assert!(g.weighted_arcs().all(|(_, w)| (1..=9).contains(&w)));
            let h = random_vertex_weighted(&mut rng, 6);
            assert!(h.num_vertices() <= 6);
        }
    }
}
