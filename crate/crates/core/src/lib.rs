//! Exact and heuristic solvers for the weighted feedback arc set problem on
//! directed multigraphs, with reductions to and from feedback vertex sets.
//!
//! The exact path runs in three layers. The essential minor contracts
//! branch-free paths and merges parallel arcs. Resolution then commits arcs
//! whose isolated cycles are optimally cut at the arc itself. What remains is
//! solved by CUT & RESOLVE, which picks per cycle the arc with the best
//! pairwise score computed from relative weights and min cuts.
//!
//! ```
//! use fasolve::{cut_resolve, WeightedMultiDigraph};
//!
//! let g = WeightedMultiDigraph::from_arcs([(1, 2, 3), (2, 3, 1), (3, 1, 2)]).unwrap();
//! let report = cut_resolve(&g).unwrap();
//! assert_eq!(report.weight, 1);
//! assert!(report.certified_optimal);
//! ```

pub mod cycles;
mod engine;
pub mod error;
pub mod fixtures;
pub mod flow;
pub mod graph;
pub mod heuristics;
pub mod io;
pub mod meta;
pub mod minor;
pub mod oracle;
pub mod reductions;
pub mod resolve;
pub mod solver;
mod topo;

pub use cycles::{elementary_subgraph, reachable_subgraph, simple_subgraph, CycleKind, CycleSubgraph};
pub use error::{Error, Result};
pub use flow::{local_fas, min_st_cut, FlowNetwork};
pub use graph::{
    cycle_closure, cycle_space_dim, is_acyclic, line_graph, Arc, ArcId, ArcSet, VertexId, VertexWeightedDigraph,
    Weight, WeightedMultiDigraph,
};
pub use heuristics::{greedy_cut, greedy_cut_resolve, hybrid_strategy, lower_bounds, BoundReport, Effective};
pub use meta::{global_m, meta_graph, MetaGraph, RelativeWeight};
pub use minor::{essential_minor, lift_solution, MinorTrace};
pub use oracle::{brute_force_fasp, brute_force_fvsp, OracleResult};
pub use reductions::{fasp_to_fvsp, fvsp_to_fasp, ReductionTrace};
pub use resolve::{isolated_subgraph, resolve, solve_resolvable, ResolveTrace};
pub use solver::{
    auto, cut, cut_resolve, cut_resolve_with, cut_with, pairwise_score, Bounds, FeedbackReport, Method, SolverConfig,
};
