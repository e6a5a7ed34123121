//! Exact Euclidean TSP toolkit built around sparse candidate graphs.
//!
//! The pipeline: build a k-nearest-neighbor candidate graph, find any
//! Hamiltonian cycle in it, polish that tour with sparse 2-opt/Or-opt,
//! then prove optimality with a warm-started 1-tree branch-and-bound.
//! Each stage is usable on its own; [`pipeline`] wires them together and
//! also provides the two baseline modes used for comparisons.

pub mod error;
pub mod exact;
pub mod gen;
pub mod hcp;
pub mod improve;
pub mod instance;
pub mod onetree;
pub mod oracle;
pub mod pipeline;
pub mod sparse;
pub mod tour;
pub mod tsplib;

pub use error::{Error, Result};
pub use exact::{
    branch_and_bound, branch_and_bound_with, BnbConfig, BoundState, ExactStatus, OptimalResult,
};
pub use gen::{gen_two_cluster_instance, gen_uniform_instance, DEFAULT_BOX};
pub use hcp::{
    find_hamiltonian_cycle, plant_hamiltonian_graph, prune_forced_edges, validate_hcp_tour,
    verify_certificate, HcpOutcome, InfeasibilityCertificate, PruneResult,
};
pub use improve::{improve_until_stable, or_opt_pass, two_opt_pass, ImprovementResult};
pub use instance::{euc2d_distance, EuclideanInstance, Point, Vertex};
pub use onetree::{one_tree_bound, AscentSchedule, EdgeConstraints, OneTree};
pub use pipeline::{
    solve, solve_baseline, solve_hybrid, solve_sparse_nowarm, Certification, PipelineConfig,
    SolveMode, SolveReport, SolveStatus, StageTimings,
};
pub use oracle::{dp_oracle_graph, dp_oracle_instance, is_hamiltonian_exhaustive, OracleSolution};
pub use sparse::{
    build_knn_candidates, complete_with_penalty, parse_edge_list, repair_min_degree,
    sparsification_stats, write_edge_list, PenaltyCompletion, SparseGraph, SparsifyStats,
};
pub use tour::{nearest_neighbor_tour, Tour};
