//! Incremental maximum flow: exact solvers, greedy heuristics, bound checks
//! and instance generators.

pub mod error;
pub mod exact;
pub mod heur;
pub mod instgen;
pub mod netcore;
pub mod subprob;
pub mod theory;
pub mod toolchain;

pub use error::{Error, Result};
pub use exact::{brute_force_permutations, certified_lower_bound, exact_subset_dp, ExactResult};
pub use heur::{
    evaluate_schedule, quickest_increment, quickest_increment_poly, quickest_to_target, quickest_to_ultimate,
    BuildSchedule, Method, SolveReport,
};
pub use netcore::{
    max_flow, max_flow_value, residual_labels, validate_network, Arc, ArcId, ArcKind, ArcSet, FlowResult, Instance,
    Network, NodeId, ResidualLabels,
};
pub use subprob::{c_values, max_val, min_arcs, upper_bound_opt, CValues, MinArcsResult};
pub use toolchain::{bench_run, emit_imfp1, emit_imfp2, BenchConfig, BenchRow};
