//! Exact optimization toolkit for conservative undirected graphs:
//! T-joins and conservative shortest paths, parity-constrained paths,
//! hardness gadget reductions with witness lifting, seeded instance
//! generators, and brute-force oracles that certify everything at small
//! scale.

pub mod error;
pub mod gen;
pub mod graph;
pub mod instance;
pub mod matching;
pub mod oracle;
pub mod parity;
pub mod reductions;
pub mod tjoin;

pub use error::{Error, Result};
pub use gen::{gen_bfp, gen_conservative, gen_matching_negatives, GenSpec};
pub use graph::{
    decompose_even_subgraph, is_cycle, is_simple_path, is_tjoin, Arc, ArcId, Digraph, Edge,
    EdgeId, EdgeSet, TerminalSet, UndirectedGraph, VertexId, Weight,
};
pub use instance::{
    verify_witness, ProblemInstance, ProblemKind, ReducedInstance, ReductionKind, Witness,
    WitnessMap,
};
pub use matching::{min_weight_perfect_matching, Matching, MatchingProblem};
pub use parity::{shortest_parity_path_nonneg, Parity, ParityPathQuery};
pub use reductions::{
    lift_disp_to_bfp, lift_motj_nonneg, lift_socp_to_bfp, lift_sop_to_socp, lift_sop_to_sp,
    min_odd_tjoin, motj_conservative_zero_to_nonneg, negatives_form_matching,
    odd_join_to_odd_cycle, reduce_bfp_to_disp, reduce_bfp_to_socp, reduce_socp_to_sop,
    reduce_socp_to_sop_split, reduce_sp_to_sop, soc_via_socp,
};
pub use oracle::{
    bf_bfp, bf_disp, bf_min_cycle, bf_min_odd_path, bf_min_path, bf_motj, DispWitness,
    ParityFilter, SearchBudget,
};
pub use tjoin::{
    is_conservative, min_tjoin, min_tjoin_nonneg, peel_minimal_join,
    shortest_path_conservative, TJoinResult,
};
