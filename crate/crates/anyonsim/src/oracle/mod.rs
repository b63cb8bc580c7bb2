//! Brute-force evaluation of anyonic diagrams in explicit fusion-tree bases.
//!
//! Everything here works on left-nested trees and the elementary moves of
//! [`maps`]: braids, splittings, fusions and pair creation. The closed-form
//! engines elsewhere in the crate are validated against these evaluations.

mod basis;
mod maps;
mod ops;
mod probes;

pub use basis::{BasisRef, DiagramVector, FusionTreeBasis, TreeLabel};
pub use maps::{braid, fuse_leaves, insert_pairs, remove_pairs, split_leaf, transport, Crossing, SparseMap};
pub use ops::{
    crossed_f, full_twist_word, loop_operator, loop_removal_oracle, loop_removal_value, partial_trace_last,
    projector_matrix, pure_braid_matrix, quantum_trace, twist_operator_matrix, CrossedF,
};
pub(crate) use probes::{close as close_twist_loops, extend as open_twist_loops};
pub use probes::{
    enumerate_probe_paths, omega_form_fixed_state, omega_tau_form, oracle_post_states, OracleRun, ORACLE_BUDGET,
};
