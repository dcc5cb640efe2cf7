//! Extremal constructions: the region polynomial `Delta`, the r = 2 base
//! graph, the recursive construction for larger r, and the lift of an
//! ordinary r-graph to an (r+1)-partite one.

mod base;
mod delta;
mod lift;
mod recursive;

pub use base::{matching_complement_graph, BaseLayout, BaseWeights, MatchingArrangement};
pub use delta::{check_pos_region, delta, PosVerdict};
pub use lift::{decaen_lift, PlainHypergraph};
pub use recursive::{
    build_extremal, build_extremal_with, build_tripartite_base, build_tripartite_base_with, ConstructionRecipe,
    LevelRecord, MAX_TRANSVERSALS,
};
