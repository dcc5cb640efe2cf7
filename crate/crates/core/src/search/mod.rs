//! Independent checks of the lower bound `C >= sum(rho) - r`: exhaustive and
//! seeded random scans with a deliberately naive oracle, a tightness probe
//! for the extremal construction, and generators for test instances.

mod generate;
pub mod oracle;
mod scan;
mod tightness;

pub use generate::{
    balanced_instance_generator, random_instance, random_plain_hypergraph, random_weight, stream_rng,
};
pub use scan::{
    exhaustive_bound_scan, random_bound_scan, BoundReport, Mismatch, SearchMode, SearchSpace, Violation,
    WeightScheme, DEFAULT_BUDGET,
};
pub use tightness::{tightness_probe, TightnessRow};
