use thiserror::Error;

use crate::io::InstanceError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("expected an {expected}-partite graph, found {found} classes")]
    Shape { expected: usize, found: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("edge {0} is not present in the graph")]
    EdgeNotFound(String),

    #[error("invalid class selector: {0}")]
    InvalidSelector(String),

    #[error("blow-up multiplicities are not integral; minimal valid scale is {minimal}")]
    Scale { minimal: String },

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("infeasible target: {0}")]
    Infeasible(String),

    #[error("no exact rational solution: quadratic {quadratic} has irrational roots and tolerance is 0")]
    Exactness { quadratic: String },

    #[error("density vector outside the construction regime: sum(rho) - r = {excess} < 0")]
    OutOfRegime { excess: String },

    #[error("construction needs {required} transversals at the minimal blow-up scale {scale}; limit is {limit}")]
    ScaleLimit { required: String, scale: String, limit: String },

    #[error("exhaustive search needs {required} instances, budget is {budget}")]
    Budget { required: String, budget: String },

    #[error("k = {k} out of range 0..={max}")]
    KOutOfRange { k: usize, max: usize },

    #[error("tuple size {size} out of range 1..={max}")]
    TupleSize { size: usize, max: usize },

    #[error("invalid partite tuple: {0}")]
    InvalidTuple(String),

    #[error("input r-graph is not simple: {0}")]
    NonSimple(String),

    #[error(transparent)]
    Instance(#[from] InstanceError),
}

pub type Result<T> = std::result::Result<T, Error>;
