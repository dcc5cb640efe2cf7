//! Partite Turán densities for the complete r-graph on r+1 vertices.
//!
//! Weighted (r+1)-partite r-uniform hypergraphs, their density vectors and
//! clique densities, the extremal constructions meeting the lower bound
//! `C(G) >= sum(rho) - r`, the lift of an r-graph to a strictly balanced
//! (r+1)-partite cover, codegree balance checks, and brute-force oracles that
//! cross-check all of it.

pub mod blowup;
pub mod clique;
pub mod degree;
pub mod error;
pub mod extremal;
pub mod hypergraph;
pub mod io;
pub mod rational;
pub mod search;

pub use error::{Error, Result};
pub use hypergraph::{ClassSubsetSelector, DensityVector, Edge, PartiteHypergraph, VertexId};
pub use rational::Rational;
