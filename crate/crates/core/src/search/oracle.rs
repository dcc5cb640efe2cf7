//! Deliberately naive reference implementations.
//!
//! Nothing here uses the bitset index or the integer-scaled weights of the
//! main engine: every transversal is visited, every r-subset is looked up in
//! the sorted edge list, and weights are multiplied as rationals. Slow, but
//! an independent second route to the same numbers.

use num_traits::{One, Zero};

use crate::error::Result;
use crate::hypergraph::{PartiteHypergraph, VertexId};
use crate::rational::Rational;

fn all_transversals(g: &PartiteHypergraph) -> Vec<Vec<VertexId>> {
    let mut out: Vec<Vec<VertexId>> = vec![Vec::new()];
    for (c, ws) in g.classes().iter().enumerate() {
        let mut next = Vec::with_capacity(out.len() * ws.len());
        for partial in &out {
            for l in 0..ws.len() {
                let mut t = partial.clone();
                t.push(VertexId::new(c, l));
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// Density vector from rational edge weights summed one edge at a time.
pub fn naive_density_vector(g: &PartiteHypergraph) -> Result<Vec<Rational>> {
    g.require_transversal_shape()?;
    let t = g.num_classes();
    let mut rho = Vec::with_capacity(t);
    for i in 0..t {
        let mut mass = Rational::zero();
        for e in g.edges() {
            if !e.touches_class(i) {
                mass += g.tuple_weight(e.vertices());
            }
        }
        let mut den = Rational::one();
        for j in (0..t).filter(|&j| j != i) {
            den *= g.class_weight(j);
        }
        rho.push(mass / den);
    }
    Ok(rho)
}

/// Weighted fraction of transversals missing at most `k` of their r-subsets.
pub fn naive_near_clique_density(g: &PartiteHypergraph, k: usize) -> Result<Rational> {
    g.require_transversal_shape()?;
    let mut mass = Rational::zero();
    for tr in all_transversals(g) {
        let missing = (0..tr.len())
            .filter(|&skip| {
                let sub: Vec<VertexId> = tr
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, v)| *v)
                    .collect();
                !g.has_edge(&sub)
            })
            .count();
        if missing <= k {
            mass += g.tuple_weight(&tr);
        }
    }
    let mut den = Rational::one();
    for c in 0..g.num_classes() {
        den *= g.class_weight(c);
    }
    Ok(mass / den)
}

pub fn naive_clique_density(g: &PartiteHypergraph) -> Result<Rational> {
    naive_near_clique_density(g, 0)
}
