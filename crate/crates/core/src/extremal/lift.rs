//! Lifting an ordinary r-graph on `n` vertices to an (r+1)-partite r-graph:
//! take r+1 copies of the vertex set as classes, and for every edge, every
//! choice of r classes and every ordering of the edge, place the edge's
//! vertices in those classes.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{class_subsets, unit_classes, Edge, PartiteHypergraph, VertexId};
use crate::rational::Rational;

/// Simple unweighted r-graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlainHypergraph {
    pub r: usize,
    pub n: usize,
    pub edges: Vec<Vec<usize>>,
}

impl PlainHypergraph {
    pub fn new(r: usize, n: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        let g = Self { r, n, edges };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.r < 2 {
            return Err(Error::OutOfRange(format!("uniformity r = {} must be at least 2", self.r)));
        }
        if self.n == 0 {
            return Err(Error::OutOfRange("vertex count must be positive".into()));
        }
        let mut seen = BTreeSet::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.len() != self.r {
                return Err(Error::NonSimple(format!("edge {i} has {} vertices, expected {}", e.len(), self.r)));
            }
            if let Some(v) = e.iter().find(|&&v| v >= self.n) {
                return Err(Error::NonSimple(format!("edge {i} uses vertex {v}, but n = {}", self.n)));
            }
            let set: BTreeSet<usize> = e.iter().copied().collect();
            if set.len() != e.len() {
                return Err(Error::NonSimple(format!("edge {i} {e:?} repeats a vertex")));
            }
            if !seen.insert(set) {
                return Err(Error::NonSimple(format!("edge {i} {e:?} appears twice")));
            }
        }
        Ok(())
    }

    /// Some r+1 vertices all of whose r-subsets are edges, by brute force.
    pub fn find_clique(&self) -> Option<Vec<usize>> {
        let edges: BTreeSet<Vec<usize>> = self
            .edges
            .iter()
            .map(|e| {
                let mut e = e.clone();
                e.sort_unstable();
                e
            })
            .collect();
        class_subsets(self.n, self.r + 1).into_iter().find(|set| {
            (0..set.len()).all(|skip| {
                let sub: Vec<usize> = set
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect();
                edges.contains(&sub)
            })
        })
    }

    /// `r! |E| / n^r`, the common density of every class of the lift.
    pub fn lift_density(&self) -> Rational {
        let fact: u64 = (1..=self.r as u64).product();
        let num = num_bigint::BigInt::from(fact) * num_bigint::BigInt::from(self.edges.len());
        let den = num_bigint::BigInt::from(self.n).pow(self.r as u32);
        Rational::new(num, den)
    }
}

/// All orderings of `items`, lexicographic by position.
fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Unit-weight (r+1)-partite lift with `(r+1)! |E|` edges.
pub fn decaen_lift(g: &PlainHypergraph) -> Result<PartiteHypergraph> {
    g.validate()?;
    let r = g.r;
    let mut edges = Vec::with_capacity(g.edges.len() * (r + 1) * permutations(&(0..r).collect::<Vec<_>>()).len());
    for e in &g.edges {
        let perms = permutations(e);
        for classes in class_subsets(r + 1, r) {
            for p in &perms {
                edges.push(Edge::from_sorted(
                    classes.iter().zip(p).map(|(&c, &v)| VertexId::new(c, v)).collect(),
                ));
            }
        }
    }
    Ok(PartiteHypergraph::from_canonical(r, unit_classes(&vec![g.n; r + 1]), edges))
}
