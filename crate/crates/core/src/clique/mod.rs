//! Counting copies of K_{r+1}^r (and K_{r+1}^r minus k edges) among the
//! transversals of an (r+1)-partite r-graph.
//!
//! A transversal picks one vertex per class; it spans a clique when all
//! r+1 of its r-subsets are edges. The clique density is the weighted mass
//! of such transversals over `prod_i w(V_i)`.

mod index;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{fmt_vertices, IntegerWeights, PartiteHypergraph, VertexId};
use crate::rational::{self, Rational};

pub(crate) use index::TransversalIndex;
use index::{ones, PrefixHits};

/// Scans with at least this many transversals run in parallel.
const PARALLEL_THRESHOLD: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueReport {
    /// Weighted fraction of qualifying transversals.
    #[serde(rename = "C", with = "rational::serde_str")]
    pub clique_density: Rational,
    /// Weighted mass of qualifying transversals, before dividing by `prod_i w(V_i)`.
    #[serde(with = "rational::serde_str")]
    pub weighted_count: Rational,
    /// Number of qualifying transversals.
    pub transversals: u64,
    /// Edges a transversal may miss and still qualify (0 for cliques).
    pub max_missing: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<Vec<VertexId>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NearCliqueQuery {
    k: usize,
}

impl NearCliqueQuery {
    /// `k` missing edges tolerated, `0 <= k <= r + 1`.
    pub fn new(k: usize, r: usize) -> Result<Self> {
        if k > r + 1 {
            return Err(Error::KOutOfRange { k, max: r + 1 });
        }
        Ok(Self { k })
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransversalEdge {
    pub omitted_class: usize,
    pub vertices: Vec<VertexId>,
    pub present: bool,
}

struct Acc {
    mass: BigUint,
    count: u64,
    witnesses: Vec<Vec<VertexId>>,
}

fn transversal(prefix: &[usize], last: usize) -> Vec<VertexId> {
    let r = prefix.len() - 1;
    prefix[..r]
        .iter()
        .enumerate()
        .map(|(c, &l)| VertexId::new(c, l))
        .chain(std::iter::once(VertexId::new(r, last)))
        .collect()
}

fn count(g: &PartiteHypergraph, k: usize, witness_limit: Option<usize>) -> Result<CliqueReport> {
    g.require_transversal_shape()?;
    let r = g.r();
    let iw = IntegerWeights::new(g);
    let idx = TransversalIndex::new(g);
    let parallel = g.transversal_count() >= BigUint::from(PARALLEL_THRESHOLD);
    let limit = witness_limit.unwrap_or(0);

    let visit = |acc: &mut Acc, hits: PrefixHits<'_>| {
        let n = hits.mask.iter().map(|w| w.count_ones() as u64).sum::<u64>();
        acc.count += n;
        if !iw.unit {
            let prefix_weight: BigUint = (0..r).map(|c| &iw.weights[c][hits.prefix[c]]).product();
            let inner: BigUint = ones(hits.mask).map(|col| &iw.weights[r][col]).sum();
            acc.mass += prefix_weight * inner;
        }
        if acc.witnesses.len() < limit {
            for col in ones(hits.mask).take(limit - acc.witnesses.len()) {
                acc.witnesses.push(transversal(hits.prefix, col));
            }
        }
    };
    let merge = |mut a: Acc, b: Acc| {
        a.mass += b.mass;
        a.count += b.count;
        a.witnesses.extend(b.witnesses);
        a.witnesses.truncate(limit);
        a
    };
    let init = || Acc {
        mass: BigUint::zero(),
        count: 0,
        witnesses: Vec::new(),
    };
    let acc = idx.scan(k, parallel, init, visit, merge);

    let mass = if iw.unit { BigUint::from(acc.count) } else { acc.mass };
    let scale: BigInt = iw.scales.iter().product();
    let total: BigUint = iw.totals.iter().product();
    Ok(CliqueReport {
        clique_density: Rational::new(mass.clone().into(), total.into()),
        weighted_count: Rational::new(mass.into(), scale),
        transversals: acc.count,
        max_missing: k,
        witnesses: witness_limit.map(|_| acc.witnesses),
    })
}

/// Exact clique density `C(G)`.
pub fn clique_density(g: &PartiteHypergraph) -> Result<CliqueReport> {
    count(g, 0, None)
}

/// Clique density plus up to `witness_limit` witnesses in lexicographic order.
pub fn clique_density_with_witnesses(g: &PartiteHypergraph, witness_limit: usize) -> Result<CliqueReport> {
    count(g, 0, Some(witness_limit))
}

/// Weighted density of transversals missing at most `q.k()` of their r+1 edges.
pub fn count_near_cliques(
    g: &PartiteHypergraph,
    q: NearCliqueQuery,
    witness_limit: Option<usize>,
) -> Result<CliqueReport> {
    NearCliqueQuery::new(q.k, g.r())?;
    count(g, q.k, witness_limit)
}

/// Lexicographically least clique transversal, if any.
pub fn contains_clique(g: &PartiteHypergraph) -> Result<Option<Vec<VertexId>>> {
    contains_near_clique(g, 0)
}

/// Lexicographically least transversal missing at most `k` edges.
pub fn contains_near_clique(g: &PartiteHypergraph, k: usize) -> Result<Option<Vec<VertexId>>> {
    g.require_transversal_shape()?;
    NearCliqueQuery::new(k, g.r())?;
    let idx = TransversalIndex::new(g);
    Ok(idx
        .first_hit(k)
        .map(|(prefix, mask)| transversal(&prefix, ones(&mask).next().expect("non-empty hit"))))
}

/// Clique indicator for every transversal, indexed in lexicographic order
/// (mixed radix, last class fastest).
pub fn clique_flags(g: &PartiteHypergraph) -> Result<Vec<bool>> {
    g.require_transversal_shape()?;
    let sizes = g.class_sizes();
    let total: usize = sizes.iter().product();
    let r = g.r();
    let mut strides = vec![1usize; r + 1];
    for c in (0..r).rev() {
        strides[c] = strides[c + 1] * sizes[c + 1];
    }
    let idx = TransversalIndex::new(g);
    let hits = idx.scan(
        0,
        false,
        Vec::new,
        |acc: &mut Vec<usize>, hits| {
            let base: usize = (0..r).map(|c| hits.prefix[c] * strides[c]).sum();
            acc.extend(ones(hits.mask).map(|col| base + col));
        },
        |mut a, b| {
            a.extend(b);
            a
        },
    );
    let mut flags = vec![false; total];
    for h in hits {
        flags[h] = true;
    }
    Ok(flags)
}

/// The r+1 r-subsets of a transversal in lexicographic order, each marked
/// present or absent.
pub fn enumerate_transversal_edges(g: &PartiteHypergraph, transversal: &[VertexId]) -> Result<Vec<TransversalEdge>> {
    g.require_transversal_shape()?;
    let t = g.num_classes();
    let mut sorted = transversal.to_vec();
    sorted.sort_unstable();
    let well_formed = sorted.len() == t
        && sorted
            .iter()
            .enumerate()
            .all(|(c, v)| v.class == c && v.local < g.class_size(c));
    if !well_formed {
        return Err(Error::InvalidTuple(format!(
            "{} is not a transversal of {t} classes",
            fmt_vertices(transversal)
        )));
    }
    Ok((0..t)
        .rev()
        .map(|omit| {
            let vertices: Vec<VertexId> = sorted.iter().copied().filter(|v| v.class != omit).collect();
            let present = g.has_edge(&vertices);
            TransversalEdge {
                omitted_class: omit,
                vertices,
                present,
            }
        })
        .collect())
}
