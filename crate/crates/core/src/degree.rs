//! Degrees of partite tuples, strict balance, and the degree-threshold
//! certificate for cliques and near-cliques.
//!
//! For a partite tuple `g` and a set `I` of classes untouched by `g` with
//! `|g| + |I| = r`, `d(I, g)` counts the tuples `h` with one vertex in each
//! class of `I` such that `g ∪ h` is an edge. `g` is strictly balanced when
//! `d(I, g)` is the same for every admissible `I`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::clique::contains_near_clique;
use crate::error::{Error, Result};
use crate::hypergraph::{class_subsets, fmt_vertices, for_each_tuple, Edge, PartiteHypergraph, VertexId};
use crate::rational::{self, Rational};

/// At most one vertex per class, stored sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PartiteTuple(Vec<VertexId>);

impl PartiteTuple {
    pub fn new(mut vertices: Vec<VertexId>) -> Result<Self> {
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0].class == w[1].class) {
            return Err(Error::InvalidTuple(format!(
                "{} has two vertices in one class",
                fmt_vertices(&vertices)
            )));
        }
        Ok(Self(vertices))
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn check_in(&self, g: &PartiteHypergraph) -> Result<()> {
        if let Some(v) = self
            .0
            .iter()
            .find(|v| v.class >= g.num_classes() || v.local >= g.class_size(v.class))
        {
            return Err(Error::InvalidTuple(format!("vertex {v} is not in the graph")));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetDegree {
    pub classes: Vec<usize>,
    pub degree: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeProfile {
    pub tuple: PartiteTuple,
    pub degrees_by_class_subset: Vec<SubsetDegree>,
    pub total_degree: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalanceVerdict {
    pub tuple_size: usize,
    pub balanced: bool,
    /// Lexicographically first tuple with two different subset degrees.
    pub violating_tuple: Option<DegreeProfile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSum {
    pub edge: Edge,
    /// The class `j` whose degrees are summed.
    pub class: usize,
    #[serde(with = "rational::serde_str")]
    pub sum: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdCertificate {
    pub r: usize,
    pub k: usize,
    /// Class maximizing `sum_{i != j} rho(i)` (smallest index on ties).
    pub j_star: usize,
    #[serde(with = "rational::serde_str")]
    pub max_sum: Rational,
    /// `max_sum - (r - k - 1)`.
    #[serde(with = "rational::serde_str")]
    pub margin: Rational,
    /// Strictly balanced at tuple size r-1.
    pub balanced: bool,
    /// Balanced with constant weight in every class.
    pub hypothesis_holds: bool,
    /// `S(e)` for every edge avoiding `j_star` (every class with `all_classes`).
    pub per_edge_sums: Vec<EdgeSum>,
    #[serde(with = "rational::serde_str_opt")]
    pub max_edge_sum: Option<Rational>,
    /// A transversal missing at most `k` edges, searched when `margin > 0`.
    pub witness: Option<Vec<VertexId>>,
    /// Hypothesis holds, margin positive, and no witness: the theorem fails.
    pub theorem_violation: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodegreeSummary {
    /// Number of partite (r-1)-tuples.
    pub tuples: u64,
    pub min: u64,
    pub max: u64,
    #[serde(with = "rational::serde_str")]
    pub mean: Rational,
}

/// All `h` over the classes `I` with `g ∪ h` an edge, lexicographic.
pub fn neighbourhood(g: &PartiteHypergraph, tuple: &PartiteTuple, classes: &[usize]) -> Result<Vec<Vec<VertexId>>> {
    tuple.check_in(g)?;
    let mut classes = classes.to_vec();
    classes.sort_unstable();
    classes.dedup();
    if let Some(c) = classes.iter().find(|&&c| c >= g.num_classes()) {
        return Err(Error::InvalidSelector(format!("class {c} does not exist")));
    }
    if let Some(c) = classes.iter().find(|&&c| tuple.0.iter().any(|v| v.class == c)) {
        return Err(Error::InvalidSelector(format!(
            "class {c} is already used by {}",
            fmt_vertices(&tuple.0)
        )));
    }
    if tuple.len() + classes.len() != g.r() {
        return Err(Error::InvalidSelector(format!(
            "|g| + |I| = {} but r = {}",
            tuple.len() + classes.len(),
            g.r()
        )));
    }
    let sizes = g.class_sizes();
    let mut out = Vec::new();
    let mut buf = Vec::with_capacity(g.r());
    for_each_tuple(&classes, &sizes, |h| {
        buf.clear();
        buf.extend_from_slice(&tuple.0);
        buf.extend_from_slice(h);
        buf.sort_unstable();
        if g.has_edge(&buf) {
            out.push(h.to_vec());
        }
    });
    Ok(out)
}

fn check_tuple_size(g: &PartiteHypergraph, size: usize) -> Result<()> {
    if size == 0 || size >= g.r() {
        return Err(Error::TupleSize { size, max: g.r() - 1 });
    }
    Ok(())
}

/// `d(I, g)` keyed by tuple, then by the classes `I`, from one pass over the edges.
fn subset_degrees(g: &PartiteHypergraph, size: usize) -> BTreeMap<Vec<VertexId>, BTreeMap<Vec<usize>, u64>> {
    let mut map: BTreeMap<Vec<VertexId>, BTreeMap<Vec<usize>, u64>> = BTreeMap::new();
    let positions = class_subsets(g.r(), size);
    for e in g.edges() {
        let vs = e.vertices();
        for pos in &positions {
            let tuple: Vec<VertexId> = pos.iter().map(|&p| vs[p]).collect();
            let rest: Vec<usize> = vs
                .iter()
                .enumerate()
                .filter(|(i, _)| !pos.contains(i))
                .map(|(_, v)| v.class)
                .collect();
            *map.entry(tuple).or_default().entry(rest).or_default() += 1;
        }
    }
    map
}

fn profile_from(
    g: &PartiteHypergraph,
    tuple: Vec<VertexId>,
    degrees: Option<&BTreeMap<Vec<usize>, u64>>,
) -> DegreeProfile {
    let untouched: Vec<usize> = (0..g.num_classes())
        .filter(|c| tuple.iter().all(|v| v.class != *c))
        .collect();
    let need = g.r() - tuple.len();
    let degrees_by_class_subset: Vec<SubsetDegree> = class_subsets(untouched.len(), need)
        .into_iter()
        .map(|pos| {
            let classes: Vec<usize> = pos.iter().map(|&p| untouched[p]).collect();
            let degree = degrees.and_then(|d| d.get(&classes)).copied().unwrap_or(0);
            SubsetDegree { classes, degree }
        })
        .collect();
    DegreeProfile {
        total_degree: degrees_by_class_subset.iter().map(|s| s.degree).sum(),
        tuple: PartiteTuple(tuple),
        degrees_by_class_subset,
    }
}

/// `d(I, g)` for every admissible class set `I`.
pub fn degree_profile(g: &PartiteHypergraph, tuple: &PartiteTuple) -> Result<DegreeProfile> {
    tuple.check_in(g)?;
    check_tuple_size(g, tuple.len())?;
    let mut degrees: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    for e in g.edges() {
        if tuple.0.iter().all(|v| e.vertices().contains(v)) {
            let rest: Vec<usize> = e.classes().filter(|c| tuple.0.iter().all(|v| v.class != *c)).collect();
            *degrees.entry(rest).or_default() += 1;
        }
    }
    Ok(profile_from(g, tuple.0.clone(), Some(&degrees)))
}

/// Checks every partite tuple of the given size, including those of degree 0.
pub fn is_strictly_balanced(g: &PartiteHypergraph, tuple_size: usize) -> Result<BalanceVerdict> {
    check_tuple_size(g, tuple_size)?;
    if g.num_classes() < g.r() {
        return Err(Error::Shape {
            expected: g.r(),
            found: g.num_classes(),
        });
    }
    // tuples absent from the map have degree 0 everywhere
    for (tuple, degrees) in subset_degrees(g, tuple_size) {
        let profile = profile_from(g, tuple, Some(&degrees));
        let first = profile.degrees_by_class_subset[0].degree;
        if profile.degrees_by_class_subset.iter().any(|s| s.degree != first) {
            return Ok(BalanceVerdict {
                tuple_size,
                balanced: false,
                violating_tuple: Some(profile),
            });
        }
    }
    Ok(BalanceVerdict {
        tuple_size,
        balanced: true,
        violating_tuple: None,
    })
}

/// `S(e) = sum_i d_w(V_j, e - e_i) / w(V_j)` over the r vertices `e_i` of
/// each edge `e` avoiding class `j`, where `d_w` sums the weights of the
/// completing vertices. In an unweighted graph this is the sum of the
/// codegrees into `V_j` divided by `|V_j|`.
fn edge_sums(g: &PartiteHypergraph, classes: &[usize]) -> Vec<EdgeSum> {
    let mut wdeg: BTreeMap<(Vec<VertexId>, usize), Rational> = BTreeMap::new();
    for f in g.edges() {
        let vs = f.vertices();
        for (i, x) in vs.iter().enumerate() {
            if !classes.contains(&x.class) {
                continue;
            }
            let mut rest = vs.to_vec();
            rest.remove(i);
            *wdeg.entry((rest, x.class)).or_insert_with(Rational::zero) += g.weight(*x);
        }
    }
    let mut out = Vec::new();
    for &j in classes {
        let total = g.class_weight(j);
        for e in g.edges().iter().filter(|e| !e.touches_class(j)) {
            let mut sum = Rational::zero();
            for i in 0..e.len() {
                let mut rest = e.vertices().to_vec();
                rest.remove(i);
                if let Some(d) = wdeg.get(&(rest, j)) {
                    sum += d;
                }
            }
            out.push(EdgeSum {
                edge: e.clone(),
                class: j,
                sum: sum / &total,
            });
        }
    }
    out
}

pub fn threshold_check(g: &PartiteHypergraph, k: usize) -> Result<ThresholdCertificate> {
    threshold_check_with(g, k, false)
}

/// As [`threshold_check`]; `all_classes` computes `S(e)` for every class.
pub fn threshold_check_with(g: &PartiteHypergraph, k: usize, all_classes: bool) -> Result<ThresholdCertificate> {
    g.require_transversal_shape()?;
    let r = g.r();
    if k > r - 1 {
        return Err(Error::KOutOfRange { k, max: r - 1 });
    }
    let dv = g.density_vector()?;
    let (j_star, max_sum) = dv.max_sum_excluding_one();
    let margin = &max_sum - Rational::from_integer(BigInt::from(r - k - 1));
    let balanced = is_strictly_balanced(g, r - 1)?.balanced;
    let hypothesis_holds = balanced && g.has_uniform_class_weights();
    let classes: Vec<usize> = if all_classes { (0..=r).collect() } else { vec![j_star] };
    let per_edge_sums = edge_sums(g, &classes);
    let max_edge_sum = per_edge_sums.iter().map(|s| s.sum.clone()).max();
    let witness = if margin > Rational::zero() {
        contains_near_clique(g, k)?
    } else {
        None
    };
    let theorem_violation = hypothesis_holds && margin > Rational::zero() && witness.is_none();
    Ok(ThresholdCertificate {
        r,
        k,
        j_star,
        max_sum,
        margin,
        balanced,
        hypothesis_holds,
        per_edge_sums,
        max_edge_sum,
        witness,
        theorem_violation,
    })
}

/// Min, max and mean of `d(g)` over all partite (r-1)-tuples.
pub fn codegree_profile(g: &PartiteHypergraph) -> CodegreeSummary {
    let r = g.r();
    let sizes = g.class_sizes();
    let tuples: u64 = class_subsets(g.num_classes(), r - 1)
        .iter()
        .map(|cs| cs.iter().map(|&c| sizes[c] as u64).product::<u64>())
        .sum();
    let mut degrees: BTreeMap<Vec<VertexId>, u64> = BTreeMap::new();
    for e in g.edges() {
        for i in 0..r {
            let mut rest = e.vertices().to_vec();
            rest.remove(i);
            *degrees.entry(rest).or_default() += 1;
        }
    }
    let max = degrees.values().copied().max().unwrap_or(0);
    let min = if (degrees.len() as u64) < tuples {
        0
    } else {
        degrees.values().copied().min().unwrap_or(0)
    };
    let total = (r * g.num_edges()) as u64;
    CodegreeSummary {
        tuples,
        min,
        max,
        mean: if tuples == 0 {
            Rational::zero()
        } else {
            Rational::new(total.into(), tuples.into())
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::{decaen_lift, PlainHypergraph};
    use crate::rational::{int, rat};

    fn v(c: usize, l: usize) -> VertexId {
        VertexId::new(c, l)
    }

    #[test]
    fn neighbourhood_examples() {
        let k = PartiteHypergraph::complete_unweighted(3, &[2, 3, 2, 4]).unwrap();
        let g = PartiteTuple::new(vec![v(0, 1)]).unwrap();
        assert_eq!(neighbourhood(&k, &g, &[1, 3]).unwrap().len(), 12);

        let single = PartiteHypergraph::unweighted(3, &[1, 1, 1, 1], vec![vec![v(0, 0), v(1, 0), v(2, 0)]]).unwrap();
        let g = PartiteTuple::new(vec![v(0, 0), v(1, 0)]).unwrap();
        assert_eq!(neighbourhood(&single, &g, &[2]).unwrap(), vec![vec![v(2, 0)]]);
        assert!(neighbourhood(&single, &g, &[3]).unwrap().is_empty());
        assert!(neighbourhood(&single, &g, &[1]).is_err());
        assert!(neighbourhood(&single, &g, &[2, 3]).is_err());

        let empty = PartiteHypergraph::empty(3, vec![vec![int(1)]; 4]).unwrap();
        assert!(neighbourhood(&empty, &g, &[2]).unwrap().is_empty());
        assert!(PartiteTuple::new(vec![v(0, 0), v(0, 1)]).is_err());
    }

    #[test]
    fn profile_totals() {
        let k = PartiteHypergraph::complete_unweighted(2, &[2, 3, 4]).unwrap();
        let p = degree_profile(&k, &PartiteTuple::new(vec![v(0, 0)]).unwrap()).unwrap();
        assert_eq!(
            p.degrees_by_class_subset,
            vec![
                SubsetDegree { classes: vec![1], degree: 3 },
                SubsetDegree { classes: vec![2], degree: 4 }
            ]
        );
        assert_eq!(p.total_degree, 7);
    }

    #[test]
    fn balance_examples() {
        let k = PartiteHypergraph::complete_unweighted(2, &[2, 2, 2]).unwrap();
        assert!(is_strictly_balanced(&k, 1).unwrap().balanced);
        let e = Edge::new(vec![v(0, 1), v(2, 0)]).unwrap();
        let minus = k.without_edge(&e).unwrap();
        let verdict = is_strictly_balanced(&minus, 1).unwrap();
        assert!(!verdict.balanced);
        let bad = verdict.violating_tuple.unwrap();
        assert_eq!(bad.tuple.vertices(), &[v(0, 1)]);
        let d: Vec<u64> = bad.degrees_by_class_subset.iter().map(|s| s.degree).collect();
        assert_eq!(d, vec![2, 1]);
        assert!(is_strictly_balanced(&k, 2).is_err());
        assert!(is_strictly_balanced(&k, 0).is_err());
    }

    #[test]
    fn lift_is_balanced() {
        let g = PlainHypergraph::new(3, 5, vec![vec![0, 1, 2], vec![1, 3, 4], vec![0, 2, 4]]).unwrap();
        let h = decaen_lift(&g).unwrap();
        assert!(is_strictly_balanced(&h, 2).unwrap().balanced);
        assert!(is_strictly_balanced(&h, 1).unwrap().balanced);
    }

    #[test]
    fn threshold_on_complete_graph() {
        let k = PartiteHypergraph::complete_unweighted(3, &[2, 2, 2, 2]).unwrap();
        let cert = threshold_check(&k, 0).unwrap();
        assert_eq!(cert.margin, int(1));
        assert!(cert.witness.is_some() && cert.hypothesis_holds && !cert.theorem_violation);
        assert_eq!(cert.max_edge_sum, Some(int(3)));
        assert!(matches!(threshold_check(&k, 3), Err(Error::KOutOfRange { k: 3, max: 2 })));
    }

    #[test]
    fn threshold_on_lifts() {
        let tri = PlainHypergraph::new(2, 3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let cert = threshold_check(&decaen_lift(&tri).unwrap(), 0).unwrap();
        assert_eq!(cert.max_sum, rat(4, 3));
        assert_eq!(cert.margin, rat(1, 3));
        assert!(cert.witness.is_some());

        // path on 3 vertices: 2 edges <= (1/2) 9 / 2
        let path = PlainHypergraph::new(2, 3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let cert = threshold_check(&decaen_lift(&path).unwrap(), 0).unwrap();
        assert!(cert.margin <= int(0));
        assert!(cert.witness.is_none() && !cert.theorem_violation);
        assert!(cert.max_edge_sum.unwrap() <= int(1));
    }

    #[test]
    fn codegree_examples() {
        let k = PartiteHypergraph::complete_unweighted(3, &[3, 3, 3, 3]).unwrap();
        let s = codegree_profile(&k);
        assert_eq!((s.min, s.max, s.mean.clone()), (6, 6, int(6)));
        assert_eq!(s.tuples, 6 * 9);

        let empty = PartiteHypergraph::empty(2, vec![vec![int(1)]; 3]).unwrap();
        let s = codegree_profile(&empty);
        assert_eq!((s.min, s.max, s.mean), (0, 0, int(0)));

        let single = PartiteHypergraph::unweighted(2, &[2, 1, 1], vec![vec![v(0, 0), v(1, 0)]]).unwrap();
        let s = codegree_profile(&single);
        assert_eq!((s.min, s.max, s.tuples), (0, 1, 4));
    }
}
