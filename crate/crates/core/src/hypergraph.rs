//! Weighted multipartite r-uniform hypergraphs.
//!
//! A [`PartiteHypergraph`] has `t >= r` vertex classes, each a list of
//! strictly positive rational vertex weights, and a set of edges. Every edge
//! has exactly `r` vertices, at most one per class. Edges are stored sorted
//! by `(class, local)` and the edge list itself is sorted and duplicate free,
//! so two graphs are equal exactly when their canonical forms are equal.
//!
//! Graphs are immutable values; "mutating" operations return new graphs.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, format_rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "(usize, usize)", into = "(usize, usize)")]
pub struct VertexId {
    pub class: usize,
    pub local: usize,
}

impl VertexId {
    pub const fn new(class: usize, local: usize) -> Self {
        Self { class, local }
    }
}

impl From<(usize, usize)> for VertexId {
    fn from((class, local): (usize, usize)) -> Self {
        Self { class, local }
    }
}

impl From<VertexId> for (usize, usize) {
    fn from(v: VertexId) -> Self {
        (v.class, v.local)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.class, self.local)
    }
}

/// A canonical edge: vertices sorted by class, at most one per class.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Edge(Vec<VertexId>);

impl Edge {
    /// Sorts the vertices; fails if two share a class.
    pub fn new(mut vertices: Vec<VertexId>) -> Result<Self> {
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0].class == w[1].class) {
            return Err(Error::InvalidGraph(format!(
                "edge {} has two vertices in one class",
                fmt_vertices(&vertices)
            )));
        }
        Ok(Self(vertices))
    }

    pub(crate) fn from_sorted(vertices: Vec<VertexId>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0].class < w[1].class));
        Self(vertices)
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

    pub fn classes(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|v| v.class)
    }

    pub fn touches_class(&self, class: usize) -> bool {
        self.0.iter().any(|v| v.class == class)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_vertices(&self.0))
    }
}

/// `{(c,l),...}`
pub fn fmt_vertices(vs: &[VertexId]) -> String {
    let inner: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

/// The classes `I` deleted to form `P_I`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassSubsetSelector {
    omitted: BTreeSet<usize>,
}

impl ClassSubsetSelector {
    pub fn new(indices: &[usize]) -> Result<Self> {
        let omitted: BTreeSet<usize> = indices.iter().copied().collect();
        if omitted.len() != indices.len() {
            return Err(Error::InvalidSelector(format!(
                "repeated class index in {indices:?}"
            )));
        }
        Ok(Self { omitted })
    }

    pub fn single(index: usize) -> Self {
        Self {
            omitted: BTreeSet::from([index]),
        }
    }

    pub fn omitted(&self) -> &BTreeSet<usize> {
        &self.omitted
    }
}

/// `rho[i]`: density of the r-partite graph left after deleting class `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityVector {
    #[serde(with = "rational::serde_str_vec")]
    pub rho: Vec<Rational>,
}

impl DensityVector {
    pub fn new(rho: Vec<Rational>) -> Result<Self> {
        if let Some(bad) = rho.iter().find(|x| !rational::in_unit_interval(x)) {
            return Err(Error::OutOfRange(format!(
                "density {} not in [0,1]",
                format_rational(bad)
            )));
        }
        Ok(Self { rho })
    }

    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }

    pub fn sum(&self) -> Rational {
        self.rho.iter().fold(Rational::zero(), |acc, x| acc + x)
    }

    /// `sum(rho) - r`, the lower bound on the clique density.
    pub fn clique_lower_bound(&self, r: usize) -> Rational {
        self.sum() - Rational::from_integer(BigInt::from(r))
    }

    /// `max_j sum_{i != j} rho(i)`, attained at the smallest index of a minimal entry.
    pub fn max_sum_excluding_one(&self) -> (usize, Rational) {
        let total = self.sum();
        let (j, min) = self
            .rho
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(&b.0)))
            .expect("non-empty density vector");
        (j, total - min)
    }
}

impl fmt::Display for DensityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.rho.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartiteHypergraph {
    r: usize,
    classes: Vec<Vec<Rational>>,
    edges: Vec<Edge>,
}

impl PartiteHypergraph {
    /// Validating constructor. Edges may be given in any vertex order.
    pub fn new<E>(r: usize, classes: Vec<Vec<Rational>>, edges: E) -> Result<Self>
    where
        E: IntoIterator<Item = Vec<VertexId>>,
    {
        Self::check_shape(r, &classes)?;
        let mut canon = Vec::new();
        for vertices in edges {
            let edge = Edge::new(vertices)?;
            check_edge(r, &classes, &edge)?;
            canon.push(edge);
        }
        canon.sort_unstable();
        if let Some(w) = canon.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!("duplicate edge {}", w[0])));
        }
        Ok(Self {
            r,
            classes,
            edges: canon,
        })
    }

    /// Unit weights, `sizes[c]` vertices in class `c`.
    pub fn unweighted<E>(r: usize, sizes: &[usize], edges: E) -> Result<Self>
    where
        E: IntoIterator<Item = Vec<VertexId>>,
    {
        Self::new(r, unit_classes(sizes), edges)
    }

    pub fn empty(r: usize, classes: Vec<Vec<Rational>>) -> Result<Self> {
        Self::new(r, classes, std::iter::empty())
    }

    /// Every partite r-set is an edge.
    pub fn complete(r: usize, classes: Vec<Vec<Rational>>) -> Result<Self> {
        Self::check_shape(r, &classes)?;
        let sizes: Vec<usize> = classes.iter().map(Vec::len).collect();
        let mut edges = Vec::new();
        for subset in class_subsets(sizes.len(), r) {
            for_each_tuple(&subset, &sizes, |vs| edges.push(Edge::from_sorted(vs.to_vec())));
        }
        edges.sort_unstable();
        Ok(Self { r, classes, edges })
    }

    pub fn complete_unweighted(r: usize, sizes: &[usize]) -> Result<Self> {
        Self::complete(r, unit_classes(sizes))
    }

    /// Trusted constructor for internal builders; edges must be canonical.
    pub(crate) fn from_canonical(r: usize, classes: Vec<Vec<Rational>>, mut edges: Vec<Edge>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        debug_assert!(Self::check_shape(r, &classes).is_ok());
        debug_assert!(edges.iter().all(|e| check_edge(r, &classes, e).is_ok()));
        Self { r, classes, edges }
    }

    fn check_shape(r: usize, classes: &[Vec<Rational>]) -> Result<()> {
        if r < 2 {
            return Err(Error::InvalidGraph(format!("uniformity r = {r} must be at least 2")));
        }
        if classes.len() < r {
            return Err(Error::InvalidGraph(format!(
                "{} classes is fewer than r = {r}",
                classes.len()
            )));
        }
        for (c, ws) in classes.iter().enumerate() {
            if ws.is_empty() {
                return Err(Error::InvalidGraph(format!("class {c} has no vertices")));
            }
            if let Some((l, w)) = ws.iter().enumerate().find(|(_, w)| !w.is_positive()) {
                return Err(Error::InvalidGraph(format!(
                    "vertex ({c},{l}) has non-positive weight {}",
                    format_rational(w)
                )));
            }
        }
        Ok(())
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<Rational>] {
        &self.classes
    }

    pub fn class_size(&self, class: usize) -> usize {
        self.classes[class].len()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    /// `w(V_c)`.
    pub fn class_weight(&self, class: usize) -> Rational {
        self.classes[class]
            .iter()
            .fold(Rational::zero(), |acc, w| acc + w)
    }

    pub fn weight(&self, v: VertexId) -> &Rational {
        &self.classes[v.class][v.local]
    }

    pub fn num_vertices(&self) -> usize {
        self.classes.iter().map(Vec::len).sum()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Membership test for a vertex list already sorted by class.
    pub fn has_edge(&self, sorted_vertices: &[VertexId]) -> bool {
        self.edges
            .binary_search_by(|e| e.0.as_slice().cmp(sorted_vertices))
            .is_ok()
    }

    pub fn contains(&self, edge: &Edge) -> bool {
        self.edges.binary_search(edge).is_ok()
    }

    pub fn is_unit_weight(&self) -> bool {
        self.classes.iter().flatten().all(One::is_one)
    }

    /// All vertices in each class carry the same weight.
    pub fn has_uniform_class_weights(&self) -> bool {
        self.classes
            .iter()
            .all(|ws| ws.windows(2).all(|w| w[0] == w[1]))
    }

    /// Product of the vertex weights of `edge`.
    pub fn edge_weight(&self, edge: &Edge) -> Result<Rational> {
        if !self.contains(edge) {
            return Err(Error::EdgeNotFound(edge.to_string()));
        }
        Ok(self.tuple_weight(edge.vertices()))
    }

    pub fn tuple_weight(&self, vertices: &[VertexId]) -> Rational {
        vertices
            .iter()
            .fold(Rational::one(), |acc, v| acc * self.weight(*v))
    }

    /// New graph with `vertices` added as an edge.
    pub fn with_edge(&self, vertices: Vec<VertexId>) -> Result<Self> {
        let edge = Edge::new(vertices)?;
        check_edge(self.r, &self.classes, &edge)?;
        match self.edges.binary_search(&edge) {
            Ok(_) => Err(Error::InvalidGraph(format!("duplicate edge {edge}"))),
            Err(pos) => {
                let mut g = self.clone();
                g.edges.insert(pos, edge);
                Ok(g)
            }
        }
    }

    pub fn without_edge(&self, edge: &Edge) -> Result<Self> {
        match self.edges.binary_search(edge) {
            Ok(pos) => {
                let mut g = self.clone();
                g.edges.remove(pos);
                Ok(g)
            }
            Err(_) => Err(Error::EdgeNotFound(edge.to_string())),
        }
    }

    /// `P_I`: delete the selected classes and every edge touching them.
    pub fn induced_partite(&self, sel: &ClassSubsetSelector) -> Result<Self> {
        let t = self.num_classes();
        if let Some(bad) = sel.omitted().iter().find(|&&i| i >= t) {
            return Err(Error::InvalidSelector(format!("class {bad} does not exist (t = {t})")));
        }
        let remaining = t - sel.omitted().len();
        if remaining < self.r {
            return Err(Error::InvalidSelector(format!(
                "{remaining} remaining classes is fewer than r = {}",
                self.r
            )));
        }
        let mut new_index = vec![usize::MAX; t];
        let mut classes = Vec::with_capacity(remaining);
        for c in (0..t).filter(|c| !sel.omitted().contains(c)) {
            new_index[c] = classes.len();
            classes.push(self.classes[c].clone());
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| e.classes().all(|c| new_index[c] != usize::MAX))
            .map(|e| {
                Edge::from_sorted(
                    e.vertices()
                        .iter()
                        .map(|v| VertexId::new(new_index[v.class], v.local))
                        .collect(),
                )
            })
            .collect();
        Ok(Self::from_canonical(self.r, classes, edges))
    }

    /// Density of the r-partite graph on exactly the classes `subset`:
    /// weighted edge mass inside `subset` over the product of its class weights.
    pub fn subset_density(&self, subset: &[usize]) -> Result<Rational> {
        let set: BTreeSet<usize> = subset.iter().copied().collect();
        if set.len() != self.r || set.iter().any(|&c| c >= self.num_classes()) {
            return Err(Error::InvalidSelector(format!(
                "{subset:?} is not a set of r = {} existing classes",
                self.r
            )));
        }
        let iw = IntegerWeights::new(self);
        let mut mass = BigUint::zero();
        for e in self.edges.iter().filter(|e| e.classes().all(|c| set.contains(&c))) {
            mass += iw.tuple(e.vertices());
        }
        let total: BigUint = set.iter().map(|&c| &iw.totals[c]).product();
        Ok(Rational::new(mass.into(), total.into()))
    }

    /// `rho(i) = w(E(P_i)) / prod_{j != i} w(V_j)`; requires `t = r + 1`.
    pub fn density_vector(&self) -> Result<DensityVector> {
        self.require_transversal_shape()?;
        let t = self.num_classes();
        let iw = IntegerWeights::new(self);
        let mut mass = vec![BigUint::zero(); t];
        for e in &self.edges {
            let missing = missing_class(e, t);
            mass[missing] += iw.tuple(e.vertices());
        }
        let rho = mass
            .into_iter()
            .enumerate()
            .map(|(i, m)| {
                let den: BigUint = (0..t).filter(|&j| j != i).map(|j| &iw.totals[j]).product();
                Rational::new(m.into(), den.into())
            })
            .collect();
        Ok(DensityVector { rho })
    }

    pub(crate) fn require_transversal_shape(&self) -> Result<()> {
        if self.num_classes() != self.r + 1 {
            return Err(Error::Shape {
                expected: self.r + 1,
                found: self.num_classes(),
            });
        }
        Ok(())
    }

    /// Reorders classes: class `k` of the result is class `order[k]` of `self`.
    pub fn permute_classes(&self, order: &[usize]) -> Self {
        let t = self.num_classes();
        let mut inverse = vec![usize::MAX; t];
        for (k, &old) in order.iter().enumerate() {
            inverse[old] = k;
        }
        assert!(order.len() == t && inverse.iter().all(|&k| k != usize::MAX), "not a permutation");
        let classes = order.iter().map(|&old| self.classes[old].clone()).collect();
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let mut vs: Vec<VertexId> = e
                    .vertices()
                    .iter()
                    .map(|v| VertexId::new(inverse[v.class], v.local))
                    .collect();
                vs.sort_unstable();
                Edge::from_sorted(vs)
            })
            .collect();
        Self::from_canonical(self.r, classes, edges)
    }

    /// Number of transversals (one vertex from every class).
    pub fn transversal_count(&self) -> BigUint {
        self.classes.iter().map(|c| BigUint::from(c.len())).product()
    }
}

/// For an r-edge in an (r+1)-partite graph, the one class it avoids.
pub(crate) fn missing_class(edge: &Edge, t: usize) -> usize {
    let mut expected = 0;
    for c in edge.classes() {
        if c != expected {
            return expected;
        }
        expected += 1;
    }
    debug_assert!(expected < t);
    expected
}

fn check_edge(r: usize, classes: &[Vec<Rational>], edge: &Edge) -> Result<()> {
    if edge.len() != r {
        return Err(Error::InvalidGraph(format!(
            "edge {edge} has {} vertices, expected r = {r}",
            edge.len()
        )));
    }
    for v in edge.vertices() {
        if v.class >= classes.len() || v.local >= classes[v.class].len() {
            return Err(Error::InvalidGraph(format!("edge {edge} references missing vertex {v}")));
        }
    }
    Ok(())
}

pub fn unit_classes(sizes: &[usize]) -> Vec<Vec<Rational>> {
    sizes.iter().map(|&n| vec![Rational::one(); n]).collect()
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn class_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// Calls `f` on every tuple with one vertex from each class in `classes`
/// (ascending), in lexicographic order.
pub fn for_each_tuple(classes: &[usize], sizes: &[usize], mut f: impl FnMut(&[VertexId])) {
    if classes.iter().any(|&c| sizes[c] == 0) {
        return;
    }
    let mut tuple: Vec<VertexId> = classes.iter().map(|&c| VertexId::new(c, 0)).collect();
    loop {
        f(&tuple);
        let mut pos = tuple.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            let v = &mut tuple[pos];
            v.local += 1;
            if v.local < sizes[v.class] {
                break;
            }
            v.local = 0;
        }
    }
}

/// Per-class integer rescaling of the weights: class `c` is multiplied by
/// the lcm of its denominators. Densities and clique densities are ratios
/// that are invariant under per-class scaling, so they can be computed from
/// these integers exactly.
#[derive(Clone, Debug)]
pub(crate) struct IntegerWeights {
    pub weights: Vec<Vec<BigUint>>,
    pub totals: Vec<BigUint>,
    /// Multiplier applied to class `c`.
    pub scales: Vec<BigInt>,
    pub unit: bool,
}

impl IntegerWeights {
    pub fn new(g: &PartiteHypergraph) -> Self {
        let mut weights = Vec::with_capacity(g.num_classes());
        let mut totals = Vec::with_capacity(g.num_classes());
        let mut scales = Vec::with_capacity(g.num_classes());
        for ws in g.classes() {
            let scale = rational::lcm_of_denominators(ws);
            let scale_q = Rational::from_integer(scale.clone());
            let ints: Vec<BigUint> = ws
                .iter()
                .map(|w| rational::to_biguint(&(w * &scale_q)).expect("positive integral"))
                .collect();
            totals.push(ints.iter().sum());
            weights.push(ints);
            scales.push(scale);
        }
        let unit = weights.iter().flatten().all(One::is_one);
        Self {
            weights,
            totals,
            scales,
            unit,
        }
    }

    pub fn tuple(&self, vertices: &[VertexId]) -> BigUint {
        if self.unit {
            return BigUint::one();
        }
        vertices
            .iter()
            .map(|v| &self.weights[v.class][v.local])
            .product()
    }
}
