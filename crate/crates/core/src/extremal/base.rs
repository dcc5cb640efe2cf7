//! The r = 2 base: a weighted 3-partite graph whose complement is three
//! vertex-disjoint missing edges, placed so that no transversal contains
//! two of them. Then every transversal misses at most one edge, and
//! `C = rho(0) + rho(1) + rho(2) - 2` for any choice of weights.
//!
//! Classes are `A = V_0`, `B = V_1`, `C = V_2` with missing edges
//! `(A0, B0)`, `(B1, C0)`, `(C1, A1)`. Writing `u = 1 - rho(2)`,
//! `v = 1 - rho(0)`, `w = 1 - rho(1)` (class weights normalized to 1):
//!
//! ```text
//! w(A0) w(B0) = u,   w(B1) w(C0) = v,   w(C1) w(A1) = w.
//! ```
//!
//! Choosing `w(A0) = x` fixes `w(B0) = u/x`, then `w(C0)`, then the weight
//! `w(A1)` needed; class A is feasible when `x + w(A1) <= 1`, which reduces
//! to `Q(x) = a x² − (a + b − c) x + b(1 − c) <= 0` with discriminant
//! `Delta(a, b, c)`. Any `x` in the root interval works; the remainder
//! of class A goes to a third "slack" vertex `A2` that lies in every edge
//! of its class pairs. A rational `x` strictly inside the interval always
//! exists, so targets are met exactly even when the roots are irrational.

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Edge, PartiteHypergraph, VertexId};
use crate::rational::{self, format_rational, Rational};

use super::delta::{check_pos_region, delta_unchecked};

/// Vertex layout of the base graph.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseLayout {
    /// Exact for every target in the region; uses a slack vertex in class A
    /// when the root interval has irrational endpoints.
    #[default]
    Exact,
    /// Exactly two vertices per class. Irrational roots are approximated
    /// by a rational with denominator at most 10^6 and must land within
    /// the tolerance.
    SixVertex,
}

/// Class weights before zero-weight vertices are dropped:
/// `class0 = [A0, A1, A2]`, `class1 = [B0, B1]`, `class2 = [C0, C1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseWeights {
    #[serde(with = "rational::serde_str_vec")]
    pub class0: Vec<Rational>,
    #[serde(with = "rational::serde_str_vec")]
    pub class1: Vec<Rational>,
    #[serde(with = "rational::serde_str_vec")]
    pub class2: Vec<Rational>,
}

impl BaseWeights {
    /// Densities `(rho(0), rho(1), rho(2))` of the graph these weights define.
    pub fn densities(&self) -> [Rational; 3] {
        let one = Rational::one();
        let (a, b, c) = (&self.class0, &self.class1, &self.class2);
        [
            &one - &b[1] * &c[0],
            &one - &c[1] * &a[1],
            &one - &a[0] * &b[0],
        ]
    }

    pub fn graph(&self) -> PartiteHypergraph {
        let missing = [
            (VertexId::new(0, 0), VertexId::new(1, 0)),
            (VertexId::new(1, 1), VertexId::new(2, 0)),
            (VertexId::new(0, 1), VertexId::new(2, 1)),
        ];
        complement_of(
            vec![self.class0.clone(), self.class1.clone(), self.class2.clone()],
            &missing,
        )
    }
}

/// Complete 3-partite graph minus `missing`, with zero-weight vertices
/// removed (locals renumbered in order).
fn complement_of(classes: Vec<Vec<Rational>>, missing: &[(VertexId, VertexId)]) -> PartiteHypergraph {
    let mut renumber: Vec<Vec<Option<usize>>> = Vec::with_capacity(3);
    let mut kept: Vec<Vec<Rational>> = Vec::with_capacity(3);
    for ws in &classes {
        let mut map = Vec::with_capacity(ws.len());
        let mut out = Vec::new();
        for w in ws {
            if w.is_zero() {
                map.push(None);
            } else {
                map.push(Some(out.len()));
                out.push(w.clone());
            }
        }
        renumber.push(map);
        kept.push(out);
    }
    let mut edges = Vec::new();
    for (c1, c2) in [(0, 1), (0, 2), (1, 2)] {
        for l1 in 0..classes[c1].len() {
            for l2 in 0..classes[c2].len() {
                let (x, y) = (VertexId::new(c1, l1), VertexId::new(c2, l2));
                if missing.iter().any(|&(p, q)| (p, q) == (x, y) || (q, p) == (x, y)) {
                    continue;
                }
                if let (Some(n1), Some(n2)) = (renumber[c1][l1], renumber[c2][l2]) {
                    edges.push(Edge::from_sorted(vec![VertexId::new(c1, n1), VertexId::new(c2, n2)]));
                }
            }
        }
    }
    PartiteHypergraph::from_canonical(2, kept, edges)
}

/// How the three missing edges of the two-per-class graph are placed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchingArrangement {
    /// `(A0,B0)`, `(B1,C0)`, `(C1,A1)`: no transversal holds two missing edges.
    Disjoint,
    /// `(A0,B0)`, `(B0,C0)`, `(C1,A1)`: the transversal `(A0,B0,C0)` misses
    /// two edges, so `C > sum(rho) - 2` for all positive weights.
    Aligned,
}

/// Two vertices per class with weights `(p_i, 1 - p_i)`, `p_i` in `(0, 1)`.
pub fn matching_complement_graph(p: &[Rational; 3], arrangement: MatchingArrangement) -> Result<PartiteHypergraph> {
    for x in p {
        if !x.is_positive() || *x >= Rational::one() {
            return Err(Error::OutOfRange(format!("weight {} not in (0, 1)", format_rational(x))));
        }
    }
    let classes: Vec<Vec<Rational>> = p.iter().map(|x| vec![x.clone(), Rational::one() - x]).collect();
    let v = VertexId::new;
    let missing = match arrangement {
        MatchingArrangement::Disjoint => [(v(0, 0), v(1, 0)), (v(1, 1), v(2, 0)), (v(0, 1), v(2, 1))],
        MatchingArrangement::Aligned => [(v(0, 0), v(1, 0)), (v(1, 0), v(2, 0)), (v(0, 1), v(2, 1))],
    };
    Ok(complement_of(classes, &missing))
}

/// Products `(u, v, w)` to realise, from targets `(a, b, c)`.
struct Products {
    u: Rational,
    v: Rational,
    w: Rational,
}

/// Follows the chain from `w(A0) = x`. With `tight`, `A1` takes all of the
/// remaining class weight (six-vertex layout) and `w` is not matched.
fn weights_from(x: &Rational, p: &Products, tight: bool) -> Option<BaseWeights> {
    let one = Rational::one();
    let zero = Rational::zero();
    if x.is_negative() || *x > one {
        return None;
    }
    let ratio = |num: &Rational, den: &Rational| -> Option<Rational> {
        if den.is_zero() {
            num.is_zero().then(Rational::zero)
        } else {
            Some(num / den)
        }
    };
    let b0 = ratio(&p.u, x)?;
    if b0 > one {
        return None;
    }
    let b1 = &one - &b0;
    let c0 = ratio(&p.v, &b1)?;
    if c0 > one {
        return None;
    }
    let c1 = &one - &c0;
    let a1 = if tight { &one - x } else { ratio(&p.w, &c1)? };
    let slack = &one - x - &a1;
    if slack < zero {
        return None;
    }
    Some(BaseWeights {
        class0: vec![x.clone(), a1, slack],
        class1: vec![b0, b1],
        class2: vec![c0, c1],
    })
}

pub(crate) struct Base {
    pub weights: BaseWeights,
    pub graph: PartiteHypergraph,
    pub achieved: [Rational; 3],
}

fn within(achieved: &[Rational; 3], target: &[Rational; 3], tolerance: &Rational) -> bool {
    achieved.iter().zip(target).all(|(x, y)| (x - y).abs() <= *tolerance)
}

pub(crate) fn solve_base(a: &Rational, b: &Rational, c: &Rational, tolerance: &Rational, layout: BaseLayout) -> Result<Base> {
    if tolerance.is_negative() {
        return Err(Error::OutOfRange("tolerance must be non-negative".into()));
    }
    let verdict = check_pos_region(a, b, c)?;
    if !verdict.in_region {
        return Err(Error::Infeasible(format!(
            "({}, {}, {}) fails the region conditions: Delta = {}, ab+c>1: {}, ac+b>1: {}, bc+a>1: {}",
            format_rational(a),
            format_rational(b),
            format_rational(c),
            format_rational(&verdict.delta),
            verdict.ab_plus_c,
            verdict.ac_plus_b,
            verdict.bc_plus_a
        )));
    }
    let one = Rational::one();
    let p = Products {
        u: &one - c,
        v: &one - a,
        w: &one - b,
    };
    let target = [a.clone(), b.clone(), c.clone()];
    // bc + a > 1 forces a > 0
    let two_a = Rational::from_integer(BigInt::from(2)) * a;
    let m = a + b - c;
    let d = delta_unchecked(a, b, c);

    let finish = |weights: BaseWeights| {
        let achieved = weights.densities();
        Base {
            graph: weights.graph(),
            weights,
            achieved,
        }
    };

    if let Some(s) = rational::exact_sqrt(&d) {
        let roots = [(&m + &s) / &two_a, (&m - &s) / &two_a];
        return roots
            .iter()
            .find_map(|x| weights_from(x, &p, false))
            .map(finish)
            .ok_or_else(|| Error::Infeasible("no root of the weight quadratic yields valid weights".into()));
    }

    match layout {
        BaseLayout::Exact => {
            let mut precision = BigInt::from(1000);
            let s_lo = loop {
                let (lo, _) = rational::sqrt_bounds(&d, &precision);
                if lo.is_positive() {
                    break lo;
                }
                precision *= 1000;
            };
            let lo = ((&m - &s_lo) / &two_a).max(Rational::zero());
            let hi = (&m + &s_lo) / &two_a;
            if lo >= hi {
                return Err(Error::Infeasible("empty root interval".into()));
            }
            let x = rational::simplest_between(&lo, &hi);
            weights_from(&x, &p, false)
                .map(finish)
                .ok_or_else(|| Error::Infeasible(format!("weight {} inside the root interval is invalid", format_rational(&x))))
        }
        BaseLayout::SixVertex => {
            if tolerance.is_zero() {
                return Err(Error::Exactness {
                    quadratic: format!(
                        "{}*x^2 - ({})*x + {} with discriminant {}",
                        format_rational(a),
                        format_rational(&m),
                        format_rational(&(b * &p.u)),
                        format_rational(&d)
                    ),
                });
            }
            let den = BigInt::from(10).pow(6u32);
            let (s_lo, _) = rational::sqrt_bounds(&d, &(&den * 10));
            let den_q = Rational::from_integer(den.clone());
            let round = |x: Rational| (x * &den_q).round() / &den_q;
            let step = Rational::new(BigInt::one(), den);
            let mut candidates = Vec::new();
            for root in [(&m + &s_lo) / &two_a, (&m - &s_lo) / &two_a] {
                let x = round(root);
                candidates.push(&x - &step);
                candidates.push(&x + &step);
                candidates.push(x);
            }
            candidates.sort();
            candidates
                .into_iter()
                .filter_map(|x| weights_from(&x, &p, true))
                .map(finish)
                .filter(|base| within(&base.achieved, &target, tolerance))
                .min_by(|x, y| {
                    let err = |b: &Base| {
                        b.achieved
                            .iter()
                            .zip(&target)
                            .map(|(p, q)| (p - q).abs())
                            .max()
                            .expect("three entries")
                    };
                    err(x).cmp(&err(y))
                })
                .ok_or_else(|| {
                    Error::Infeasible(format!(
                        "no six-vertex weights with denominator <= 10^6 within tolerance {}",
                        format_rational(tolerance)
                    ))
                })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clique::clique_density;
    use crate::rational::{int, rat};

    #[test]
    fn three_quarters_gives_halves() {
        let q = rat(3, 4);
        let base = solve_base(&q, &q, &q, &int(0), BaseLayout::Exact).unwrap();
        let h = rat(1, 2);
        assert_eq!(base.weights.class0, vec![h.clone(), h.clone(), int(0)]);
        assert_eq!(base.weights.class1, vec![h.clone(), h.clone()]);
        assert_eq!(base.weights.class2, vec![h.clone(), h]);
        assert_eq!(base.graph.class_sizes(), vec![2, 2, 2]);
        assert_eq!(clique_density(&base.graph).unwrap().clique_density, rat(1, 4));
    }

    #[test]
    fn all_ones_is_complete_on_singletons() {
        let base = solve_base(&int(1), &int(1), &int(1), &int(0), BaseLayout::Exact).unwrap();
        assert_eq!(base.graph.class_sizes(), vec![1, 1, 1]);
        assert_eq!(base.graph.num_edges(), 3);
        assert_eq!(clique_density(&base.graph).unwrap().clique_density, int(1));
    }

    #[test]
    fn irrational_roots_use_slack_vertex() {
        // Delta(9/10, 9/10, 9/10) = 81/250 is not a square
        let a = rat(9, 10);
        let base = solve_base(&a, &a, &a, &int(0), BaseLayout::Exact).unwrap();
        assert_eq!(base.weights.class0, vec![rat(1, 2), rat(4, 35), rat(27, 70)]);
        assert_eq!(base.weights.class1, vec![rat(1, 5), rat(4, 5)]);
        assert_eq!(base.weights.class2, vec![rat(1, 8), rat(7, 8)]);
        assert_eq!(base.achieved, [a.clone(), a.clone(), a.clone()]);
        assert_eq!(base.graph.density_vector().unwrap().rho, vec![a.clone(), a.clone(), a]);
        assert_eq!(clique_density(&base.graph).unwrap().clique_density, rat(7, 10));
    }

    #[test]
    fn six_vertex_layout_needs_tolerance() {
        let a = rat(9, 10);
        match solve_base(&a, &a, &a, &int(0), BaseLayout::SixVertex) {
            Err(Error::Exactness { quadratic }) => assert!(quadratic.contains("9/10*x^2"), "{quadratic}"),
            other => panic!("{:?}", other.map(|b| b.weights)),
        }
        let tol = rat(1, 100_000);
        let base = solve_base(&a, &a, &a, &tol, BaseLayout::SixVertex).unwrap();
        assert!(base.weights.class0[2].is_zero());
        assert!(within(&base.achieved, &[a.clone(), a.clone(), a.clone()], &tol));
        assert_eq!(base.graph.density_vector().unwrap().rho, base.achieved.to_vec());
        let c = clique_density(&base.graph).unwrap().clique_density;
        assert_eq!(c, base.achieved.iter().sum::<Rational>() - int(2));
    }

    #[test]
    fn outside_region_is_infeasible() {
        let h = rat(1, 2);
        assert!(matches!(
            solve_base(&h, &h, &h, &int(0), BaseLayout::Exact),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn aligned_arrangement_breaks_identity() {
        let p = [rat(1, 2), rat(1, 3), rat(2, 5)];
        for (arr, tight) in [(MatchingArrangement::Disjoint, true), (MatchingArrangement::Aligned, false)] {
            let g = matching_complement_graph(&p, arr).unwrap();
            let bound = g.density_vector().unwrap().clique_lower_bound(2);
            let c = clique_density(&g).unwrap().clique_density;
            assert_eq!(c == bound, tight, "{arr:?}");
        }
        // excess is exactly w(A0) w(B0) w(C0)
        let g = matching_complement_graph(&p, MatchingArrangement::Aligned).unwrap();
        let bound = g.density_vector().unwrap().clique_lower_bound(2);
        assert_eq!(clique_density(&g).unwrap().clique_density - bound, rat(1, 15));
    }
}
