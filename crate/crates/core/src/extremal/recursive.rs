//! Constructions meeting `C(G) = sum(rho) - r` for r >= 3 by induction on r.
//!
//! With densities sorted in descending order, build `H1` for the first r
//! densities at uniformity r-1 and blow it up to unit weights. Add a new
//! class holding one apex vertex of weight 1 and extend every edge of `H1`
//! by the apex. Among the first r classes, every r-tuple that is not a
//! clique of `H1` can be added without creating a new clique; these go in
//! first, then clique tuples in lexicographic order until `rho(r)` is met.
//! Each clique tuple added creates exactly one clique transversal, which is
//! what makes the bound tight.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::blowup::{blow_up_by, multiplicities, BlowUpScale, WeightMode};
use crate::clique::clique_flags;
use crate::error::{Error, Result};
use crate::hypergraph::{for_each_tuple, DensityVector, Edge, PartiteHypergraph, VertexId};
use crate::rational::{self, format_rational, Rational};

use super::base::{solve_base, BaseLayout, BaseWeights};
use super::delta::check_pos_region;

/// Largest transversal count a recursion level may reach.
pub const MAX_TRANSVERSALS: u64 = 1 << 26;

/// One recursion step, building a graph of uniformity `r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub r: usize,
    /// Extra per-class clone factor applied after normalizing `H1` to
    /// primitive integer weights, so that the edge target is integral.
    pub blow_up_scales: Vec<u64>,
    /// Class sizes of the unit-weight `H1`.
    pub class_sizes: Vec<usize>,
    /// Non-clique r-tuples added (all of them).
    pub complement_edges: u64,
    /// Clique r-tuples added, lexicographically first.
    pub clique_edges: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionRecipe {
    pub r: usize,
    pub target_densities: DensityVector,
    #[serde(with = "rational::serde_str")]
    pub tolerance: Rational,
    pub layout: BaseLayout,
    /// `class_order[k]` is the input class holding the k-th largest density.
    pub class_order: Vec<usize>,
    /// Weights of the r = 2 base, in sorted class order.
    pub base_weights: BaseWeights,
    pub levels: Vec<LevelRecord>,
    pub achieved_densities: DensityVector,
}

impl ConstructionRecipe {
    /// Rebuilds the graph from the recorded targets and checks that every
    /// recorded step comes out the same.
    pub fn replay(&self) -> Result<PartiteHypergraph> {
        let (g, again) = if self.class_order.len() == 3 && self.levels.is_empty() && self.r == 2 && self.is_identity() {
            build_tripartite_base_with(
                &self.target_densities.rho[0],
                &self.target_densities.rho[1],
                &self.target_densities.rho[2],
                &self.tolerance,
                self.layout,
            )?
        } else {
            build_extremal_with(self.r, &self.target_densities.rho, &self.tolerance, self.layout)?
        };
        if again != *self {
            return Err(Error::InvalidGraph("recipe does not replay to the recorded construction".into()));
        }
        Ok(g)
    }

    fn is_identity(&self) -> bool {
        self.class_order.iter().enumerate().all(|(k, &c)| k == c)
    }
}

/// The r = 2 base for targets `(a, b, c) = (rho(0), rho(1), rho(2))`.
pub fn build_tripartite_base(a: &Rational, b: &Rational, c: &Rational, tolerance: &Rational) -> Result<(PartiteHypergraph, ConstructionRecipe)> {
    build_tripartite_base_with(a, b, c, tolerance, BaseLayout::Exact)
}

pub fn build_tripartite_base_with(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    tolerance: &Rational,
    layout: BaseLayout,
) -> Result<(PartiteHypergraph, ConstructionRecipe)> {
    let base = solve_base(a, b, c, tolerance, layout)?;
    let recipe = ConstructionRecipe {
        r: 2,
        target_densities: DensityVector::new(vec![a.clone(), b.clone(), c.clone()])?,
        tolerance: tolerance.clone(),
        layout,
        class_order: vec![0, 1, 2],
        base_weights: base.weights,
        levels: Vec::new(),
        achieved_densities: DensityVector::new(base.achieved.to_vec())?,
    };
    Ok((base.graph, recipe))
}

/// Graph with `C(G) = sum(achieved) - r` and achieved densities equal to
/// `rho` (exact layout) or within `tolerance` of it.
pub fn build_extremal(r: usize, rho: &[Rational], tolerance: &Rational) -> Result<(PartiteHypergraph, ConstructionRecipe)> {
    build_extremal_with(r, rho, tolerance, BaseLayout::Exact)
}

pub fn build_extremal_with(
    r: usize,
    rho: &[Rational],
    tolerance: &Rational,
    layout: BaseLayout,
) -> Result<(PartiteHypergraph, ConstructionRecipe)> {
    if r < 2 {
        return Err(Error::OutOfRange(format!("uniformity r = {r} must be at least 2")));
    }
    if rho.len() != r + 1 {
        return Err(Error::Shape {
            expected: r + 1,
            found: rho.len(),
        });
    }
    let target = DensityVector::new(rho.to_vec())?;
    let excess = target.clique_lower_bound(r);
    if excess < Rational::zero() {
        return Err(Error::OutOfRegime {
            excess: format_rational(&excess),
        });
    }
    let mut order: Vec<usize> = (0..=r).collect();
    order.sort_by(|&i, &j| rho[j].cmp(&rho[i]).then(i.cmp(&j)));
    let sorted: Vec<Rational> = order.iter().map(|&i| rho[i].clone()).collect();
    let verdict = check_pos_region(&sorted[0], &sorted[1], &sorted[2])?;
    if !verdict.in_region {
        return Err(Error::Infeasible(format!(
            "top three densities ({}, {}, {}) fail the region conditions",
            format_rational(&sorted[0]),
            format_rational(&sorted[1]),
            format_rational(&sorted[2])
        )));
    }

    let mut levels = Vec::new();
    let (g, base_weights, achieved) = build_sorted(r, &sorted, tolerance, layout, &mut levels)?;
    let mut inverse = vec![0; r + 1];
    for (k, &c) in order.iter().enumerate() {
        inverse[c] = k;
    }
    let g = g.permute_classes(&inverse);
    let achieved = inverse.iter().map(|&k| achieved[k].clone()).collect();
    let recipe = ConstructionRecipe {
        r,
        target_densities: target,
        tolerance: tolerance.clone(),
        layout,
        class_order: order,
        base_weights,
        levels,
        achieved_densities: DensityVector::new(achieved)?,
    };
    Ok((g, recipe))
}

fn build_sorted(
    r: usize,
    sorted: &[Rational],
    tolerance: &Rational,
    layout: BaseLayout,
    levels: &mut Vec<LevelRecord>,
) -> Result<(PartiteHypergraph, BaseWeights, Vec<Rational>)> {
    if r == 2 {
        let base = solve_base(&sorted[0], &sorted[1], &sorted[2], tolerance, layout)?;
        return Ok((base.graph, base.weights, base.achieved.to_vec()));
    }
    let (h1, base_weights, mut achieved) = build_sorted(r - 1, &sorted[..r], tolerance, layout, levels)?;

    let mut mult = multiplicities(&h1, &BlowUpScale::Global(1), WeightMode::Normalized)?;
    let sizes: Vec<usize> = mult.iter().map(|m| m.iter().sum()).collect();
    let n: BigUint = sizes.iter().map(|&s| BigUint::from(s)).product();
    let need = &sorted[r] * Rational::from_integer(n.clone().into());
    let extra = need.denom().to_u64().filter(|&e| e <= MAX_TRANSVERSALS);
    let total = extra.map(|e| &n * e).filter(|t| *t <= BigUint::from(MAX_TRANSVERSALS));
    let (extra, total) = match (extra, total) {
        (Some(e), Some(t)) => (e, t.to_usize().expect("bounded")),
        _ => {
            return Err(Error::ScaleLimit {
                required: (&n * need.denom().magnitude()).to_string(),
                scale: need.denom().to_string(),
                limit: MAX_TRANSVERSALS.to_string(),
            })
        }
    };
    for m in &mut mult[0] {
        *m *= extra as usize;
    }
    let mut scales = vec![1u64; r];
    scales[0] = extra;
    let h1 = blow_up_by(&h1, &mult);
    let sizes = h1.class_sizes();
    let need = (need * Rational::from_integer(extra.into()))
        .to_integer()
        .to_usize()
        .expect("bounded by transversal count");

    let flags = clique_flags(&h1)?;
    let non_cliques = flags.iter().filter(|&&f| !f).count();
    if need < non_cliques {
        let excess: Rational = achieved.iter().sum::<Rational>() + &sorted[r] - Rational::from_integer(r.into());
        return Err(Error::OutOfRegime {
            excess: format_rational(&excess),
        });
    }
    let clique_edges = need - non_cliques;

    let apex = VertexId::new(r, 0);
    let mut edges: Vec<Edge> = h1
        .edges()
        .iter()
        .map(|e| {
            let mut vs = e.vertices().to_vec();
            vs.push(apex);
            Edge::from_sorted(vs)
        })
        .collect();
    let first: Vec<usize> = (0..r).collect();
    let mut tuples = Vec::with_capacity(need);
    let mut idx = 0;
    let mut cliques_left = clique_edges;
    // flags are in the same lexicographic order as for_each_tuple
    let mut clique_tuples = Vec::new();
    for_each_tuple(&first, &sizes, |vs| {
        if !flags[idx] {
            tuples.push(Edge::from_sorted(vs.to_vec()));
        } else if cliques_left > 0 {
            cliques_left -= 1;
            clique_tuples.push(Edge::from_sorted(vs.to_vec()));
        }
        idx += 1;
    });
    debug_assert_eq!(idx, total);
    edges.extend(tuples);
    edges.extend(clique_tuples);

    let mut classes = h1.classes().to_vec();
    classes.push(vec![Rational::from_integer(1.into())]);
    let g = PartiteHypergraph::from_canonical(r, classes, edges);

    achieved.push(Rational::new(need.into(), total.into()));
    levels.push(LevelRecord {
        r,
        blow_up_scales: scales,
        class_sizes: sizes,
        complement_edges: non_cliques as u64,
        clique_edges: clique_edges as u64,
    });
    Ok((g, base_weights, achieved))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clique::{clique_density, contains_clique};
    use crate::rational::{int, rat};

    fn uniform(r: usize, x: Rational) -> Vec<Rational> {
        vec![x; r + 1]
    }

    #[test]
    fn nine_tenths_at_r3() {
        let (g, recipe) = build_extremal(3, &uniform(3, rat(9, 10)), &int(0)).unwrap();
        assert_eq!(recipe.achieved_densities.rho, uniform(3, rat(9, 10)));
        assert_eq!(g.density_vector().unwrap(), recipe.achieved_densities);
        assert_eq!(clique_density(&g).unwrap().clique_density, rat(3, 5));
        assert_eq!(recipe.levels.len(), 1);
        assert_eq!(recipe.levels[0].class_sizes, vec![70, 5, 8]);
    }

    #[test]
    fn three_quarters_at_r3_is_clique_free() {
        let (g, recipe) = build_extremal(3, &uniform(3, rat(3, 4)), &int(0)).unwrap();
        assert_eq!(g.density_vector().unwrap().rho, uniform(3, rat(3, 4)));
        assert!(contains_clique(&g).unwrap().is_none());
        assert_eq!(recipe.levels[0].clique_edges, 0);
    }

    #[test]
    fn r2_matches_base() {
        let (g, _) = build_extremal(2, &uniform(2, rat(3, 4)), &int(0)).unwrap();
        assert_eq!(clique_density(&g).unwrap().clique_density, rat(1, 4));
    }

    #[test]
    fn unsorted_targets_are_restored() {
        let rho = vec![rat(4, 5), int(1), rat(9, 10), rat(17, 20)];
        let (g, recipe) = build_extremal(3, &rho, &int(0)).unwrap();
        assert_eq!(recipe.class_order, vec![1, 2, 3, 0]);
        assert_eq!(g.density_vector().unwrap().rho, rho);
        let sum: Rational = rho.iter().sum();
        assert_eq!(clique_density(&g).unwrap().clique_density, sum - int(3));
    }

    #[test]
    fn integrality_scale_recorded() {
        // base (1,1,1) is three singletons; 1/3 of one transversal needs 3 clones
        let rho = vec![int(1), int(1), int(1), rat(1, 3)];
        let (g, recipe) = build_extremal(3, &rho, &int(0)).unwrap();
        assert_eq!(recipe.levels[0].blow_up_scales, vec![3, 1, 1]);
        assert_eq!(g.density_vector().unwrap().rho, rho);
        assert_eq!(clique_density(&g).unwrap().clique_density, rat(1, 3));
    }

    #[test]
    fn refuses_below_regime() {
        let err = build_extremal(3, &uniform(3, rat(1, 2)), &int(0)).unwrap_err();
        assert!(matches!(err, Error::OutOfRegime { ref excess } if excess == "-1"), "{err}");
        assert!(matches!(build_extremal(3, &uniform(2, int(1)), &int(0)), Err(Error::Shape { .. })));
    }

    #[test]
    fn replay_is_deterministic() {
        let (g, recipe) = build_extremal(4, &uniform(4, rat(4, 5)), &int(0)).unwrap();
        assert_eq!(recipe.replay().unwrap(), g);
        let json = serde_json::to_string(&recipe).unwrap();
        let back: ConstructionRecipe = serde_json::from_str(&json).unwrap();
        assert_eq!(back, recipe);

        let (g, recipe) = build_tripartite_base(&rat(9, 10), &int(1), &rat(7, 8), &int(0)).unwrap();
        assert_eq!(recipe.replay().unwrap(), g);
    }
}
