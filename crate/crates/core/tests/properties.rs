use num_traits::Zero;
use proptest::prelude::*;

use turan_core::blowup::{blow_up, minimal_scale, BlowUpScale, WeightMode};
use turan_core::clique::{
    clique_density, clique_density_with_witnesses, count_near_cliques, enumerate_transversal_edges, NearCliqueQuery,
};
use turan_core::degree::{is_strictly_balanced, neighbourhood, threshold_check, PartiteTuple};
use turan_core::extremal::{build_extremal, decaen_lift, matching_complement_graph, MatchingArrangement};
use turan_core::hypergraph::{class_subsets, for_each_tuple};
use turan_core::io;
use turan_core::rational::{int, rat, Rational};
use turan_core::search::oracle::{naive_clique_density, naive_density_vector, naive_near_clique_density};
use turan_core::search::{balanced_instance_generator, random_instance, random_plain_hypergraph, stream_rng};
use turan_core::{PartiteHypergraph, VertexId};

/// Random (r+1)-partite instance: r in 2..=3, classes of 1..=3 vertices,
/// optionally with weights of denominator at most 6.
fn instance() -> impl Strategy<Value = PartiteHypergraph> {
    (2usize..=3, any::<u64>(), 0.0f64..=1.0, any::<bool>()).prop_map(|(r, seed, p, weighted)| {
        let mut rng = stream_rng(seed, 0);
        let sizes: Vec<usize> = (0..=r).map(|_| rand::Rng::gen_range(&mut rng, 1..=3)).collect();
        random_instance(&mut rng, r, &sizes, p, weighted.then_some(6))
    })
}

fn unit_fraction() -> impl Strategy<Value = Rational> {
    (1i64..=40).prop_flat_map(|d| (1..d.max(2)).prop_map(move |n| rat(n, d.max(2))))
}

/// Partite r-sets not yet in `g`.
fn absent_edges(g: &PartiteHypergraph) -> Vec<Vec<VertexId>> {
    let sizes = g.class_sizes();
    let mut out = Vec::new();
    for subset in class_subsets(g.num_classes(), g.r()) {
        for_each_tuple(&subset, &sizes, |vs| {
            if !g.has_edge(vs) {
                out.push(vs.to_vec());
            }
        });
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig {
        failure_persistence: None,
        ..ProptestConfig::with_cases(200)
    })]

    #[test]
    fn densities_are_in_unit_interval(g in instance()) {
        for x in g.density_vector().unwrap().rho {
            prop_assert!(x >= int(0) && x <= int(1));
        }
        for e in g.edges() {
            let classes: Vec<usize> = e.classes().collect();
            prop_assert!(classes.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn naive_and_indexed_counters_agree(g in instance()) {
        prop_assert_eq!(g.density_vector().unwrap().rho, naive_density_vector(&g).unwrap());
        prop_assert_eq!(clique_density(&g).unwrap().clique_density, naive_clique_density(&g).unwrap());
        for k in 0..=g.r() + 1 {
            let q = NearCliqueQuery::new(k, g.r()).unwrap();
            prop_assert_eq!(
                count_near_cliques(&g, q, None).unwrap().clique_density,
                naive_near_clique_density(&g, k).unwrap()
            );
        }
    }

    #[test]
    fn lower_bound_holds(g in instance()) {
        let bound = g.density_vector().unwrap().clique_lower_bound(g.r());
        prop_assert!(clique_density(&g).unwrap().clique_density >= bound);
    }

    #[test]
    fn handshake_identity(g in instance()) {
        // sum over transversals of w(H) * #present r-subsets = sum_i rho(i) prod_j w(V_j)
        let sizes = g.class_sizes();
        let all: Vec<usize> = (0..g.num_classes()).collect();
        let mut lhs = Rational::zero();
        for_each_tuple(&all, &sizes, |t| {
            let present = enumerate_transversal_edges(&g, t).unwrap().iter().filter(|e| e.present).count();
            lhs += g.tuple_weight(t) * int(present as i64);
        });
        let total: Rational = (0..g.num_classes()).map(|c| g.class_weight(c)).product();
        prop_assert_eq!(lhs, g.density_vector().unwrap().sum() * total);
    }

    #[test]
    fn adding_an_edge_is_monotone(g in instance(), pick in any::<prop::sample::Index>()) {
        let absent = absent_edges(&g);
        prop_assume!(!absent.is_empty());
        let e = absent[pick.index(absent.len())].clone();
        let h = g.with_edge(e.clone()).unwrap();
        let t = g.num_classes();
        let missing = (0..t).find(|c| e.iter().all(|v| v.class != *c)).unwrap();
        let before = g.density_vector().unwrap().rho;
        let after = h.density_vector().unwrap().rho;
        let den: Rational = (0..t).filter(|&j| j != missing).map(|j| g.class_weight(j)).product();
        for i in 0..t {
            if i == missing {
                prop_assert_eq!(&after[i] - &before[i], g.tuple_weight(&e) / &den);
            } else {
                prop_assert_eq!(&after[i], &before[i]);
            }
        }
        for k in 0..=g.r() + 1 {
            let q = NearCliqueQuery::new(k, g.r()).unwrap();
            prop_assert!(
                count_near_cliques(&h, q, None).unwrap().clique_density
                    >= count_near_cliques(&g, q, None).unwrap().clique_density
            );
        }
    }

    #[test]
    fn blow_up_preserves_densities(g in instance(), mult in 1u64..=2, normalized in any::<bool>()) {
        let (scale, mode) = if normalized {
            (BlowUpScale::Global(mult), WeightMode::Normalized)
        } else {
            match minimal_scale(&g, true) {
                BlowUpScale::PerClass(v) => (BlowUpScale::PerClass(v.iter().map(|s| s * mult).collect()), WeightMode::Raw),
                other => (other, WeightMode::Raw),
            }
        };
        let h = blow_up(&g, &scale, mode).unwrap();
        prop_assert!(h.is_unit_weight());
        prop_assert_eq!(h.density_vector().unwrap(), g.density_vector().unwrap());
        prop_assert_eq!(clique_density(&h).unwrap().clique_density, clique_density(&g).unwrap().clique_density);
    }

    #[test]
    fn canonical_round_trip(g in instance()) {
        let text = io::to_string(&g);
        let back = io::from_str(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(io::to_string(&back), text);
    }

    #[test]
    fn witnesses_are_deterministic(g in instance()) {
        let a = clique_density_with_witnesses(&g, 5).unwrap();
        let b = clique_density_with_witnesses(&g, 5).unwrap();
        prop_assert_eq!(&a, &b);
        let w = a.witnesses.unwrap();
        let mut sorted = w.clone();
        sorted.sort();
        prop_assert_eq!(w, sorted);
    }

    #[test]
    fn disjoint_matching_is_tight(p in [unit_fraction(), unit_fraction(), unit_fraction()]) {
        let g = matching_complement_graph(&p, MatchingArrangement::Disjoint).unwrap();
        let bound = g.density_vector().unwrap().clique_lower_bound(2);
        prop_assert_eq!(clique_density(&g).unwrap().clique_density, bound.clone());
        let h = matching_complement_graph(&p, MatchingArrangement::Aligned).unwrap();
        let excess = &p[0] * &p[1] * &p[2];
        prop_assert_eq!(
            clique_density(&h).unwrap().clique_density - h.density_vector().unwrap().clique_lower_bound(2),
            excess
        );
    }

    #[test]
    fn construction_is_tight_and_sound(
        r in 2usize..=3,
        picks in prop::collection::vec(0usize..6, 4),
    ) {
        let values = [int(1), rat(19, 20), rat(9, 10), rat(7, 8), rat(5, 6), rat(4, 5)];
        let rho: Vec<Rational> = picks[..=r].iter().map(|&i| values[i].clone()).collect();
        match build_extremal(r, &rho, &int(0)) {
            Ok((g, recipe)) => {
                prop_assert_eq!(&g.density_vector().unwrap(), &recipe.achieved_densities);
                prop_assert_eq!(&recipe.achieved_densities.rho, &rho);
                let bound = recipe.achieved_densities.clique_lower_bound(r);
                prop_assert_eq!(clique_density(&g).unwrap().clique_density, bound);
                prop_assert_eq!(recipe.replay().unwrap(), g);
            }
            Err(e) => {
                // only refusals the preconditions allow
                let sum: Rational = rho.iter().sum();
                prop_assert!(sum < int(r as i64) || matches!(e, turan_core::Error::Infeasible(_)), "{}", e);
            }
        }
    }

    #[test]
    fn lift_is_balanced_and_faithful(seed in any::<u64>(), r in 2usize..=3, n in 2usize..=5, p in 0.1f64..1.0) {
        let mut rng = stream_rng(seed, 0);
        let g = random_plain_hypergraph(&mut rng, r, n, p);
        let h = decaen_lift(&g).unwrap();
        prop_assert!(is_strictly_balanced(&h, r - 1).unwrap().balanced);
        prop_assert_eq!(h.density_vector().unwrap().rho, vec![g.lift_density(); r + 1]);
        prop_assert_eq!(
            turan_core::clique::contains_clique(&h).unwrap().is_some(),
            g.find_clique().is_some()
        );
    }

    #[test]
    fn balance_verdict_matches_codegree_scan(g in instance(), seed in any::<u64>(), generated in any::<bool>()) {
        let g = if generated {
            balanced_instance_generator(g.r(), 2 + (seed % 3) as usize, seed)
        } else {
            g
        };
        let r = g.r();
        let sizes = g.class_sizes();
        let mut equal = true;
        for classes in class_subsets(r + 1, r - 1) {
            let others: Vec<usize> = (0..=r).filter(|c| !classes.contains(c)).collect();
            for_each_tuple(&classes, &sizes, |vs| {
                let t = PartiteTuple::new(vs.to_vec()).unwrap();
                let a = neighbourhood(&g, &t, &[others[0]]).unwrap().len();
                let b = neighbourhood(&g, &t, &[others[1]]).unwrap().len();
                equal &= a == b;
            });
        }
        let verdict = is_strictly_balanced(&g, r - 1).unwrap();
        prop_assert_eq!(verdict.balanced, equal);
        prop_assert!(!generated || equal);
    }
}

#[test]
fn overlapping_edges_form_a_degenerate_near_clique() {
    // two edges sharing an (r-1)-tuple are K_{r+1}^r minus r-1 edges
    for r in 2..=4 {
        let shared: Vec<VertexId> = (0..r - 1).map(|c| VertexId::new(c, 0)).collect();
        let mut e1 = shared.clone();
        e1.push(VertexId::new(r - 1, 0));
        let mut e2 = shared;
        e2.push(VertexId::new(r, 0));
        let g = PartiteHypergraph::unweighted(r, &vec![1; r + 1], vec![e1, e2]).unwrap();
        let cert = threshold_check(&g, r - 1).unwrap();
        assert!(cert.witness.is_some(), "r = {r}");
        assert!(threshold_check(&g, r - 2).unwrap().witness.is_none() || r == 2);
    }
}
