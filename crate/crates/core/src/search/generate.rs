use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::extremal::{decaen_lift, PlainHypergraph};
use crate::hypergraph::{class_subsets, for_each_tuple, Edge, PartiteHypergraph, VertexId};
use crate::rational::Rational;

/// Generator for instance `index` of the stream started by `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Positive rational `n/d` with `1 <= n <= d <= max_denominator`.
pub fn random_weight(rng: &mut impl Rng, max_denominator: u64) -> Rational {
    let d = rng.gen_range(1..=max_denominator.max(1));
    let n = rng.gen_range(1..=d);
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Each partite r-set over all class subsets is an edge with probability `p`.
pub fn random_instance(
    rng: &mut impl Rng,
    r: usize,
    sizes: &[usize],
    p: f64,
    max_denominator: Option<u64>,
) -> PartiteHypergraph {
    let classes: Vec<Vec<Rational>> = sizes
        .iter()
        .map(|&n| {
            (0..n)
                .map(|_| match max_denominator {
                    Some(d) => random_weight(rng, d),
                    None => Rational::from_integer(1.into()),
                })
                .collect()
        })
        .collect();
    let mut edges = Vec::new();
    for subset in class_subsets(sizes.len(), r) {
        for_each_tuple(&subset, sizes, |vs| {
            if rng.gen_bool(p) {
                edges.push(Edge::from_sorted(vs.to_vec()));
            }
        });
    }
    PartiteHypergraph::from_canonical(r, classes, edges)
}

/// Random simple r-graph on `n` vertices, each r-set an edge with probability `p`.
pub fn random_plain_hypergraph(rng: &mut impl Rng, r: usize, n: usize, p: f64) -> PlainHypergraph {
    let edges = class_subsets(n, r).into_iter().filter(|_| rng.gen_bool(p)).collect();
    PlainHypergraph { r, n, edges }
}

/// Strictly balanced (r+1)-partite instance with `class_size` vertices per
/// class. By `seed % 3`: a lift of a random r-graph, the complete graph, or
/// the union of two lifts on `n1 + n2 = class_size` vertices placed side by
/// side in every class.
pub fn balanced_instance_generator(r: usize, class_size: usize, seed: u64) -> PartiteHypergraph {
    let mut rng = stream_rng(seed, 0);
    let class_size = class_size.max(1);
    match seed % 3 {
        1 => PartiteHypergraph::complete_unweighted(r, &vec![class_size; r + 1]).expect("valid shape"),
        2 if class_size >= 2 => {
            let n1 = rng.gen_range(1..class_size);
            let p1 = rng.gen_range(0.2..1.0);
            let p2 = rng.gen_range(0.2..1.0);
            let g1 = decaen_lift(&random_plain_hypergraph(&mut rng, r, n1, p1)).expect("simple");
            let g2 = decaen_lift(&random_plain_hypergraph(&mut rng, r, class_size - n1, p2)).expect("simple");
            let shifted = g2.edges().iter().map(|e| {
                Edge::from_sorted(e.vertices().iter().map(|v| VertexId::new(v.class, v.local + n1)).collect())
            });
            let edges = g1.edges().iter().cloned().chain(shifted).collect();
            PartiteHypergraph::from_canonical(r, crate::hypergraph::unit_classes(&vec![class_size; r + 1]), edges)
        }
        _ => {
            let p = rng.gen_range(0.2..1.0);
            decaen_lift(&random_plain_hypergraph(&mut rng, r, class_size, p)).expect("simple")
        }
    }
}
