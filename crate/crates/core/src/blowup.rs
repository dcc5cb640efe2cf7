//! Blow-ups: replace each vertex by unit-weight clones and each edge by all
//! transversal combinations of the clones. Densities and the clique density
//! are preserved exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Edge, PartiteHypergraph, VertexId};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlowUpScale {
    Global(u64),
    PerClass(Vec<u64>),
}

impl BlowUpScale {
    fn for_class(&self, class: usize) -> u64 {
        match self {
            Self::Global(s) => *s,
            Self::PerClass(v) => v[class],
        }
    }
}

/// How vertex weights become clone counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMode {
    /// `w(v) * scale` clones; must be an integer.
    #[default]
    Raw,
    /// Each class is first rescaled to its primitive integer weight vector
    /// (smallest positive integers proportional to the weights), then each
    /// vertex gets `integer weight * scale` clones. Always integral.
    Normalized,
}

/// Per-class multipliers turning raw weights into coprime integers.
fn normalizers(g: &PartiteHypergraph) -> Vec<Rational> {
    g.classes()
        .iter()
        .map(|ws| {
            let l = rational::lcm_of_denominators(ws);
            let lq = Rational::from_integer(l);
            let g = ws
                .iter()
                .map(|w| (w * &lq).to_integer())
                .fold(BigInt::zero(), |acc, n| acc.gcd(&n));
            lq / Rational::from_integer(g)
        })
        .collect()
}

/// Smallest scale for which a raw-mode blow-up is integral.
pub fn minimal_scale(g: &PartiteHypergraph, per_class: bool) -> BlowUpScale {
    let per: Vec<BigInt> = g
        .classes()
        .iter()
        .map(rational::lcm_of_denominators)
        .collect();
    let to_u64 = |b: &BigInt| b.to_u64().unwrap_or(u64::MAX);
    if per_class {
        BlowUpScale::PerClass(per.iter().map(to_u64).collect())
    } else {
        let all = per.iter().fold(BigInt::one(), |acc, d| acc.lcm(d));
        BlowUpScale::Global(to_u64(&all))
    }
}

/// Clone counts per vertex, or the scale error.
pub fn multiplicities(
    g: &PartiteHypergraph,
    scale: &BlowUpScale,
    mode: WeightMode,
) -> Result<Vec<Vec<usize>>> {
    if let BlowUpScale::PerClass(v) = scale {
        if v.len() != g.num_classes() {
            return Err(Error::OutOfRange(format!(
                "{} class scales given for {} classes",
                v.len(),
                g.num_classes()
            )));
        }
    }
    let norm = match mode {
        WeightMode::Raw => vec![Rational::one(); g.num_classes()],
        WeightMode::Normalized => normalizers(g),
    };
    let mut out = Vec::with_capacity(g.num_classes());
    for (c, ws) in g.classes().iter().enumerate() {
        let s = scale.for_class(c);
        if s == 0 {
            return Err(Error::OutOfRange("blow-up scale must be positive".into()));
        }
        let factor = &norm[c] * Rational::from_integer(BigInt::from(s));
        let mut counts = Vec::with_capacity(ws.len());
        for w in ws {
            let m = w * &factor;
            if !m.is_integer() {
                let minimal = minimal_scale(g, matches!(scale, BlowUpScale::PerClass(_)));
                return Err(Error::Scale {
                    minimal: match minimal {
                        BlowUpScale::Global(s) => s.to_string(),
                        BlowUpScale::PerClass(v) => format!("{v:?}"),
                    },
                });
            }
            let m = m
                .to_integer()
                .to_usize()
                .ok_or_else(|| Error::OutOfRange("blow-up too large".into()))?;
            counts.push(m);
        }
        out.push(counts);
    }
    Ok(out)
}

/// Unit-weight blow-up. Clones of a vertex are consecutive, in vertex order.
pub fn blow_up(g: &PartiteHypergraph, scale: &BlowUpScale, mode: WeightMode) -> Result<PartiteHypergraph> {
    let mult = multiplicities(g, scale, mode)?;
    Ok(blow_up_by(g, &mult))
}

pub(crate) fn blow_up_by(g: &PartiteHypergraph, mult: &[Vec<usize>]) -> PartiteHypergraph {
    let offsets: Vec<Vec<usize>> = mult
        .iter()
        .map(|counts| {
            counts
                .iter()
                .scan(0usize, |acc, &m| {
                    let start = *acc;
                    *acc += m;
                    Some(start)
                })
                .collect()
        })
        .collect();
    let sizes: Vec<usize> = mult.iter().map(|c| c.iter().sum()).collect();
    let classes = sizes.iter().map(|&n| vec![Rational::one(); n]).collect();
    let mut edges = Vec::new();
    for e in g.edges() {
        let ranges: Vec<(usize, usize, usize)> = e
            .vertices()
            .iter()
            .map(|v| (v.class, offsets[v.class][v.local], mult[v.class][v.local]))
            .collect();
        let mut idx = vec![0usize; ranges.len()];
        'odometer: loop {
            edges.push(Edge::from_sorted(
                ranges
                    .iter()
                    .zip(&idx)
                    .map(|(&(c, start, _), &i)| VertexId::new(c, start + i))
                    .collect(),
            ));
            let mut p = idx.len();
            loop {
                if p == 0 {
                    break 'odometer;
                }
                p -= 1;
                idx[p] += 1;
                if idx[p] < ranges[p].2 {
                    break;
                }
                idx[p] = 0;
            }
        }
    }
    PartiteHypergraph::from_canonical(g.r(), classes, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn scale_one_on_unit_graph_is_identity() {
        let g = PartiteHypergraph::complete_unweighted(2, &[2, 1, 3]).unwrap();
        let h = blow_up(&g, &BlowUpScale::Global(1), WeightMode::Raw).unwrap();
        assert_eq!(h, g);
    }

    #[test]
    fn single_half_weight_vertex_becomes_two() {
        let g = PartiteHypergraph::empty(2, vec![vec![rat(1, 2)], vec![int(1)], vec![int(1)]]).unwrap();
        let h = blow_up(&g, &BlowUpScale::Global(2), WeightMode::Normalized).unwrap();
        assert_eq!(h.class_sizes(), vec![2, 2, 2]);
        // raw mode: 1/2 * 2 = 1 clone
        let h = blow_up(&g, &BlowUpScale::Global(2), WeightMode::Raw).unwrap();
        assert_eq!(h.class_sizes(), vec![1, 2, 2]);
    }

    #[test]
    fn raw_scale_error_reports_minimum() {
        let g = PartiteHypergraph::empty(2, vec![vec![rat(1, 2)], vec![rat(2, 3)], vec![int(1)]]).unwrap();
        match blow_up(&g, &BlowUpScale::Global(4), WeightMode::Raw) {
            Err(Error::Scale { minimal }) => assert_eq!(minimal, "6"),
            other => panic!("{other:?}"),
        }
        match blow_up(&g, &BlowUpScale::PerClass(vec![2, 2, 1]), WeightMode::Raw) {
            Err(Error::Scale { minimal }) => assert_eq!(minimal, "[2, 3, 1]"),
            other => panic!("{other:?}"),
        }
        assert!(blow_up(&g, &BlowUpScale::Global(0), WeightMode::Raw).is_err());
    }

    #[test]
    fn edges_become_all_clone_combinations() {
        let g = PartiteHypergraph::new(
            2,
            vec![vec![int(2)], vec![int(3)], vec![int(1)]],
            vec![vec![VertexId::new(0, 0), VertexId::new(1, 0)]],
        )
        .unwrap();
        let h = blow_up(&g, &BlowUpScale::Global(1), WeightMode::Raw).unwrap();
        assert_eq!(h.class_sizes(), vec![2, 3, 1]);
        assert_eq!(h.num_edges(), 6);
        assert_eq!(h.density_vector().unwrap(), g.density_vector().unwrap());
    }

    #[test]
    fn normalized_uses_primitive_integers() {
        let g = PartiteHypergraph::empty(2, vec![vec![rat(2, 6), rat(4, 6)], vec![int(5), int(10)], vec![int(1)]])
            .unwrap();
        let m = multiplicities(&g, &BlowUpScale::Global(1), WeightMode::Normalized).unwrap();
        assert_eq!(m, vec![vec![1, 2], vec![1, 2], vec![1]]);
    }
}
