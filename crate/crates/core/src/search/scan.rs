use num_bigint::BigUint;
use num_traits::{Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::clique::clique_density;
use crate::error::{Error, Result};
use crate::hypergraph::{class_subsets, for_each_tuple, unit_classes, Edge, PartiteHypergraph};
use crate::rational::{self, Rational};

use super::generate::{random_instance, stream_rng};
use super::oracle::{naive_clique_density, naive_density_vector};

pub const DEFAULT_BUDGET: u64 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SearchMode {
    Exhaustive,
    Random { seed: u64, trials: u64 },
    /// Exhaustive, restricted to instances with `rho(i) >= targets[i]` for all i.
    Constrained {
        #[serde(with = "rational::serde_str_vec")]
        targets: Vec<Rational>,
    },
}

/// Which random trials get random vertex weights.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightScheme {
    Unit,
    Weighted,
    /// Odd-numbered trials are weighted.
    #[default]
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchSpace {
    pub r: usize,
    pub class_sizes: Vec<usize>,
    pub mode: SearchMode,
    pub budget: u64,
    pub weights: WeightScheme,
    pub max_denominator: u64,
    /// Fixed edge probability; by default each trial draws one from `[1/2, 1)`.
    pub edge_probability: Option<f64>,
    /// Worker threads; 0 uses the rayon default.
    pub jobs: usize,
}

impl SearchSpace {
    pub fn new(r: usize, class_sizes: Vec<usize>, mode: SearchMode) -> Self {
        Self {
            r,
            class_sizes,
            mode,
            budget: DEFAULT_BUDGET,
            weights: WeightScheme::default(),
            max_denominator: 8,
            edge_probability: None,
            jobs: 0,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.r < 2 {
            return Err(Error::OutOfRange(format!("uniformity r = {} must be at least 2", self.r)));
        }
        if self.class_sizes.len() != self.r + 1 {
            return Err(Error::Shape {
                expected: self.r + 1,
                found: self.class_sizes.len(),
            });
        }
        if self.class_sizes.contains(&0) {
            return Err(Error::OutOfRange("class sizes must be positive".into()));
        }
        if let Some(p) = self.edge_probability {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::OutOfRange(format!("edge probability {p} not in [0, 1]")));
            }
        }
        Ok(())
    }

    /// Number of partite r-sets.
    pub fn possible_edges(&self) -> usize {
        class_subsets(self.r + 1, self.r)
            .iter()
            .map(|cs| cs.iter().map(|&c| self.class_sizes[c]).product::<usize>())
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub index: u64,
    #[serde(with = "rational::serde_str")]
    pub clique_density: Rational,
    #[serde(with = "rational::serde_str")]
    pub lower_bound: Rational,
    pub instance: PartiteHypergraph,
}

/// The naive oracle and the main engine disagreed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub index: u64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub r: usize,
    pub class_sizes: Vec<usize>,
    pub instances_checked: u64,
    /// Minimum of `C - (sum(rho) - r)`; absent when nothing was checked.
    #[serde(with = "rational::serde_str_opt")]
    pub min_slack: Option<Rational>,
    pub argmin_index: Option<u64>,
    pub argmin_instance: Option<PartiteHypergraph>,
    /// Instances with slack exactly 0.
    pub tight_instances: u64,
    pub violations: Vec<Violation>,
    pub cross_validation_mismatches: Vec<Mismatch>,
}

impl BoundReport {
    fn empty(space: &SearchSpace) -> Self {
        Self {
            r: space.r,
            class_sizes: space.class_sizes.clone(),
            instances_checked: 0,
            min_slack: None,
            argmin_index: None,
            argmin_instance: None,
            tight_instances: 0,
            violations: Vec::new(),
            cross_validation_mismatches: Vec::new(),
        }
    }

    /// No violations and no oracle disagreement.
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.cross_validation_mismatches.is_empty()
    }

    /// Appends a later chunk; on equal slack the earlier instance is kept.
    fn merge(mut self, other: Self) -> Self {
        self.instances_checked += other.instances_checked;
        self.tight_instances += other.tight_instances;
        let better = match (&self.min_slack, &other.min_slack) {
            (_, None) => false,
            (None, Some(_)) => true,
            (Some(a), Some(b)) => b < a,
        };
        if better {
            self.min_slack = other.min_slack;
            self.argmin_index = other.argmin_index;
            self.argmin_instance = other.argmin_instance;
        }
        self.violations.extend(other.violations);
        self.cross_validation_mismatches.extend(other.cross_validation_mismatches);
        self
    }

    fn record(&mut self, index: u64, g: &PartiteHypergraph) -> Result<()> {
        let r = g.r();
        let rho = naive_density_vector(g)?;
        let c = naive_clique_density(g)?;
        let bound: Rational = rho.iter().sum::<Rational>() - Rational::from_integer(r.into());
        let slack = &c - &bound;

        let engine_rho = g.density_vector()?.rho;
        let engine_c = clique_density(g)?.clique_density;
        if engine_rho != rho || engine_c != c {
            self.cross_validation_mismatches.push(Mismatch {
                index,
                detail: format!(
                    "naive C = {}, engine C = {}; naive rho = {:?}, engine rho = {:?}",
                    rational::format_rational(&c),
                    rational::format_rational(&engine_c),
                    rho.iter().map(rational::format_rational).collect::<Vec<_>>(),
                    engine_rho.iter().map(rational::format_rational).collect::<Vec<_>>()
                ),
            });
        }

        self.instances_checked += 1;
        if slack.is_zero() {
            self.tight_instances += 1;
        }
        if slack.is_negative() {
            self.violations.push(Violation {
                index,
                clique_density: c,
                lower_bound: bound,
                instance: g.clone(),
            });
        }
        if self.min_slack.as_ref().is_none_or(|m| slack < *m) {
            self.min_slack = Some(slack);
            self.argmin_index = Some(index);
            self.argmin_instance = Some(g.clone());
        }
        Ok(())
    }
}

/// Splits `0..total` into `parts` contiguous ranges, runs them in parallel
/// and merges the reports in range order.
fn run_chunked<F>(space: &SearchSpace, total: u64, f: F) -> Result<BoundReport>
where
    F: Fn(u64, &mut BoundReport) -> Result<()> + Sync,
{
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(space.jobs)
        .build()
        .map_err(|e| Error::OutOfRange(format!("thread pool: {e}")))?;
    let parts = (pool.current_num_threads() as u64 * 4).clamp(1, total.max(1));
    let chunk = total.div_ceil(parts);
    let reports: Vec<Result<BoundReport>> = pool.install(|| {
        (0..parts)
            .into_par_iter()
            .map(|p| {
                let mut report = BoundReport::empty(space);
                for i in (p * chunk)..((p + 1) * chunk).min(total) {
                    f(i, &mut report)?;
                }
                Ok(report)
            })
            .collect()
    });
    reports
        .into_iter()
        .try_fold(BoundReport::empty(space), |acc, r| Ok(acc.merge(r?)))
}

/// Every unit-weight instance on the given class sizes, checked with the
/// naive oracle and cross-checked against the main engine.
pub fn exhaustive_bound_scan(space: &SearchSpace) -> Result<BoundReport> {
    space.validate()?;
    let targets = match &space.mode {
        SearchMode::Exhaustive => None,
        SearchMode::Constrained { targets } => {
            if targets.len() != space.r + 1 {
                return Err(Error::Shape {
                    expected: space.r + 1,
                    found: targets.len(),
                });
            }
            Some(targets)
        }
        SearchMode::Random { .. } => {
            return Err(Error::OutOfRange("exhaustive scan needs exhaustive or constrained mode".into()))
        }
    };
    let m = space.possible_edges();
    let required = BigUint::from(1u8) << m;
    if required > BigUint::from(space.budget) {
        return Err(Error::Budget {
            required: required.to_string(),
            budget: space.budget.to_string(),
        });
    }
    let mut all = Vec::with_capacity(m);
    for subset in class_subsets(space.r + 1, space.r) {
        for_each_tuple(&subset, &space.class_sizes, |vs| all.push(Edge::from_sorted(vs.to_vec())));
    }
    let classes = unit_classes(&space.class_sizes);
    run_chunked(space, 1u64 << m, |mask, report| {
        let edges = all
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, e)| e.clone())
            .collect();
        let g = PartiteHypergraph::from_canonical(space.r, classes.clone(), edges);
        if let Some(t) = targets {
            let rho = naive_density_vector(&g)?;
            if rho.iter().zip(t).any(|(x, y)| x < y) {
                return Ok(());
            }
        }
        report.record(mask, &g)
    })
}

/// Seeded random instances. Trial `i` draws from its own generator stream,
/// so results do not depend on `jobs`.
pub fn random_bound_scan(space: &SearchSpace) -> Result<BoundReport> {
    space.validate()?;
    let SearchMode::Random { seed, trials } = space.mode else {
        return Err(Error::OutOfRange("random scan needs random mode".into()));
    };
    run_chunked(space, trials, |trial, report| {
        let mut rng = stream_rng(seed, trial);
        let p = space.edge_probability.unwrap_or_else(|| rng.gen_range(0.5..1.0));
        let weighted = match space.weights {
            WeightScheme::Unit => false,
            WeightScheme::Weighted => true,
            WeightScheme::Mixed => trial % 2 == 1,
        };
        let g = random_instance(
            &mut rng,
            space.r,
            &space.class_sizes,
            p,
            weighted.then_some(space.max_denominator),
        );
        report.record(trial, &g)
    })
}
