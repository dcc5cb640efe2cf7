use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::clique::clique_density;
use crate::error::{Error, Result};
use crate::extremal::build_extremal;
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TightnessRow {
    #[serde(with = "rational::serde_str_vec")]
    pub rho: Vec<Rational>,
    #[serde(with = "rational::serde_str_vec")]
    pub achieved: Vec<Rational>,
    #[serde(rename = "C", with = "rational::serde_str_opt")]
    pub clique_density: Option<Rational>,
    #[serde(with = "rational::serde_str_opt")]
    pub lower_bound: Option<Rational>,
    #[serde(with = "rational::serde_str_opt")]
    pub slack: Option<Rational>,
    pub vertices: Option<usize>,
    /// Why the point was skipped.
    pub note: Option<String>,
}

impl TightnessRow {
    pub fn is_tight(&self) -> bool {
        self.slack.as_ref().is_some_and(Zero::is_zero)
    }
}

/// Builds each grid point and measures `C - (sum(achieved) - r)`. Points
/// the construction refuses are kept with a note.
pub fn tightness_probe(r: usize, grid: &[Vec<Rational>]) -> Result<Vec<TightnessRow>> {
    let zero = Rational::zero();
    let mut rows = Vec::with_capacity(grid.len());
    for rho in grid {
        let row = match build_extremal(r, rho, &zero) {
            Ok((g, recipe)) => {
                let bound = recipe.achieved_densities.clique_lower_bound(r);
                let achieved = recipe.achieved_densities.rho;
                let c = clique_density(&g)?.clique_density;
                TightnessRow {
                    rho: rho.clone(),
                    slack: Some(&c - &bound),
                    achieved,
                    clique_density: Some(c),
                    lower_bound: Some(bound),
                    vertices: Some(g.num_vertices()),
                    note: None,
                }
            }
            Err(e @ (Error::OutOfRegime { .. } | Error::Infeasible(_) | Error::ScaleLimit { .. })) => TightnessRow {
                rho: rho.clone(),
                achieved: Vec::new(),
                clique_density: None,
                lower_bound: None,
                slack: None,
                vertices: None,
                note: Some(e.to_string()),
            },
            Err(e) => return Err(e),
        };
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn probe_examples() {
        let rows = tightness_probe(3, &[vec![rat(9, 10); 4], vec![rat(1, 2); 4]]).unwrap();
        assert!(rows[0].is_tight());
        assert_eq!(rows[0].clique_density, Some(rat(3, 5)));
        assert!(rows[1].note.as_deref().unwrap().contains("-1"));
        assert!(!rows[1].is_tight());

        let rows = tightness_probe(2, &[vec![rat(3, 4); 3]]).unwrap();
        assert_eq!(rows[0].clique_density, Some(rat(1, 4)));
        let rows = tightness_probe(4, &[vec![rat(4, 5); 5]]).unwrap();
        assert!(rows[0].is_tight());
        assert_eq!(rows[0].clique_density, Some(int(0)));
    }
}
