use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, int, rat, Rational};

fn check_inputs(a: &Rational, b: &Rational, c: &Rational) -> Result<()> {
    for (name, v) in [("a", a), ("b", b), ("c", c)] {
        if !rational::in_unit_interval(v) {
            return Err(Error::OutOfRange(format!(
                "{name} = {} is not in [0, 1]",
                rational::format_rational(v)
            )));
        }
    }
    Ok(())
}

pub(crate) fn delta_unchecked(a: &Rational, b: &Rational, c: &Rational) -> Rational {
    a * a + b * b + c * c - int(2) * (a * b + a * c + b * c) + int(4) * a * b * c
}

/// `a² + b² + c² − 2ab − 2ac − 2bc + 4abc`.
pub fn delta(a: &Rational, b: &Rational, c: &Rational) -> Result<Rational> {
    check_inputs(a, b, c)?;
    Ok(delta_unchecked(a, b, c))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosVerdict {
    #[serde(with = "rational::serde_str")]
    pub delta: Rational,
    #[serde(with = "rational::serde_str")]
    pub sum: Rational,
    pub delta_nonnegative: bool,
    /// `ab + c > 1`
    pub ab_plus_c: bool,
    /// `ac + b > 1`
    pub ac_plus_b: bool,
    /// `bc + a > 1`
    pub bc_plus_a: bool,
    /// All four conditions.
    pub in_region: bool,
    /// `a + b + c >= 9/4`
    pub sum_at_least_nine_quarters: bool,
}

pub fn check_pos_region(a: &Rational, b: &Rational, c: &Rational) -> Result<PosVerdict> {
    check_inputs(a, b, c)?;
    let one = Rational::one();
    let d = delta_unchecked(a, b, c);
    let sum = a + b + c;
    let delta_nonnegative = d >= Rational::zero();
    let ab_plus_c = a * b + c > one;
    let ac_plus_b = a * c + b > one;
    let bc_plus_a = b * c + a > one;
    Ok(PosVerdict {
        in_region: delta_nonnegative && ab_plus_c && ac_plus_b && bc_plus_a,
        sum_at_least_nine_quarters: sum >= rat(9, 4),
        delta: d,
        sum,
        delta_nonnegative,
        ab_plus_c,
        ac_plus_b,
        bc_plus_a,
    })
}
