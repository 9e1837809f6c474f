//! Guaranteed profit fractions of the greedy k-pass algorithm, evaluated
//! exactly.
//!
//! `P_gamma(1) = 1 / (3 gamma)` and
//! `P_gamma(k) = (3 gamma k^2 - (3 gamma + 1) k + 1) / (3 gamma k^2) * P_gamma(k - 1) + 1 / (3 gamma k)`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ratio::{decimal_preview, int, Ratio};

pub const PREVIEW_PLACES: usize = 4;

/// Guaranteed fraction of the k-vehicle optimum for a trimmed-window solver
/// with sub-optimality `gamma`.
pub fn p_gamma(k: u64, gamma: &Ratio) -> Result<Ratio> {
    Ok(p_gamma_sequence(k, gamma)?.pop().expect("k >= 1"))
}

/// `[P_gamma(1), ..., P_gamma(k)]`.
pub fn p_gamma_sequence(k: u64, gamma: &Ratio) -> Result<Vec<Ratio>> {
    if k < 1 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if gamma < &Ratio::one() {
        return Err(Error::InvalidArgument("gamma must be at least 1".into()));
    }
    let three_gamma = gamma * int(3);
    let mut values = Vec::with_capacity(k as usize);
    let mut value = Ratio::one() / &three_gamma;
    values.push(value.clone());
    for step in 2..=k {
        let k = Ratio::from_integer(step.into());
        let k2 = &k * &k;
        let coefficient =
            (&three_gamma * &k2 - (&three_gamma + int(1)) * &k + int(1)) / (&three_gamma * &k2);
        value = coefficient * value + Ratio::one() / (&three_gamma * &k);
        values.push(value.clone());
    }
    Ok(values)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuaranteeRow {
    pub k: u64,
    pub gamma: Ratio,
    pub value: Ratio,
    pub decimal_preview: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GuaranteeTable {
    pub rows: Vec<GuaranteeRow>,
}

/// One row per (k, gamma), k-major in input order.
pub fn bounds_table(ks: &[u64], gammas: &[Ratio]) -> Result<GuaranteeTable> {
    let mut rows = Vec::with_capacity(ks.len() * gammas.len());
    for &k in ks {
        for gamma in gammas {
            let value = p_gamma(k, gamma)?;
            rows.push(GuaranteeRow {
                k,
                gamma: gamma.clone(),
                decimal_preview: decimal_preview(&value, PREVIEW_PLACES),
                value,
            });
        }
    }
    Ok(GuaranteeTable { rows })
}

/// Whether the greedy guarantee beats the `1 / (3 gamma + 1)` baseline.
pub fn beats_baseline(k: u64, gamma: &Ratio) -> Result<bool> {
    let baseline = Ratio::one() / (gamma * int(3) + int(1));
    Ok(p_gamma(k, gamma)? > baseline)
}

/// Recurrence specialised to gamma = 1: step coefficient `(3k^2 - 4k + 1) / (3k^2)`.
pub fn p_tree(k: u64) -> Result<Ratio> {
    if k < 1 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let mut value = Ratio::new(1.into(), 3.into());
    for step in 2..=k as i64 {
        let k2 = step * step;
        value = Ratio::new((3 * k2 - 4 * step + 1).into(), (3 * k2).into()) * value
            + Ratio::new(1.into(), (3 * step).into());
    }
    debug_assert!(!value.is_zero());
    Ok(value)
}
