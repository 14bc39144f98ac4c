//! Empirical relative frequencies and distribution functions over a scale.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scale::RatingScale;

/// Relative frequencies `f_r` and the empirical CDF `F(r)` for `r = 1..=m`.
///
/// Index `r - 1` holds category `r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyTable {
    freqs: Vec<f64>,
    cdf: Vec<f64>,
    n: usize,
}

const SUM_TOL: f64 = 1e-12;

impl FrequencyTable {
    /// Builds a table from category counts (`counts[r - 1]` for category `r`).
    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        let n: u64 = counts.iter().sum();
        if n == 0 {
            return Err(Error::Domain(
                "frequency table needs at least one observation".into(),
            ));
        }
        let freqs: Vec<f64> = counts.iter().map(|&c| c as f64 / n as f64).collect();
        Ok(Self::build(freqs, n as usize))
    }

    /// Builds a table from ratings in `1..=m`.
    pub fn from_ratings(ratings: &[u32], scale: &RatingScale) -> Result<Self> {
        let mut counts = vec![0u64; scale.len()];
        for &r in ratings {
            if !scale.contains(r) {
                return Err(Error::Domain(format!(
                    "rating {r} outside 1..={}",
                    scale.categories()
                )));
            }
            counts[(r - 1) as usize] += 1;
        }
        Self::from_counts(&counts)
    }

    /// Builds a table from theoretical or reference relative frequencies.
    /// `n` is the nominal sample size carried along for reporting.
    pub fn from_freqs(freqs: &[f64], n: usize) -> Result<Self> {
        if freqs.iter().any(|f| !f.is_finite() || *f < 0.0) {
            return Err(Error::Domain(
                "frequencies must be finite and non-negative".into(),
            ));
        }
        let total: f64 = freqs.iter().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::Domain(format!(
                "frequencies sum to {total}, expected 1"
            )));
        }
        Ok(Self::build(freqs.to_vec(), n))
    }

    fn build(freqs: Vec<f64>, n: usize) -> Self {
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = freqs
            .iter()
            .map(|f| {
                acc += f;
                acc
            })
            .collect();
        // F(m) is 1 by definition; drop the accumulated rounding.
        if let Some(last) = cdf.last_mut() {
            *last = 1.0;
        }
        Self { freqs, cdf, n }
    }

    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    pub fn cdf_values(&self) -> &[f64] {
        &self.cdf
    }

    /// Relative frequency of category `r` (1-based).
    pub fn freq(&self, r: u32) -> f64 {
        self.freqs[(r - 1) as usize]
    }

    /// Empirical CDF at category `r` (1-based); `F(0) = 0`.
    pub fn cdf(&self, r: u32) -> f64 {
        if r == 0 {
            0.0
        } else {
            self.cdf[(r - 1) as usize]
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn categories(&self) -> usize {
        self.freqs.len()
    }

    /// Sample mean rating.
    pub fn mean(&self) -> f64 {
        self.freqs
            .iter()
            .enumerate()
            .map(|(i, f)| (i + 1) as f64 * f)
            .sum()
    }

    pub(crate) fn check_scale(&self, scale: &RatingScale) -> Result<()> {
        if self.categories() != scale.len() {
            return Err(Error::Domain(format!(
                "frequency table has {} categories, scale has {}",
                self.categories(),
                scale.len()
            )));
        }
        Ok(())
    }
}
