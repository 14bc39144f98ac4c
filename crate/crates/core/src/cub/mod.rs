//! CUB models: a mixture of a shifted Binomial (feeling) and a discrete
//! Uniform (uncertainty) over the categories `1..=m`.
//!
//! `Pr(R = r) = pi * b_r(xi) + (1 - pi) / m`, with
//! `b_r(xi) = C(m-1, r-1) xi^(m-r) (1-xi)^(r-1)`.
//!
//! Lower `xi` moves mass toward the top of the scale, so `1 - xi` reads as
//! feeling. `1 - pi` is the weight of the Uniform component.

mod em;
mod sample;

pub use em::{fit_em, fit_em_counts, moment_init, EmOptions, FitResult};
pub use sample::{sample, sample_stream, sample_with_rng};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freq::FrequencyTable;
use crate::scale::RatingScale;

/// CUB parameters: `pi` weights the shifted Binomial, `xi` is its parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubParams {
    pub pi: f64,
    pub xi: f64,
}

impl CubParams {
    pub fn new(pi: f64, xi: f64) -> Result<Self> {
        let p = Self { pi, xi };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_unit("pi", self.pi)?;
        check_unit("xi", self.xi)
    }

    /// Weight of the Uniform component, `1 - pi`.
    pub fn uncertainty_share(&self) -> f64 {
        1.0 - self.pi
    }

    /// `1 - xi`.
    pub fn feeling(&self) -> f64 {
        1.0 - self.xi
    }
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::Domain(format!("{name} must lie in [0, 1], got {v}")));
    }
    Ok(())
}

/// Binomial coefficient as f64, exact for the scale sizes used here.
fn binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// Shifted Binomial pmf `b_r(xi)` for `r = 1..=m`.
pub fn shifted_binomial_pmf(scale: &RatingScale, xi: f64) -> Result<Vec<f64>> {
    check_unit("xi", xi)?;
    let m = scale.categories();
    Ok((1..=m)
        .map(|r| binomial(m - 1, r - 1) * xi.powi((m - r) as i32) * (1.0 - xi).powi((r - 1) as i32))
        .collect())
}

/// CUB pmf for `r = 1..=m`.
pub fn cub_pmf(scale: &RatingScale, params: CubParams) -> Result<Vec<f64>> {
    params.validate()?;
    let uniform = 1.0 / f64::from(scale.categories());
    Ok(shifted_binomial_pmf(scale, params.xi)?
        .into_iter()
        .map(|b| params.pi * b + (1.0 - params.pi) * uniform)
        .collect())
}

/// Mean rating under the CUB model.
pub fn cub_mean(scale: &RatingScale, params: CubParams) -> Result<f64> {
    Ok(cub_pmf(scale, params)?
        .iter()
        .enumerate()
        .map(|(i, p)| (i + 1) as f64 * p)
        .sum())
}

/// `1 - G` for a probability vector, computed as `(m * sum f^2 - 1) / (m - 1)`
/// to avoid cancellation near the uniform distribution.
fn gini_complement(freqs: &[f64]) -> f64 {
    let m = freqs.len() as f64;
    let sq: f64 = freqs.iter().map(|f| f * f).sum();
    ((m * sq - 1.0) / (m - 1.0)).max(0.0)
}

fn gini_of(freqs: &[f64]) -> f64 {
    let m = freqs.len() as f64;
    let sq: f64 = freqs.iter().map(|f| f * f).sum();
    m / (m - 1.0) * (1.0 - sq)
}

/// Normalized Gini heterogeneity `m/(m-1) * (1 - sum f_r^2)`: 0 for a
/// degenerate distribution, 1 for the uniform one.
pub fn gini_index(freq: &FrequencyTable, scale: &RatingScale) -> Result<f64> {
    freq.check_scale(scale)?;
    Ok(gini_of(freq.freqs()))
}

/// Preliminary estimate of `pi` from the heterogeneity relation
/// `G_cub = 1 - pi^2 (1 - G_sb)`, given a feeling value `xi`.
///
/// Exact on theoretical CUB frequencies. Biased on real data, so fits
/// report the ML estimate instead.
pub fn preliminary_pi(freq: &FrequencyTable, scale: &RatingScale, xi: f64) -> Result<f64> {
    freq.check_scale(scale)?;
    if !(xi > 0.0 && xi < 1.0) {
        return Err(Error::Domain(format!("xi must lie in (0, 1), got {xi}")));
    }
    let sb = shifted_binomial_pmf(scale, xi)?;
    let sb_complement = gini_complement(&sb);
    if sb_complement <= 1e-12 {
        return Err(Error::Estimation(format!(
            "shifted Binomial with xi={xi} is indistinguishable from uniform (G_sb = {})",
            gini_of(&sb)
        )));
    }
    let ratio = gini_complement(freq.freqs()) / sb_complement;
    Ok(ratio.sqrt().clamp(0.0, 1.0))
}

/// Log-likelihood from category counts.
pub fn log_likelihood_counts(
    counts: &[f64],
    scale: &RatingScale,
    params: CubParams,
) -> Result<f64> {
    let pmf = cub_pmf(scale, params)?;
    let mut ll = 0.0;
    for (i, (&c, &p)) in counts.iter().zip(&pmf).enumerate() {
        if c == 0.0 {
            continue;
        }
        if p <= 0.0 {
            return Err(Error::Numerical(format!(
                "category {} observed but has zero probability under pi={}, xi={}",
                i + 1,
                params.pi,
                params.xi
            )));
        }
        ll += c * p.ln();
    }
    if !ll.is_finite() {
        return Err(Error::Numerical(format!("non-finite log-likelihood {ll}")));
    }
    Ok(ll)
}

pub(crate) fn category_counts(ratings: &[u32], scale: &RatingScale) -> Result<Vec<f64>> {
    let mut counts = vec![0.0; scale.len()];
    for &r in ratings {
        if !scale.contains(r) {
            return Err(Error::Domain(format!(
                "rating {r} outside 1..={}",
                scale.categories()
            )));
        }
        counts[(r - 1) as usize] += 1.0;
    }
    Ok(counts)
}

/// Sum of `ln Pr(R = r_j)` over the observations.
pub fn log_likelihood(ratings: &[u32], scale: &RatingScale, params: CubParams) -> Result<f64> {
    log_likelihood_counts(&category_counts(ratings, scale)?, scale, params)
}
