//! Maximum-likelihood fitting of CUB models by Expectation-Maximization.
//!
//! The E-step gives each category the posterior probability that a rating
//! came from the shifted Binomial component,
//! `tau_r = pi b_r(xi) / (pi b_r(xi) + (1 - pi) / m)`.
//! The M-step is closed form:
//! `pi = sum tau / n` and `xi = sum tau (m - r) / ((m - 1) sum tau)`.
//! Both updates maximize a function that is concave in each parameter, so
//! confining them to `[PARAM_FLOOR, 1 - PARAM_FLOOR]` keeps the ascent.

use serde::{Deserialize, Serialize};

use super::{
    category_counts, log_likelihood_counts, preliminary_pi, shifted_binomial_pmf, CubParams,
};
use crate::error::{Error, Result};
use crate::freq::FrequencyTable;
use crate::scale::RatingScale;

const PARAM_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmOptions {
    /// Stop once the absolute log-likelihood change drops below this.
    pub tolerance: f64,
    pub max_iter: usize,
}

impl Default for EmOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-6,
            max_iter: 500,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub params: CubParams,
    pub loglik: f64,
    /// Number of M-steps taken.
    pub iterations: usize,
    pub converged: bool,
    /// Log-likelihood at the starting point followed by one entry per iteration.
    pub loglik_trace: Vec<f64>,
}

/// Starting values for EM: `xi` from the sample mean, `pi` from the
/// heterogeneity relation evaluated at that `xi`.
pub fn moment_init(freq: &FrequencyTable, scale: &RatingScale) -> CubParams {
    let m = f64::from(scale.categories());
    let xi = ((m - freq.mean()) / (m - 1.0)).clamp(0.01, 0.99);
    let pi = preliminary_pi(freq, scale, xi)
        .map(|p| p.clamp(0.05, 0.95))
        .unwrap_or(0.5);
    CubParams { pi, xi }
}

fn clamp_param(v: f64) -> f64 {
    v.clamp(PARAM_FLOOR, 1.0 - PARAM_FLOOR)
}

/// Fits a CUB model to ratings in `1..=m`.
pub fn fit_em(ratings: &[u32], scale: &RatingScale, opts: &EmOptions) -> Result<FitResult> {
    fit_em_counts(&category_counts(ratings, scale)?, scale, opts)
}

/// Fits a CUB model to (possibly fractional) category counts.
pub fn fit_em_counts(counts: &[f64], scale: &RatingScale, opts: &EmOptions) -> Result<FitResult> {
    if counts.len() != scale.len() {
        return Err(Error::Domain(format!(
            "expected {} category counts, got {}",
            scale.len(),
            counts.len()
        )));
    }
    if counts.iter().any(|c| !c.is_finite() || *c < 0.0) {
        return Err(Error::Domain(
            "category counts must be finite and non-negative".into(),
        ));
    }
    if opts.tolerance.is_nan() || opts.tolerance <= 0.0 {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {}",
            opts.tolerance
        )));
    }
    let distinct = counts.iter().filter(|&&c| c > 0.0).count();
    if distinct < 2 {
        return Err(Error::DegenerateData(format!(
            "need at least 2 distinct observed categories, found {distinct}"
        )));
    }

    let n: f64 = counts.iter().sum();
    let m = scale.categories();
    let uniform = 1.0 / f64::from(m);
    let freq = FrequencyTable::from_freqs(
        &counts.iter().map(|c| c / n).collect::<Vec<_>>(),
        n.round() as usize,
    )
    .or_else(|_| {
        // Renormalize when the division above drifts past the sum tolerance.
        let raw: Vec<f64> = counts.iter().map(|c| c / n).collect();
        let s: f64 = raw.iter().sum();
        FrequencyTable::from_freqs(
            &raw.iter().map(|f| f / s).collect::<Vec<_>>(),
            n.round() as usize,
        )
    })?;

    let init = moment_init(&freq, scale);
    let mut params = CubParams {
        pi: clamp_param(init.pi),
        xi: clamp_param(init.xi),
    };
    let mut loglik = log_likelihood_counts(counts, scale, params)?;
    let mut trace = vec![loglik];
    let mut converged = false;
    let mut iterations = 0;

    while iterations < opts.max_iter {
        let b = shifted_binomial_pmf(scale, params.xi)?;
        let mut tau_total = 0.0;
        let mut tau_weighted = 0.0;
        for (r0, (&c, &br)) in counts.iter().zip(&b).enumerate() {
            if c == 0.0 {
                continue;
            }
            let binom = params.pi * br;
            let tau = binom / (binom + (1.0 - params.pi) * uniform);
            tau_total += c * tau;
            tau_weighted += c * tau * f64::from(m - 1 - r0 as u32);
        }
        if !(tau_total.is_finite() && tau_weighted.is_finite()) {
            return Err(Error::Numerical(
                "non-finite posterior weights in E-step".into(),
            ));
        }
        let pi = clamp_param(tau_total / n);
        let xi = if tau_total > 0.0 {
            clamp_param(tau_weighted / (f64::from(m - 1) * tau_total))
        } else {
            params.xi
        };
        params = CubParams { pi, xi };
        iterations += 1;

        let next = log_likelihood_counts(counts, scale, params)?;
        trace.push(next);
        let delta = (next - loglik).abs();
        loglik = next;
        if delta < opts.tolerance {
            converged = true;
            break;
        }
    }

    Ok(FitResult {
        params,
        loglik,
        iterations,
        converged,
        loglik_trace: trace,
    })
}
