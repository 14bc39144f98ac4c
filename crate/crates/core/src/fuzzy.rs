//! Intuitionistic fuzzy profiles of a single item.
//!
//! Two membership functions are provided. The classic one spreads the
//! relative frequencies of the non-negative categories between `l_b` and
//! `u_b`. The CUB-adjusted one scales every update by the fitted `pi`,
//! pins the indifference point at `(1 - pi) / m` and normalizes over the
//! non-crisp positive categories only; it comes with a mirrored
//! non-membership function. Uncertainty is the residual `1 - mu - nu`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freq::FrequencyTable;
use crate::scale::RatingScale;

const IFS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Frequency-based membership, no non-membership.
    Zani,
    /// CUB-adjusted membership and non-membership.
    CubIfs,
}

/// What to do when a recursion block has categories but no observed mass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroMassPolicy {
    /// Zero increments; the profile jumps at the crisp bound and a flag is set.
    #[default]
    Flat,
    Error,
}

/// Degrees for every category plus whether a zero-mass block was flattened.
#[derive(Debug, Clone, PartialEq)]
pub struct Degrees {
    pub values: Vec<f64>,
    pub flattened: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzyProfile {
    pub item_id: String,
    pub variant: Variant,
    /// Set for [`Variant::CubIfs`] only.
    pub pi_hat: Option<f64>,
    pub mu: Vec<f64>,
    pub nu: Vec<f64>,
    pub u: Vec<f64>,
    /// The positive intermediate block had no mass.
    pub flat_membership: bool,
    /// The negative intermediate block had no mass.
    pub flat_nonmembership: bool,
}

impl FuzzyProfile {
    /// `(mu, nu)` at rating `r` (1-based).
    pub fn degrees(&self, r: u32) -> (f64, f64) {
        let i = (r - 1) as usize;
        (self.mu[i], self.nu[i])
    }

    pub fn uncertainty_at(&self, r: u32) -> f64 {
        self.u[(r - 1) as usize]
    }

    pub fn categories(&self) -> usize {
        self.mu.len()
    }
}

fn check_pi(pi_hat: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&pi_hat) {
        return Err(Error::Domain(format!(
            "pi_hat must lie in [0, 1], got {pi_hat}"
        )));
    }
    Ok(())
}

/// Classic frequency-based membership.
///
/// `mu(r) = 0` for `r <= l_b`, `mu(r) = mu(r-1) + f_r / (1 - F(l_b))` for
/// `l_b < r < u_b`, and `mu(r) = 1` for `r >= u_b`.
pub fn membership_zani(freq: &FrequencyTable, scale: &RatingScale) -> Result<Vec<f64>> {
    freq.check_scale(scale)?;
    let (lb, ub) = (scale.lower(), scale.upper());
    // 1 - F(l_b), summed directly; keeps mu <= 1.
    let denom: f64 = ((lb + 1)..=scale.categories()).map(|r| freq.freq(r)).sum();
    if denom <= 0.0 {
        return Err(Error::DegenerateInput(format!(
            "no observed mass above l_b = {lb}; membership is undefined"
        )));
    }
    let mut mu = vec![0.0; scale.len()];
    let mut acc = 0.0;
    for r in (lb + 1)..ub {
        acc += freq.freq(r);
        mu[(r - 1) as usize] = (acc / denom).min(1.0);
    }
    for r in ub..=scale.categories() {
        mu[(r - 1) as usize] = 1.0;
    }
    Ok(mu)
}

/// CUB-adjusted membership.
///
/// `mu(r) = 0` below the indifference point, `mu(i_p) = (1 - pi) / m`,
/// `mu(r) = mu(r-1) + pi f_r / (F(u_b-1) - F(i_p))` for `i_p < r < u_b`,
/// and `mu(r) = 1` from `u_b` on. The recursion telescopes to
/// `mu(u_b - 1) = pi + (1 - pi) / m` whatever the data.
pub fn membership_cub(
    freq: &FrequencyTable,
    scale: &RatingScale,
    pi_hat: f64,
    policy: ZeroMassPolicy,
) -> Result<Degrees> {
    freq.check_scale(scale)?;
    scale.check_symmetric()?;
    check_pi(pi_hat)?;
    let m = scale.categories();
    let (ip, ub) = (scale.indifference(), scale.upper());
    let base = (1.0 - pi_hat) / f64::from(m);

    let mut mu = vec![0.0; scale.len()];
    mu[(ip - 1) as usize] = base;
    let block: Vec<u32> = ((ip + 1)..ub).collect();
    let flattened = spread(&mut mu, freq, &block, base, pi_hat, policy, || {
        format!(
            "F(u_b - 1) = F(i_p): categories {}..{} carry no mass",
            ip + 1,
            ub - 1
        )
    })?;
    for r in ub..=m {
        mu[(r - 1) as usize] = 1.0;
    }
    Ok(Degrees {
        values: mu,
        flattened,
    })
}

/// CUB-adjusted non-membership, the mirror of [`membership_cub`].
///
/// `nu(r) = 0` above the indifference point, `nu(i_p) = (1 - pi) / m`,
/// `nu(r) = nu(r+1) + pi f_r / (F(l_b) - F(1))` for `1 < r <= l_b`, and
/// `nu(1) = 1`. The chain is anchored at `nu(i_p)`.
pub fn nonmembership_cub(
    freq: &FrequencyTable,
    scale: &RatingScale,
    pi_hat: f64,
    policy: ZeroMassPolicy,
) -> Result<Degrees> {
    freq.check_scale(scale)?;
    scale.check_symmetric()?;
    check_pi(pi_hat)?;
    let m = scale.categories();
    let (ip, lb) = (scale.indifference(), scale.lower());
    let base = (1.0 - pi_hat) / f64::from(m);

    let mut nu = vec![0.0; scale.len()];
    nu[(ip - 1) as usize] = base;
    let block: Vec<u32> = (2..=lb).rev().collect();
    let flattened = spread(&mut nu, freq, &block, base, pi_hat, policy, || {
        format!("F(l_b) = F(1): categories 2..{lb} carry no mass")
    })?;
    nu[0] = 1.0;
    Ok(Degrees {
        values: nu,
        flattened,
    })
}

/// Walks `block` in order, setting each category to `base` plus `pi_hat`
/// times the share of block mass seen so far. The block normalizer is the
/// sum of the same frequencies, so the last category lands on
/// `base + pi_hat` exactly. Returns whether a massless block was flattened.
fn spread(
    degrees: &mut [f64],
    freq: &FrequencyTable,
    block: &[u32],
    base: f64,
    pi_hat: f64,
    policy: ZeroMassPolicy,
    describe: impl FnOnce() -> String,
) -> Result<bool> {
    let total: f64 = block.iter().map(|&r| freq.freq(r)).sum();
    let mut flattened = false;
    if !block.is_empty() && pi_hat > 0.0 && total <= 0.0 {
        match policy {
            ZeroMassPolicy::Error => return Err(Error::DegenerateNormalization(describe())),
            ZeroMassPolicy::Flat => flattened = true,
        }
    }
    let mut seen = 0.0;
    for &r in block {
        seen += freq.freq(r);
        let share = if total > 0.0 { seen / total } else { 0.0 };
        degrees[(r - 1) as usize] = (base + pi_hat * share).min(1.0);
    }
    Ok(flattened)
}

/// Residual indeterminacy `u(r) = 1 - mu(r) - nu(r)`.
pub fn uncertainty_profile(mu: &[f64], nu: &[f64]) -> Result<Vec<f64>> {
    if mu.len() != nu.len() {
        return Err(Error::Domain(format!(
            "membership has {} categories, non-membership {}",
            mu.len(),
            nu.len()
        )));
    }
    mu.iter()
        .zip(nu)
        .enumerate()
        .map(|(i, (&a, &b))| {
            let sum = a + b;
            if sum > 1.0 + IFS_TOL || a < 0.0 || b < 0.0 {
                return Err(Error::IfsConsistency {
                    category: i as u32 + 1,
                    sum,
                });
            }
            Ok((1.0 - sum).max(0.0))
        })
        .collect()
}

/// Builds a complete profile for one item. `pi_hat` is required for
/// [`Variant::CubIfs`] and ignored for [`Variant::Zani`].
pub fn build_profile(
    item_id: &str,
    freq: &FrequencyTable,
    scale: &RatingScale,
    variant: Variant,
    pi_hat: Option<f64>,
    policy: ZeroMassPolicy,
) -> Result<FuzzyProfile> {
    let build = || -> Result<FuzzyProfile> {
        match variant {
            Variant::Zani => {
                let mu = membership_zani(freq, scale)?;
                let nu = vec![0.0; mu.len()];
                let u = uncertainty_profile(&mu, &nu)?;
                Ok(FuzzyProfile {
                    item_id: item_id.to_string(),
                    variant,
                    pi_hat: None,
                    mu,
                    nu,
                    u,
                    flat_membership: false,
                    flat_nonmembership: false,
                })
            }
            Variant::CubIfs => {
                let pi = pi_hat.ok_or_else(|| {
                    Error::Domain("the CUB variant needs an estimate of pi".into())
                })?;
                let mu = membership_cub(freq, scale, pi, policy)?;
                let nu = nonmembership_cub(freq, scale, pi, policy)?;
                let u = uncertainty_profile(&mu.values, &nu.values)?;
                Ok(FuzzyProfile {
                    item_id: item_id.to_string(),
                    variant,
                    pi_hat: Some(pi),
                    mu: mu.values,
                    nu: nu.values,
                    u,
                    flat_membership: mu.flattened,
                    flat_nonmembership: nu.flattened,
                })
            }
        }
    };
    build().map_err(|e| e.for_item(item_id))
}
