//! Item weighting and intuitionistic weighted averaging.
//!
//! Item weights are the normalized logged inverses of fuzzy proportions
//! `g_k`, the mean membership (or uncertainty) of item `k` over the
//! respondents. Each respondent's profile degrees are averaged with those
//! weights, and the respondent pairs are then averaged with equal weights
//! into the final membership, non-membership and uncertainty scores.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuzzy::FuzzyProfile;
use crate::survey::RatingMatrix;

/// Bounds applied to degenerate fuzzy proportions in clamped mode.
pub const PROPORTION_FLOOR: f64 = 1e-6;

/// Which profile function the fuzzy proportions average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMode {
    MembershipProportions,
    UncertaintyProportions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MissingPolicy {
    /// Drop respondents with any missing rating from aggregation.
    #[default]
    Listwise,
    /// Fail on the first respondent with a missing rating.
    Strict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightVector {
    pub weights: Vec<f64>,
    pub mode: WeightMode,
}

/// A proportion moved into `[PROPORTION_FLOOR, 1 - PROPORTION_FLOOR]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClampedProportion {
    pub index: usize,
    pub original: f64,
    pub clamped: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IfsPair {
    pub mu: f64,
    pub nu: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreTriple {
    pub mu_bar: f64,
    pub nu_bar: f64,
    pub u_bar: f64,
}

impl ScoreTriple {
    pub fn new(mu_bar: f64, nu_bar: f64) -> Self {
        Self {
            mu_bar,
            nu_bar,
            u_bar: 1.0 - mu_bar - nu_bar,
        }
    }
}

fn check_shapes(profiles: &[FuzzyProfile], matrix: &RatingMatrix) -> Result<()> {
    if profiles.len() != matrix.k() {
        return Err(Error::Domain(format!(
            "{} profiles for {} items",
            profiles.len(),
            matrix.k()
        )));
    }
    for (p, item) in profiles.iter().zip(matrix.items()) {
        if &p.item_id != item {
            return Err(Error::Domain(format!(
                "profile `{}` does not match item `{item}`",
                p.item_id
            )));
        }
        if p.categories() != matrix.scale().len() {
            return Err(Error::Domain(format!(
                "profile `{}` has {} categories, scale has {}",
                p.item_id,
                p.categories(),
                matrix.scale().len()
            )));
        }
    }
    Ok(())
}

/// Mean membership (or uncertainty) per item over the respondents with a
/// complete row.
pub fn fuzzy_proportions(
    profiles: &[FuzzyProfile],
    matrix: &RatingMatrix,
    mode: WeightMode,
) -> Result<Vec<f64>> {
    check_shapes(profiles, matrix)?;
    let mut sums = vec![0.0; profiles.len()];
    let mut n = 0usize;
    for (_, row) in matrix.complete_rows() {
        n += 1;
        for ((sum, p), &r) in sums.iter_mut().zip(profiles).zip(&row) {
            *sum += match mode {
                WeightMode::MembershipProportions => p.degrees(r).0,
                WeightMode::UncertaintyProportions => p.uncertainty_at(r),
            };
        }
    }
    if n == 0 {
        return Err(Error::Domain(
            "no complete respondent rows to average over".into(),
        ));
    }
    Ok(sums.into_iter().map(|s| s / n as f64).collect())
}

/// `w_k = ln(1/g_k) / sum_l ln(1/g_l)`. Every `g_k` must lie strictly in `(0, 1)`.
pub fn log_inverse_weights(g: &[f64], mode: WeightMode) -> Result<WeightVector> {
    if g.is_empty() {
        return Err(Error::Domain("no proportions to weight".into()));
    }
    for (k, &v) in g.iter().enumerate() {
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::Domain(format!(
                "fuzzy proportion of item #{k} is {v}; its logged inverse diverges"
            )));
        }
        if v >= 1.0 {
            return Err(Error::Domain(format!(
                "fuzzy proportion of item #{k} is {v}; its weight would not be positive"
            )));
        }
    }
    let logs: Vec<f64> = g.iter().map(|v| -v.ln()).collect();
    let total: f64 = logs.iter().sum();
    Ok(WeightVector {
        weights: logs.iter().map(|l| l / total).collect(),
        mode,
    })
}

/// [`log_inverse_weights`] after clamping each proportion into
/// `[PROPORTION_FLOOR, 1 - PROPORTION_FLOOR]`. Reports every clamped value.
pub fn log_inverse_weights_clamped(
    g: &[f64],
    mode: WeightMode,
) -> Result<(WeightVector, Vec<ClampedProportion>)> {
    let mut clamped = Vec::new();
    let safe: Vec<f64> = g
        .iter()
        .enumerate()
        .map(|(index, &v)| {
            if v.is_nan() {
                return Err(Error::Domain(format!(
                    "fuzzy proportion of item #{index} is NaN"
                )));
            }
            let c = v.clamp(PROPORTION_FLOOR, 1.0 - PROPORTION_FLOOR);
            if c != v {
                clamped.push(ClampedProportion {
                    index,
                    original: v,
                    clamped: c,
                });
            }
            Ok(c)
        })
        .collect::<Result<_>>()?;
    Ok((log_inverse_weights(&safe, mode)?, clamped))
}

/// Weighted membership and non-membership of one respondent.
pub fn iwam_respondent(
    profiles: &[FuzzyProfile],
    weights: &WeightVector,
    ratings: &[Option<u32>],
) -> Result<IfsPair> {
    if profiles.len() != weights.weights.len() || profiles.len() != ratings.len() {
        return Err(Error::Domain(format!(
            "{} profiles, {} weights and {} ratings do not line up",
            profiles.len(),
            weights.weights.len(),
            ratings.len()
        )));
    }
    let mut pair = IfsPair { mu: 0.0, nu: 0.0 };
    for ((p, &w), r) in profiles.iter().zip(&weights.weights).zip(ratings) {
        let r = r.ok_or_else(|| Error::MissingRating {
            item: p.item_id.clone(),
        })?;
        if r == 0 || r as usize > p.categories() {
            return Err(Error::Domain(format!(
                "rating {r} outside 1..={} for item `{}`",
                p.categories(),
                p.item_id
            )));
        }
        let (mu, nu) = p.degrees(r);
        pair.mu += w * mu;
        pair.nu += w * nu;
    }
    Ok(pair)
}

/// Equal-weight means of the respondent pairs, plus the residual.
pub fn final_scores(pairs: &[IfsPair]) -> Result<ScoreTriple> {
    if pairs.is_empty() {
        return Err(Error::Domain("no respondents to score".into()));
    }
    let n = pairs.len() as f64;
    let (mu, nu) = pairs
        .iter()
        .fold((0.0, 0.0), |(a, b), p| (a + p.mu, b + p.nu));
    Ok(ScoreTriple::new(mu / n, nu / n))
}

/// Weights, per-respondent pairs and scores for one pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregation {
    pub proportions: Vec<f64>,
    pub weights: WeightVector,
    pub clamped: Vec<ClampedProportion>,
    pub scores: ScoreTriple,
    pub respondents: usize,
    pub dropped_rows: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AggregateOptions {
    pub missing: MissingPolicy,
    /// Reject degenerate proportions instead of clamping them.
    pub strict_proportions: bool,
}

/// Runs weighting and both averaging stages over a matrix.
pub fn aggregate(
    profiles: &[FuzzyProfile],
    matrix: &RatingMatrix,
    mode: WeightMode,
    opts: &AggregateOptions,
) -> Result<Aggregation> {
    check_shapes(profiles, matrix)?;
    if opts.missing == MissingPolicy::Strict {
        if let Some((j, row)) = matrix
            .rows()
            .iter()
            .enumerate()
            .find(|(_, r)| r.iter().any(Option::is_none))
        {
            let k = row.iter().position(Option::is_none).unwrap_or(0);
            return Err(Error::Validation(format!(
                "respondent row {j}: {}",
                Error::MissingRating {
                    item: matrix.items()[k].clone()
                }
            )));
        }
    }
    let proportions = fuzzy_proportions(profiles, matrix, mode)?;
    let name = |e: Error| match &e {
        Error::Domain(msg) => {
            let named = matrix
                .items()
                .iter()
                .enumerate()
                .fold(msg.clone(), |m, (k, item)| {
                    m.replace(&format!("item #{k}"), &format!("item `{item}`"))
                });
            Error::Domain(named)
        }
        _ => e,
    };
    let (weights, clamped) = if opts.strict_proportions {
        (
            log_inverse_weights(&proportions, mode).map_err(name)?,
            Vec::new(),
        )
    } else {
        log_inverse_weights_clamped(&proportions, mode).map_err(name)?
    };
    let pairs = matrix
        .complete_rows()
        .map(|(_, row)| {
            let row: Vec<Option<u32>> = row.into_iter().map(Some).collect();
            iwam_respondent(profiles, &weights, &row)
        })
        .collect::<Result<Vec<_>>>()?;
    let scores = final_scores(&pairs)?;
    Ok(Aggregation {
        proportions,
        weights,
        clamped,
        scores,
        respondents: pairs.len(),
        dropped_rows: matrix.n() - pairs.len(),
    })
}
