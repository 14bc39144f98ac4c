//! Per-item fitting, profile construction and aggregation over a matrix.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::aggregate::{aggregate, AggregateOptions, Aggregation, WeightMode};
use crate::cub::{fit_em, EmOptions, FitResult};
use crate::error::{Error, Result};
use crate::fuzzy::{build_profile, FuzzyProfile, Variant, ZeroMassPolicy};
use crate::survey::{item_frequencies, RatingMatrix};

/// Fit outcome for one item. Failures stay attached to their item.
#[derive(Debug)]
pub struct ItemFit {
    pub item: String,
    pub n: usize,
    pub result: Result<FitResult>,
}

/// Fits every item on its available ratings, one thread per item.
/// The output follows the matrix item order.
pub fn fit_items(matrix: &RatingMatrix, opts: &EmOptions) -> Vec<ItemFit> {
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..matrix.k())
            .map(|k| {
                s.spawn(move || {
                    let item = matrix.items()[k].clone();
                    let ratings = matrix.observed(k);
                    let result =
                        fit_em(&ratings, matrix.scale(), opts).map_err(|e| e.for_item(&item));
                    ItemFit {
                        item,
                        n: ratings.len(),
                        result,
                    }
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("fit thread panicked"))
            .collect()
    })
}

/// Source of the `pi` used by the CUB-adjusted profiles.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PiSource {
    /// Supplied values, e.g. reference estimates; take precedence.
    pub overrides: BTreeMap<String, f64>,
    /// Fitted values.
    pub fitted: BTreeMap<String, f64>,
}

impl PiSource {
    pub fn from_fits(fits: &[ItemFit]) -> Self {
        Self {
            overrides: BTreeMap::new(),
            fitted: fits
                .iter()
                .filter_map(|f| {
                    f.result
                        .as_ref()
                        .ok()
                        .map(|r| (f.item.clone(), r.params.pi))
                })
                .collect(),
        }
    }

    pub fn get(&self, item: &str) -> Option<f64> {
        self.overrides
            .get(item)
            .or_else(|| self.fitted.get(item))
            .copied()
    }
}

/// Builds one profile per item, in matrix order.
pub fn build_profiles(
    matrix: &RatingMatrix,
    variant: Variant,
    pis: &PiSource,
    policy: ZeroMassPolicy,
) -> Result<Vec<FuzzyProfile>> {
    matrix
        .items()
        .iter()
        .map(|item| {
            let freq = item_frequencies(matrix, item)?;
            let pi = match variant {
                Variant::Zani => None,
                Variant::CubIfs => Some(pis.get(item).ok_or_else(|| {
                    Error::Domain(format!("no estimate of pi available for item `{item}`"))
                        .for_item(item)
                })?),
            };
            build_profile(item, &freq, matrix.scale(), variant, pi, policy)
        })
        .collect()
}

/// One full scoring pipeline: profiles of one variant weighted by one mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineRun {
    pub variant: Variant,
    pub mode: WeightMode,
    pub profiles: Vec<FuzzyProfile>,
    pub aggregation: Aggregation,
}

/// The weight mode conventionally paired with a variant.
pub fn default_mode(variant: Variant) -> WeightMode {
    match variant {
        Variant::Zani => WeightMode::MembershipProportions,
        Variant::CubIfs => WeightMode::UncertaintyProportions,
    }
}

pub fn run_pipeline(
    matrix: &RatingMatrix,
    variant: Variant,
    mode: WeightMode,
    pis: &PiSource,
    policy: ZeroMassPolicy,
    agg: &AggregateOptions,
) -> Result<PipelineRun> {
    let profiles = build_profiles(matrix, variant, pis, policy)?;
    let aggregation = aggregate(&profiles, matrix, mode, agg)?;
    Ok(PipelineRun {
        variant,
        mode,
        profiles,
        aggregation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cub::{sample_stream, CubParams};
    use crate::RatingScale;

    fn simulated() -> RatingMatrix {
        let s = RatingScale::new(7).unwrap();
        let params = [(0.8, 0.2), (0.6, 0.3), (0.9, 0.15)];
        let cols: Vec<Vec<u32>> = params
            .iter()
            .enumerate()
            .map(|(k, &(pi, xi))| {
                sample_stream(&s, CubParams::new(pi, xi).unwrap(), 3000, 42, k as u64).unwrap()
            })
            .collect();
        RatingMatrix::from_columns(vec!["a".into(), "b".into(), "c".into()], &cols, s).unwrap()
    }

    #[test]
    fn fits_keep_item_order_and_failures() {
        let s = RatingScale::new(7).unwrap();
        let m = RatingMatrix::from_columns(
            vec!["ok".into(), "flat".into()],
            &[vec![1, 5, 6, 7, 6, 5, 2], vec![4; 7]],
            s,
        )
        .unwrap();
        let fits = fit_items(&m, &EmOptions::default());
        assert_eq!(fits[0].item, "ok");
        assert!(fits[0].result.is_ok());
        let err = fits[1].result.as_ref().unwrap_err();
        assert!(err.to_string().contains("flat"));
        assert!(matches!(err.root(), Error::DegenerateData(_)));
    }

    #[test]
    fn overrides_take_precedence() {
        let m = simulated();
        let fits = fit_items(&m, &EmOptions::default());
        let mut pis = PiSource::from_fits(&fits);
        pis.overrides.insert("b".into(), 0.25);
        assert_eq!(pis.get("b"), Some(0.25));
        let profiles = build_profiles(&m, Variant::CubIfs, &pis, ZeroMassPolicy::Flat).unwrap();
        assert_eq!(profiles[1].pi_hat, Some(0.25));
        assert!((profiles[0].pi_hat.unwrap() - 0.8).abs() < 0.05);
    }

    #[test]
    fn missing_pi_is_reported() {
        let m = simulated();
        let err = build_profiles(
            &m,
            Variant::CubIfs,
            &PiSource::default(),
            ZeroMassPolicy::Flat,
        )
        .unwrap_err();
        assert!(err.to_string().contains("`a`"));
    }

    #[test]
    fn both_pipelines_run() {
        let m = simulated();
        let pis = PiSource::from_fits(&fit_items(&m, &EmOptions::default()));
        for variant in [Variant::Zani, Variant::CubIfs] {
            let run = run_pipeline(
                &m,
                variant,
                default_mode(variant),
                &pis,
                ZeroMassPolicy::Flat,
                &AggregateOptions::default(),
            )
            .unwrap();
            let sc = run.aggregation.scores;
            assert_eq!(sc.u_bar, 1.0 - sc.mu_bar - sc.nu_bar);
            if variant == Variant::Zani {
                assert_eq!(sc.nu_bar, 0.0);
            }
        }
    }
}
