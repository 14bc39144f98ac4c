//! CUB mixture models for ordinal ratings, intuitionistic fuzzy profiles
//! built from the fitted uncertainty, and weighted aggregation of those
//! profiles into overall satisfaction scores.

pub mod aggregate;
pub mod cub;
pub mod error;
pub mod freq;
pub mod fuzzy;
pub mod pipeline;
pub mod scale;
pub mod survey;

pub use aggregate::{
    aggregate, final_scores, fuzzy_proportions, iwam_respondent, log_inverse_weights,
    AggregateOptions, Aggregation, IfsPair, MissingPolicy, ScoreTriple, WeightMode, WeightVector,
};
pub use cub::{
    cub_pmf, fit_em, gini_index, log_likelihood, preliminary_pi, shifted_binomial_pmf, CubParams,
    EmOptions, FitResult,
};
pub use error::{Error, Result};
pub use freq::FrequencyTable;
pub use fuzzy::{build_profile, FuzzyProfile, Variant, ZeroMassPolicy};
pub use pipeline::{
    build_profiles, default_mode, fit_items, run_pipeline, ItemFit, PiSource, PipelineRun,
};
pub use scale::RatingScale;
pub use survey::{
    item_frequencies, load_csv, read_csv, LoadOptions, Loaded, RangePolicy, RatingMatrix,
    ValidationReport,
};
