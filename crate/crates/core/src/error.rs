use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised across fitting, fuzzification, aggregation and ingestion.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The preliminary Gini-based estimator cannot be inverted.
    #[error("estimation error: {0}")]
    Estimation(String),

    /// The data cannot identify a CUB model (e.g. a single observed category).
    #[error("degenerate data: {0}")]
    DegenerateData(String),

    /// Membership cannot be built from the empirical distribution.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// A recursion normalizer is zero while it still has categories to spread over.
    #[error("degenerate normalization: {0}")]
    DegenerateNormalization(String),

    /// Non-finite value or zero-probability observation.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// mu + nu exceeds one at some category.
    #[error("IFS consistency violated at category {category}: mu + nu = {sum}")]
    IfsConsistency { category: u32, sum: f64 },

    /// A respondent row has a missing rating and cannot be aggregated.
    #[error("missing rating for item `{item}`")]
    MissingRating { item: String },

    /// A cell could not be parsed as an integer rating.
    #[error("line {line}, column `{item}`: cannot parse `{value}` as a rating")]
    Parse {
        line: u64,
        item: String,
        value: String,
    },

    /// Input failed validation (empty file, duplicate headers, rejected cells).
    #[error("validation error: {0}")]
    Validation(String),

    /// Wraps an error with the item it concerns.
    #[error("item `{item}`: {source}")]
    ForItem {
        item: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn for_item(self, item: &str) -> Self {
        match self {
            e @ Error::ForItem { .. } => e,
            e => Error::ForItem {
                item: item.to_string(),
                source: Box::new(e),
            },
        }
    }

    /// The innermost error, looking through [`Error::ForItem`] wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::ForItem { source, .. } => source.root(),
            e => e,
        }
    }
}
