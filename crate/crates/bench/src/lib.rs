//! Synthetic workloads shared by the benchmarks in `benches/`.

use cubifs::cub::sample_stream;
use cubifs::{CubParams, RatingMatrix, RatingScale};

/// Parameters used for the synthetic five-item survey.
pub const ITEM_PARAMS: [(&str, f64, f64); 5] = [
    ("informat", 0.7936, 0.1809),
    ("willingn", 0.8567, 0.1167),
    ("officeho", 0.6802, 0.1786),
    ("compete", 0.8022, 0.1624),
    ("global", 0.8684, 0.1665),
];

pub fn scale() -> RatingScale {
    RatingScale::new(7).expect("7-point scale")
}

/// Draws `n` respondents for every item in [`ITEM_PARAMS`].
pub fn survey(n: usize, seed: u64) -> RatingMatrix {
    let scale = scale();
    let columns: Vec<Vec<u32>> = ITEM_PARAMS
        .iter()
        .enumerate()
        .map(|(k, &(_, pi, xi))| {
            let params = CubParams::new(pi, xi).expect("valid parameters");
            sample_stream(&scale, params, n, seed, k as u64).expect("sampling")
        })
        .collect();
    let items = ITEM_PARAMS.iter().map(|p| p.0.to_string()).collect();
    RatingMatrix::from_columns(items, &columns, scale).expect("rectangular survey")
}
