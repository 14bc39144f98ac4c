use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::{cub_pmf, CubParams};
use crate::error::{Error, Result};
use crate::scale::RatingScale;

/// Draws `n` ratings by inverse-CDF sampling from a caller-owned generator.
pub fn sample_with_rng<R: Rng + ?Sized>(
    scale: &RatingScale,
    params: CubParams,
    n: usize,
    rng: &mut R,
) -> Result<Vec<u32>> {
    if n == 0 {
        return Err(Error::Domain("sample size must be at least 1".into()));
    }
    let pmf = cub_pmf(scale, params)?;
    let mut cdf = Vec::with_capacity(pmf.len());
    let mut acc = 0.0;
    for p in &pmf {
        acc += p;
        cdf.push(acc);
    }
    // Rounding can leave cdf[m] slightly below 1; fall back to the last
    // category carrying mass.
    let last = pmf.iter().rposition(|&p| p > 0.0).unwrap_or(pmf.len() - 1) as u32 + 1;
    Ok((0..n)
        .map(|_| {
            let u: f64 = rng.gen();
            cdf.iter()
                .position(|&c| u < c)
                .map_or(last, |i| i as u32 + 1)
        })
        .collect())
}

/// Draws `n` ratings deterministically from `seed`.
pub fn sample(scale: &RatingScale, params: CubParams, n: usize, seed: u64) -> Result<Vec<u32>> {
    sample_stream(scale, params, n, seed, 0)
}

/// Like [`sample`], on an independent stream of the same seed. Used to give
/// each simulated item its own reproducible sequence.
pub fn sample_stream(
    scale: &RatingScale,
    params: CubParams,
    n: usize,
    seed: u64,
    stream: u64,
) -> Result<Vec<u32>> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    sample_with_rng(scale, params, n, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn freqs(xs: &[u32], m: usize) -> Vec<f64> {
        let mut c = vec![0.0; m];
        for &x in xs {
            c[(x - 1) as usize] += 1.0;
        }
        c.iter().map(|v| v / xs.len() as f64).collect()
    }

    #[test]
    fn uniform_law_of_large_numbers() {
        let s = RatingScale::new(7).unwrap();
        let xs = sample(&s, CubParams::new(0.0, 0.4).unwrap(), 70_000, 11).unwrap();
        for f in freqs(&xs, 7) {
            assert!((f - 1.0 / 7.0).abs() < 0.01);
        }
    }

    #[test]
    fn degenerate_component() {
        let s = RatingScale::new(7).unwrap();
        let xs = sample(&s, CubParams::new(1.0, 0.0).unwrap(), 500, 3).unwrap();
        assert!(xs.iter().all(|&r| r == 7));
        let xs = sample(&s, CubParams::new(1.0, 1.0).unwrap(), 500, 3).unwrap();
        assert!(xs.iter().all(|&r| r == 1));
    }

    #[test]
    fn monte_carlo_matches_pmf() {
        let s = RatingScale::new(7).unwrap();
        let p = CubParams::new(0.8, 0.2).unwrap();
        let xs = sample(&s, p, 100_000, 2024).unwrap();
        let pmf = cub_pmf(&s, p).unwrap();
        for (f, q) in freqs(&xs, 7).iter().zip(&pmf) {
            assert!((f - q).abs() < 0.01, "{f} vs {q}");
        }
    }

    #[test]
    fn deterministic_and_streams_differ() {
        let s = RatingScale::new(7).unwrap();
        let p = CubParams::new(0.5, 0.5).unwrap();
        assert_eq!(
            sample(&s, p, 200, 9).unwrap(),
            sample(&s, p, 200, 9).unwrap()
        );
        assert_ne!(
            sample_stream(&s, p, 200, 9, 0).unwrap(),
            sample_stream(&s, p, 200, 9, 1).unwrap()
        );
    }

    #[test]
    fn zero_draws_is_an_error() {
        let s = RatingScale::new(7).unwrap();
        assert!(matches!(
            sample(&s, CubParams::new(0.5, 0.5).unwrap(), 0, 1),
            Err(Error::Domain(_))
        ));
    }
}
