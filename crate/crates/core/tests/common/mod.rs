//! Oracles kept independent of the library code paths they check.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

/// Exact shifted Binomial pmf for a rational `xi = num / den`.
pub fn exact_shifted_binomial(m: u32, num: i64, den: i64) -> Vec<f64> {
    let xi = BigRational::new(BigInt::from(num), BigInt::from(den));
    let one_minus = BigRational::one() - xi.clone();
    (1..=m)
        .map(|r| {
            let mut coef = BigInt::one();
            for i in 0..(r - 1) {
                coef = coef * BigInt::from(m - 1 - i) / BigInt::from(i + 1);
            }
            let mut term = BigRational::from_integer(coef);
            for _ in 0..(m - r) {
                term *= xi.clone();
            }
            for _ in 0..(r - 1) {
                term *= one_minus.clone();
            }
            term.to_f64().unwrap()
        })
        .collect()
}

/// CUB pmf written out directly from the mixture formula.
pub fn oracle_cub_pmf(m: u32, pi: f64, xi: f64) -> Vec<f64> {
    let choose = |n: u64, k: u64| -> f64 {
        let mut c: u128 = 1;
        for i in 0..k {
            c = c * (n - i) as u128 / (i + 1) as u128;
        }
        c as f64
    };
    (1..=m)
        .map(|r| {
            let b = choose((m - 1) as u64, (r - 1) as u64)
                * xi.powf((m - r) as f64)
                * (1.0 - xi).powf((r - 1) as f64);
            pi * b + (1.0 - pi) / m as f64
        })
        .collect()
}

pub fn oracle_loglik(counts: &[f64], m: u32, pi: f64, xi: f64) -> f64 {
    oracle_cub_pmf(m, pi, xi)
        .iter()
        .zip(counts)
        .map(|(p, c)| if *c == 0.0 { 0.0 } else { c * p.ln() })
        .sum()
}

/// Maximizes the log-likelihood over the midpoints of a `size x size` grid
/// on `(0, 1)^2`. Returns `(pi, xi, loglik)`.
pub fn grid_search(counts: &[f64], m: u32, size: usize) -> (f64, f64, f64) {
    let step = 1.0 / size as f64;
    let mut best = (0.0, 0.0, f64::NEG_INFINITY);
    for i in 0..size {
        let pi = (i as f64 + 0.5) * step;
        for j in 0..size {
            let xi = (j as f64 + 0.5) * step;
            let ll = oracle_loglik(counts, m, pi, xi);
            if ll > best.2 {
                best = (pi, xi, ll);
            }
        }
    }
    best
}

pub fn counts(ratings: &[u32], m: u32) -> Vec<f64> {
    let mut c = vec![0.0; m as usize];
    for &r in ratings {
        c[(r - 1) as usize] += 1.0;
    }
    c
}

pub fn sum_of_squares_identity(m: u32, pi: f64, xi: f64) -> f64 {
    let b = oracle_cub_pmf(m, 1.0, xi);
    let sb: f64 = b.iter().map(|v| v * v).sum();
    pi * pi * sb + (1.0 - pi * pi) / m as f64
}
