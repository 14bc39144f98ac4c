mod common;

use common::{counts, exact_shifted_binomial, grid_search, oracle_cub_pmf, oracle_loglik};
use cubifs::cub::{cub_pmf, fit_em, sample, shifted_binomial_pmf};
use cubifs::{CubParams, EmOptions, RatingScale};

#[test]
fn shifted_binomial_against_exact_rationals() {
    let s = RatingScale::new(7).unwrap();
    let got = shifted_binomial_pmf(&s, 0.1809).unwrap();
    let exact = exact_shifted_binomial(7, 1809, 10_000);
    for (g, e) in got.iter().zip(&exact) {
        assert!((g - e).abs() <= 1e-15 * e.max(1e-300) + 1e-18, "{g} vs {e}");
    }
    let mode = got
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap()
        .0
        + 1;
    assert_eq!(mode, 6);
    assert!((got.iter().sum::<f64>() - 1.0).abs() < 1e-12);
}

#[test]
fn shifted_binomial_other_scales() {
    for (m, num, den) in [(5u32, 1, 3), (9, 7, 10), (11, 1, 2)] {
        let s = RatingScale::new(m).unwrap();
        let got = shifted_binomial_pmf(&s, num as f64 / den as f64).unwrap();
        for (g, e) in got.iter().zip(exact_shifted_binomial(m, num, den)) {
            assert!((g - e).abs() < 1e-15, "m={m}: {g} vs {e}");
        }
    }
}

#[test]
fn mixture_for_reference_informat_parameters() {
    let s = RatingScale::new(7).unwrap();
    let got = cub_pmf(&s, CubParams::new(0.7936, 0.1809).unwrap()).unwrap();
    let b = exact_shifted_binomial(7, 1809, 10_000);
    for (g, br) in got.iter().zip(&b) {
        assert!((g - (0.7936 * br + 0.2064 / 7.0)).abs() < 1e-15);
    }
}

#[test]
fn em_matches_grid_search() {
    let s = RatingScale::new(7).unwrap();
    for (seed, (pi, xi)) in [(0.8, 0.2), (0.5, 0.6), (0.9, 0.1)].into_iter().enumerate() {
        let xs = sample(&s, CubParams::new(pi, xi).unwrap(), 5000, seed as u64).unwrap();
        let fit = fit_em(&xs, &s, &EmOptions::default()).unwrap();
        let c = counts(&xs, 7);
        let (gp, gx, gll) = grid_search(&c, 7, 200);
        assert!(
            (fit.params.pi - gp).abs() <= 0.005,
            "pi {} vs grid {gp}",
            fit.params.pi
        );
        assert!(
            (fit.params.xi - gx).abs() <= 0.005,
            "xi {} vs grid {gx}",
            fit.params.xi
        );
        assert!(fit.loglik >= gll - 1e-6);
        assert!((fit.loglik - oracle_loglik(&c, 7, fit.params.pi, fit.params.xi)).abs() < 1e-8);
    }
}

#[test]
fn uniform_data_grid_agrees_pi_is_small() {
    let s = RatingScale::new(7).unwrap();
    let xs = sample(&s, CubParams::new(0.0, 0.5).unwrap(), 5000, 99).unwrap();
    let fit = fit_em(&xs, &s, &EmOptions::default()).unwrap();
    let (gp, _, _) = grid_search(&counts(&xs, 7), 7, 200);
    assert!(fit.params.pi < 0.1);
    assert!(gp < 0.1);
}

#[test]
fn oracle_pmf_agrees_with_library() {
    let s = RatingScale::new(9).unwrap();
    let lib = cub_pmf(&s, CubParams::new(0.35, 0.72).unwrap()).unwrap();
    for (a, b) in lib.iter().zip(oracle_cub_pmf(9, 0.35, 0.72)) {
        assert!((a - b).abs() < 1e-15);
    }
}
