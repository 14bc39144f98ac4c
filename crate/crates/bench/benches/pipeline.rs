use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use cubifs::{
    aggregate, build_profile, build_profiles, cub_pmf, fit_em, item_frequencies, run_pipeline,
    AggregateOptions, CubParams, EmOptions, PiSource, Variant, WeightMode, ZeroMassPolicy,
};
use cubifs_bench::{scale, survey, ITEM_PARAMS};

fn pmf(c: &mut Criterion) {
    let params = CubParams::new(0.8, 0.2).unwrap();
    let mut group = c.benchmark_group("cub_pmf");
    for m in [5u32, 7, 11] {
        let scale = cubifs::RatingScale::new(m).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(m), &scale, |b, s| {
            b.iter(|| cub_pmf(black_box(s), black_box(params)).unwrap())
        });
    }
    group.finish();
}

fn em(c: &mut Criterion) {
    let scale = scale();
    let mut group = c.benchmark_group("fit_em");
    for n in [500usize, 5_000, 50_000] {
        let matrix = survey(n, 1);
        let ratings = matrix.observed(1);
        group.bench_with_input(BenchmarkId::from_parameter(n), &ratings, |b, r| {
            b.iter(|| fit_em(black_box(r), &scale, &EmOptions::default()).unwrap())
        });
    }
    group.finish();
}

fn profiles(c: &mut Criterion) {
    let scale = scale();
    let matrix = survey(1_000, 2);
    let freq = item_frequencies(&matrix, "informat").unwrap();
    let mut group = c.benchmark_group("build_profile");
    for variant in [Variant::Zani, Variant::CubIfs] {
        group.bench_function(format!("{variant:?}"), |b| {
            b.iter(|| {
                build_profile(
                    "informat",
                    &freq,
                    &scale,
                    variant,
                    Some(0.79),
                    ZeroMassPolicy::Flat,
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

fn pis() -> PiSource {
    PiSource {
        overrides: ITEM_PARAMS
            .iter()
            .map(|&(item, pi, _)| (item.to_string(), pi))
            .collect(),
        ..PiSource::default()
    }
}

fn aggregation(c: &mut Criterion) {
    let pis = pis();
    let mut group = c.benchmark_group("aggregate");
    for n in [1_000usize, 10_000] {
        let matrix = survey(n, 3);
        let profiles =
            build_profiles(&matrix, Variant::CubIfs, &pis, ZeroMassPolicy::Flat).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &matrix, |b, m| {
            b.iter(|| {
                aggregate(
                    &profiles,
                    m,
                    WeightMode::UncertaintyProportions,
                    &AggregateOptions::default(),
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

fn end_to_end(c: &mut Criterion) {
    let pis = pis();
    let matrix = survey(2_000, 4);
    c.bench_function("run_pipeline/2000", |b| {
        b.iter(|| {
            run_pipeline(
                &matrix,
                Variant::CubIfs,
                WeightMode::UncertaintyProportions,
                &pis,
                ZeroMassPolicy::Flat,
                &AggregateOptions::default(),
            )
            .unwrap()
        })
    });
}

criterion_group!(benches, pmf, em, profiles, aggregation, end_to_end);
criterion_main!(benches);
