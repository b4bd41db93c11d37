use criterion::{black_box, criterion_group, criterion_main, Criterion};
use hlgf_bench::{cubic, oscillatory_problem};
use hlgf_core::{green, time_green, GreenQuery, LatticeModel, QuadConfig, RegimeParams, REFERENCE_VALUES};

fn regimes(c: &mut Criterion) {
    let params = RegimeParams::default();
    let cfg = QuadConfig::default();
    let mut g = c.benchmark_group("green");
    for (name, q) in [
        ("generic", oscillatory_problem()),
        ("near_van_hove", cubic([0, 0, 0], 3.0 - 1e-6)),
        ("at_van_hove", cubic([1, 1, 0], 3.0)),
        ("outside_band", cubic([1, 0, 0], 4.5)),
    ] {
        g.bench_function(name, |b| b.iter(|| green(black_box(&q), &params, &cfg).unwrap()));
    }
    g.finish();
}

fn reference_table(c: &mut Criterion) {
    let params = RegimeParams::default();
    let cfg = QuadConfig::default();
    let queries: Vec<GreenQuery> = REFERENCE_VALUES
        .iter()
        .map(|rv| GreenQuery::new(LatticeModel::isotropic(rv.d, 1.0).unwrap(), rv.r.to_vec(), rv.omega).unwrap())
        .collect();
    c.bench_function("reference_table", |b| {
        b.iter(|| {
            queries
                .iter()
                .map(|q| green(q, &params, &cfg).unwrap().value)
                .sum::<hlgf_core::Complex64>()
        })
    });
}

fn naive_baseline(c: &mut Criterion) {
    let q = oscillatory_problem();
    let cfg = QuadConfig {
        max_evals: 50_000,
        ..Default::default()
    };
    let mut g = c.benchmark_group("naive");
    g.sample_size(10);
    g.bench_function("time_green_t1000", |b| {
        b.iter(|| time_green(black_box(&q), 1000.0, &cfg).unwrap())
    });
    g.finish();
}

criterion_group!(benches, regimes, reference_table, naive_baseline);
criterion_main!(benches);
