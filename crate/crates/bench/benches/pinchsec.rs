use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use pinchsec_core::coupling::max_length;
use pinchsec_core::montecarlo::{estimate_sop, McSettings};
use pinchsec_core::{solve_p1, sop_closed_form, CouplingLengths, SystemConfig};

fn closed_form(c: &mut Criterion) {
    let cfg = SystemConfig::default();
    let l = CouplingLengths::new(7.3e-4, max_length(cfg.kappa()), cfg.kappa()).unwrap();
    c.bench_function("sop_closed_form", |b| b.iter(|| sop_closed_form(black_box(&cfg), black_box(&l))));
}

fn optimizer(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve_p1");
    g.sample_size(10);
    for db in [20.0, 22.0] {
        let cfg = SystemConfig::default().with_rho_t_db(db);
        g.bench_function(format!("{db}dB"), |b| b.iter(|| solve_p1(black_box(&cfg))));
    }
    g.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let cfg = SystemConfig::default();
    let l = CouplingLengths::new(2.24e-3, max_length(cfg.kappa()), cfg.kappa()).unwrap();
    let settings = McSettings::new(1 << 20, 1);
    let mut g = c.benchmark_group("estimate_sop");
    g.sample_size(10);
    g.bench_function("1M", |b| b.iter(|| estimate_sop(black_box(&cfg), &l, &settings)));
    g.finish();
}

criterion_group!(benches, closed_form, optimizer, monte_carlo);
criterion_main!(benches);
