use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use errbalance_core::composite::{
    optimal_composite_bayes, optimal_composite_freq, psi_composite_freq,
};
use errbalance_core::numerics::{bvn_cdf, norm_cdf, norm_quantile, BvnArgs};
use errbalance_core::simple_freq::{optimal_simple_freq, size_for_psi_bound};
use errbalance_core::{CompositeContext, DesignParams, EffectPrior};

fn reference_ctx() -> CompositeContext {
    CompositeContext::new(
        DesignParams::new(64.0, 4.0, 8.0).unwrap(),
        EffectPrior::new(4.0, 2.0).unwrap(),
    )
    .unwrap()
}

fn bench_normal(c: &mut Criterion) {
    c.bench_function("norm_cdf", |b| {
        b.iter(|| norm_cdf(black_box(0.8684)).unwrap())
    });
    c.bench_function("norm_quantile", |b| {
        b.iter(|| norm_quantile(black_box(0.975)).unwrap())
    });
}

fn bench_bvn(c: &mut Criterion) {
    let mut group = c.benchmark_group("bvn_cdf");
    for (name, rho) in [("low_rho", 0.2), ("mid_rho", 0.6), ("high_rho", -0.9847)] {
        group.bench_function(name, |b| {
            let args = BvnArgs::new(-0.5, 0.15118, rho).unwrap();
            b.iter(|| bvn_cdf(black_box(args)))
        });
    }
    group.finish();
}

fn bench_optima(c: &mut Criterion) {
    let ctx = reference_ctx();
    c.bench_function("optimal_simple_freq", |b| {
        b.iter(|| optimal_simple_freq(black_box(2.8284), black_box(3.0)).unwrap())
    });
    c.bench_function("optimal_composite_freq", |b| {
        b.iter(|| optimal_composite_freq(black_box(&ctx), black_box(3.0)).unwrap())
    });
    c.bench_function("optimal_composite_bayes", |b| {
        b.iter(|| optimal_composite_bayes(black_box(&ctx), black_box(3.0)).unwrap())
    });
    c.bench_function("size_for_psi_bound", |b| {
        b.iter(|| size_for_psi_bound(0.05, 3.0, 4.0, 8.0).unwrap())
    });
}

fn bench_sweep(c: &mut Criterion) {
    let ctx = reference_ctx();
    c.bench_function("psi_composite_sweep_999", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for i in 1..1000 {
                acc += psi_composite_freq(&ctx, i as f64 / 1000.0, 3.0).unwrap();
            }
            acc
        })
    });
}

criterion_group!(benches, bench_normal, bench_bvn, bench_optima, bench_sweep);
criterion_main!(benches);
