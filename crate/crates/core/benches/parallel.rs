//! Data-parallel walker driving against the sequential fallback. The
//! two lanes are bit-identical by construction (per-walker rng
//! streams), so the comparison is pure scheduling overhead vs speedup.
//! On a single hardware thread the parallel lane should track the
//! sequential one to within rayon's bookkeeping.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use renewal_core::compound::GaussianJumpLaw;
use renewal_core::processes::{MittagLefflerLaw, PoissonLaw, WrightLaw};
use renewal_core::sampling::{simulate_ctrw, simulate_ctrw_seq};

fn ctrw_walkers(c: &mut Criterion) {
    let mut group = c.benchmark_group("ctrw_10k_walkers");
    let jumps = GaussianJumpLaw;
    let t = 5.0;
    let walkers = 10_000;

    let ml = MittagLefflerLaw::new(0.5).unwrap();
    group.bench_function(BenchmarkId::new("parallel", "ml"), |b| {
        b.iter(|| simulate_ctrw(&ml, &jumps, t, walkers, 7).unwrap())
    });
    group.bench_function(BenchmarkId::new("sequential", "ml"), |b| {
        b.iter(|| simulate_ctrw_seq(&ml, &jumps, t, walkers, 7).unwrap())
    });

    let wr = WrightLaw::new(0.5).unwrap();
    group.bench_function(BenchmarkId::new("parallel", "wright"), |b| {
        b.iter(|| simulate_ctrw(&wr, &jumps, t, walkers, 7).unwrap())
    });
    group.bench_function(BenchmarkId::new("sequential", "wright"), |b| {
        b.iter(|| simulate_ctrw_seq(&wr, &jumps, t, walkers, 7).unwrap())
    });

    // The exponential clock ticks ~5x per walker at t=5, so this one is
    // dominated by per-walker setup rather than wait sampling.
    let po = PoissonLaw::new(1.0).unwrap();
    group.bench_function(BenchmarkId::new("parallel", "poisson"), |b| {
        b.iter(|| simulate_ctrw(&po, &jumps, t, walkers, 7).unwrap())
    });
    group.bench_function(BenchmarkId::new("sequential", "poisson"), |b| {
        b.iter(|| simulate_ctrw_seq(&po, &jumps, t, walkers, 7).unwrap())
    });

    group.finish();
}

criterion_group!(benches, ctrw_walkers);
criterion_main!(benches);
