use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use farkas_core::generate::{random_grid, random_instance, random_lp, InstanceKind};
use farkas_core::polyapprox::equispaced_nodes;
use farkas_core::rational::{frac, rats};
use farkas_core::{
    check_dual_criterion, check_grid_reduced, find_certificate, gallery, solve, solve_eps, ApproxProblem, ProbeConfig,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn lp(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let lps: Vec<_> = (0..32).map(|_| random_lp(&mut rng).lp).collect();
    c.bench_function("simplex/32 random lps", |b| {
        b.iter(|| lps.iter().filter(|lp| solve(lp).unwrap().is_infeasible()).count())
    });
}

fn certificates(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let instances: Vec<_> = (0..16).map(|_| random_instance(&mut rng, InstanceKind::Feasible)).collect();
    c.bench_function("certificate/16 random instances", |b| {
        b.iter(|| instances.iter().filter(|i| find_certificate(i).unwrap().is_some()).count())
    });
    let g3 = gallery::g3();
    c.bench_function("dual criterion/g3", |b| {
        b.iter(|| check_dual_criterion(&g3, ProbeConfig::default()).unwrap())
    });
}

fn grids(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    c.bench_function("grid/reduced criterion", |b| {
        b.iter_batched(|| random_grid(&mut rng), |g| check_grid_reduced(&g).unwrap(), BatchSize::SmallInput)
    });
}

fn band(c: &mut Criterion) {
    let prob = ApproxProblem::from_polynomial(3, &rats(&[0, 0, 1]), equispaced_nodes(101), vec![frac(1, 10)]).unwrap();
    let mut group = c.benchmark_group("polyapprox");
    group.sample_size(10);
    group.bench_function("t^2, degree 3, 101 nodes", |b| b.iter(|| solve_eps(&prob, &frac(1, 10)).unwrap()));
    group.finish();
}

criterion_group!(benches, lp, certificates, grids, band);
criterion_main!(benches);
