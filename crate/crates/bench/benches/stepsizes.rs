use criterion::{criterion_group, criterion_main, Criterion};
use gradstep_bench::{bench_problem, filled_history, sample_hmatrix3, sample_hmatrix4};
use gradstep_core::stepsizes::{bb1, bbq_stepsize, StepPair};
use gradstep_core::termination3d::{alpha_new_bb, largest_root_cubic, largest_root_quartic};
use std::hint::black_box;

fn stepsizes(c: &mut Criterion) {
    let pair = StepPair::new(2.0, 1.5, 1.25);
    c.bench_function("bb1", |b| b.iter(|| bb1(black_box(&pair))));
    c.bench_function("bbq", |b| b.iter(|| bbq_stepsize(black_box(0.9), 0.7, 0.5, 0.4)));

    let h3 = sample_hmatrix3();
    let h4 = sample_hmatrix4();
    c.bench_function("cubic_root", |b| b.iter(|| largest_root_cubic(black_box(&h3))));
    c.bench_function("quartic_root", |b| b.iter(|| largest_root_quartic(black_box(&h4))));

    let hist = filled_history(&bench_problem(200, 1e3));
    c.bench_function("alpha_new_bb", |b| b.iter(|| alpha_new_bb(black_box(&hist))));
}

criterion_group!(benches, stepsizes);
criterion_main!(benches);
