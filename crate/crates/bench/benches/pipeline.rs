use criterion::{criterion_group, criterion_main, Criterion};
use hamnve_bench::{centered_linear, generic_forms};
use hamnve_core::certify::conic_incompatibility;
use hamnve_core::dynamics::{integrate_hamilton, NumericPotential};
use hamnve_core::jets::enk_table;
use hamnve_core::ode::{rational_kernel, KernelAnsatz};

fn symbolic(c: &mut Criterion) {
    c.bench_function("enk_table(8)", |b| b.iter(|| enk_table(8).unwrap()));

    let l2 = centered_linear();
    let ansatz = KernelAnsatz::default_for(&l2, 8);
    c.bench_function("rational_kernel generic", |b| {
        b.iter(|| rational_kernel(&l2, &ansatz.denominator, ansatz.exponent, ansatz.extra_pole, 8).unwrap())
    });

    let (forms, spec) = generic_forms();
    c.bench_function("conic_incompatibility trial", |b| {
        b.iter(|| conic_incompatibility(&forms, &spec).unwrap())
    });
}

fn numeric(c: &mut Criterion) {
    let pot = NumericPotential::parse("x1^2/2 + x1^4/4 - (x1^2 + 1)*x2^2").unwrap();
    c.bench_function("rk4 10k steps", |b| {
        b.iter(|| integrate_hamilton(&pot, [0.5, 0.1, 0.01, 0.0], 1e-3, 10.0).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = symbolic, numeric
}
criterion_main!(benches);
