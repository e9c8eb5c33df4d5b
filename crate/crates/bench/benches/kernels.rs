use criterion::{black_box, criterion_group, criterion_main, Criterion};
use m2dq_bench::{dense_symbol, gaussian, von_mises};
use m2dq_core::{
    conjugation_residual, evolve, l_op, partial_fourier, rep_apply, trace_property_check,
    GroupElement, LieAlgebraElement, SeriesTruncation,
};

fn symbolic(c: &mut Criterion) {
    let f = dense_symbol(3, 3);
    let g = dense_symbol(2, 2);
    c.bench_function("star exact 28x15 terms", |b| {
        b.iter(|| black_box(&f).star(black_box(&g)))
    });
    let u = m2dq_core::embed_hamiltonian::<m2dq_core::ExactComplex>(
        LieAlgebraElement::new(1.0, 2.0, -1.0),
        2.0,
    )
    .unwrap();
    let t = m2dq_core::embed_hamiltonian::<m2dq_core::ExactComplex>(
        LieAlgebraElement::new(0.5, -1.0, 3.0),
        2.0,
    )
    .unwrap();
    c.bench_function("star commutator of Hamiltonians", |b| {
        b.iter(|| black_box(&u).star_commutator(black_box(&t)))
    });
}

fn grid(c: &mut Criterion) {
    let f = gaussian(256, 64, 12.0, 0.5, 2);
    let u = LieAlgebraElement::new(0.7, -1.1, 0.4);
    let trunc = SeriesTruncation::default();
    c.bench_function("partial fourier 256x64", |b| {
        b.iter(|| partial_fourier(black_box(&f)))
    });
    c.bench_function("l_op 256x64", |b| {
        b.iter(|| l_op(u, 1.5, black_box(&f), trunc).unwrap())
    });
    let f_eta = partial_fourier(&f).grid;
    c.bench_function("conjugation residual 256x64", |b| {
        b.iter(|| conjugation_residual(u, 1.5, black_box(&f_eta), trunc).unwrap())
    });
    let g = gaussian(256, 64, 12.0, -0.5, -1);
    c.bench_function("trace check 256x64", |b| {
        b.iter(|| trace_property_check(black_box(&f), black_box(&g), trunc).unwrap())
    });
}

fn circle(c: &mut Criterion) {
    let f = von_mises(64, 2.0);
    let g = GroupElement::new(0.8, [0.3, -0.6]);
    c.bench_function("rep_apply N=64", |b| {
        b.iter(|| rep_apply(&g, 1.5, black_box(&f)).unwrap())
    });
    let u = LieAlgebraElement::new(1.0, 1.0, 1.0);
    c.bench_function("evolve RK4 N=64 t=1 dt=1e-3", |b| {
        b.iter(|| evolve(u, 1.0, black_box(&f), 1.0, 1e-3).unwrap())
    });
}

criterion_group!(benches, symbolic, grid, circle);
criterion_main!(benches);
