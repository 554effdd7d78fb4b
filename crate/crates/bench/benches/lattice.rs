use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use toric_bench::random_matrix;
use toric_core::{cokernel_structure, integer_kernel_basis, smith_normal_form};

fn smith(c: &mut Criterion) {
    let mut group = c.benchmark_group("smith_normal_form");
    for n in [4usize, 8, 16, 32] {
        let m = random_matrix(n as u64, n, n, 9);
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| b.iter(|| smith_normal_form(black_box(m))));
    }
    group.finish();
}

fn kernel(c: &mut Criterion) {
    let m = random_matrix(7, 6, 12, 5);
    c.bench_function("integer_kernel_basis 6x12", |b| b.iter(|| integer_kernel_basis(black_box(&m))));
    c.bench_function("cokernel_structure 6x12", |b| b.iter(|| cokernel_structure(black_box(&m))));
}

criterion_group!(benches, smith, kernel);
criterion_main!(benches);
