use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use glt_bench::{laplacian_tridiag, nonsymmetric};
use glt_core::eigen::{eig_dense_general, eig_sym_tridiag};
use glt_core::experiment::{fd_matrix, GridKind};
use glt_core::iga::assemble_iga;
use glt_core::problem::EulerCauchyCase;
use glt_core::symbol::euler_cauchy_phi;

fn tridiagonal_ql(c: &mut Criterion) {
    let mut g = c.benchmark_group("tridiagonal_ql");
    for n in [500, 2000] {
        let (d, e) = laplacian_tridiag(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| eig_sym_tridiag(black_box(&d), black_box(&e)))
        });
    }
    g.finish();
}

fn fd_assembly(c: &mut Criterion) {
    let mut g = c.benchmark_group("fd_assembly");
    for eta in [1, 10] {
        g.bench_with_input(BenchmarkId::new("liouville_n1000", eta), &eta, |b, &eta| {
            b.iter(|| fd_matrix(1.0, 1000, eta, GridKind::Liouville))
        });
    }
    g.finish();
}

fn iga_assembly(c: &mut Criterion) {
    let case = EulerCauchyCase::new(1.0).unwrap();
    let (spec, map) = (case.spec(), case.liouville_map());
    let mut g = c.benchmark_group("iga_assembly");
    for eta in [2, 5] {
        g.bench_with_input(BenchmarkId::new("n500", eta), &eta, |b, &eta| {
            b.iter(|| assemble_iga(&spec, &map, eta, 500))
        });
    }
    g.finish();
}

fn dense_general(c: &mut Criterion) {
    let m = nonsymmetric(200);
    c.bench_function("dense_general_qr_200", |b| b.iter(|| eig_dense_general(black_box(&m))));
}

fn phi_inversion(c: &mut Criterion) {
    let q = euler_cauchy_phi(1.0).unwrap().rearrangement();
    c.bench_function("phi_inversion", |b| b.iter(|| q.eval(black_box(0.37))));
}

criterion_group! {
    name = kernels;
    config = Criterion::default().sample_size(10);
    targets = tridiagonal_ql, fd_assembly, iga_assembly, dense_general, phi_inversion
}
criterion_main!(kernels);
