use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use spancalc_bench::span_pair;
use spancalc_core::fock::{build_e, verify_ccr};
use spancalc_core::hall::HallAlgebra;
use spancalc_core::hecke::{hecke_structure_constants, verify_hecke_relations};
use spancalc_core::span::{compose_spans, compose_spans_literal, degroupoidify_span};
use spancalc_core::{Alpha, Quiver};

fn spans(c: &mut Criterion) {
    let (t, s) = span_pair(7, 3);
    let alpha = Alpha::integer(0);
    c.bench_function("degroupoidify_span", |b| b.iter(|| degroupoidify_span(&s, &alpha).unwrap()));
    c.bench_function("compose_reduced", |b| b.iter(|| compose_spans(&t, &s).unwrap()));
    c.bench_function("compose_literal", |b| b.iter(|| compose_spans_literal(&t, &s).unwrap()));
}

fn fock(c: &mut Criterion) {
    let mut g = c.benchmark_group("fock_ccr");
    g.sample_size(10);
    for n in [4, 6] {
        let e = build_e(n).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &e, |b, e| b.iter(|| verify_ccr(e).unwrap()));
    }
    g.finish();
}

fn hecke(c: &mut Criterion) {
    let mut g = c.benchmark_group("hecke");
    g.sample_size(10);
    g.bench_function("relations_q5", |b| b.iter(|| verify_hecke_relations(5).unwrap()));
    g.bench_function("structure_q2", |b| b.iter(|| hecke_structure_constants(2, &Alpha::integer(1)).unwrap()));
    g.finish();
}

fn hall(c: &mut Criterion) {
    let mut g = c.benchmark_group("hall");
    g.sample_size(10);
    let a2 = Quiver::parse("a2").unwrap();
    g.bench_function("a2_q2_dim22", |b| b.iter(|| HallAlgebra::new(&a2, 2, &[2, 2]).unwrap()));
    g.finish();
}

criterion_group!(benches, spans, fock, hecke, hall);
criterion_main!(benches);
