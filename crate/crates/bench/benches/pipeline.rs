use criterion::{black_box, criterion_group, criterion_main, Criterion};
use sill_bench::{cp_samples, hcp_samples, session_source};
use sill_core::bridge::{disentangle, translate_typed};
use sill_core::congruence::equiv_hcp;
use sill_core::cp_to_hcp;
use sill_core::reduction::reduce;
use sill_core::surface::parse_session;
use sill_core::typecheck::{check_cp, check_hcp_at, CheckOptions};

const SAMPLES: usize = 50;

fn pipeline(c: &mut Criterion) {
    let cp = cp_samples(SAMPLES);
    let hcp = hcp_samples(SAMPLES);
    let source = session_source(&cp);

    c.bench_function("parse", |b| {
        b.iter(|| parse_session(black_box(&source)).unwrap())
    });
    c.bench_function("check_cp", |b| {
        b.iter(|| {
            cp.iter()
                .map(|d| check_cp(&d.term, &d.env).is_ok())
                .filter(|ok| *ok)
                .count()
        })
    });
    c.bench_function("check_hcp_at", |b| {
        b.iter(|| {
            hcp.iter()
                .filter(|d| check_hcp_at(&d.term, &d.hyper, CheckOptions::default()).is_ok())
                .count()
        })
    });
    c.bench_function("reduce_cp", |b| {
        b.iter(|| {
            cp.iter()
                .map(|d| reduce(&d.term).steps.len())
                .sum::<usize>()
        })
    });
    c.bench_function("reduce_hcp", |b| {
        b.iter(|| {
            hcp.iter()
                .map(|d| reduce(&d.term).steps.len())
                .sum::<usize>()
        })
    });
    c.bench_function("translate", |b| {
        b.iter(|| cp.iter().filter(|d| translate_typed(d).is_ok()).count())
    });
    c.bench_function("disentangle", |b| {
        b.iter(|| hcp.iter().filter(|d| disentangle(d).is_ok()).count())
    });
    c.bench_function("equiv_hcp", |b| {
        b.iter(|| {
            cp.iter()
                .filter(|d| equiv_hcp(&cp_to_hcp(&d.term), &cp_to_hcp(&d.term)))
                .count()
        })
    });
}

criterion_group!(benches, pipeline);
criterion_main!(benches);
