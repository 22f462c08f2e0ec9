//! Benchmarks for the hot paths: Chern inversion, the LES solver, the
//! endomorphism chase, and a short tower run.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use syzygy_core::cohom::{les_solve, line_bundle_cohom_pn, table_sum, CohomologyTable, SesProblem};
use syzygy_core::ring::{ChernPolynomial, RingSpec};
use syzygy_core::sheaf::{resolve_facts, SheafContext, SheafExpr, VarietySpec};
use syzygy_core::syzygy::endo_cohomology;
use syzygy_core::tower::{tower_run, TowerPolicy, WChoice};

fn bench_chern_invert(c: &mut Criterion) {
    let ring = RingSpec::projective_space(3);
    let poly = ChernPolynomial::on_pn(&ring, 3, &[5, -7, 11]).unwrap();
    c.bench_function("chern_invert_p3", |b| {
        b.iter(|| black_box(&poly).invert(4).unwrap())
    });
}

fn bench_les_solve(c: &mut Criterion) {
    let b_table = table_sum(&[(&line_bundle_cohom_pn(2, 0).unwrap(), 3)]).unwrap();
    let c_table = line_bundle_cohom_pn(2, 3).unwrap();
    let problem = SesProblem::new(CohomologyTable::unknown(2), b_table, c_table)
        .unwrap()
        .with_h0_injective();
    c.bench_function("les_solve_syzygy_chase", |b| {
        b.iter(|| les_solve(black_box(&problem)).unwrap())
    });
}

fn bench_endo(c: &mut Criterion) {
    let ctx = SheafContext::new(VarietySpec::catalog("P2").unwrap()).unwrap();
    c.bench_function("endo_cohomology_p2_cubic", |b| {
        b.iter(|| endo_cohomology(black_box(&SheafExpr::o(3)), 3, &ctx).unwrap())
    });
}

fn bench_resolve_twisted(c: &mut Criterion) {
    let ctx = SheafContext::new(VarietySpec::catalog("P3").unwrap()).unwrap();
    let expr = SheafExpr::twist(SheafExpr::syz(SheafExpr::o(1), 4), 2);
    c.bench_function("resolve_twisted_syzygy_p3", |b| {
        b.iter(|| resolve_facts(black_box(&expr), &ctx).unwrap())
    });
}

fn bench_tower(c: &mut Criterion) {
    let ctx = SheafContext::new(VarietySpec::catalog("P3").unwrap()).unwrap();
    c.bench_function("tower_p3_two_steps", |b| {
        b.iter(|| {
            tower_run(
                black_box(&SheafExpr::o(1)),
                TowerPolicy::new(WChoice::Full, 2),
                &ctx,
            )
            .unwrap()
        })
    });
}

criterion_group!(
    benches,
    bench_chern_invert,
    bench_les_solve,
    bench_endo,
    bench_resolve_twisted,
    bench_tower
);
criterion_main!(benches);
