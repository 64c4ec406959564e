use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use fqcalc::basis::{tau_product, HBasis};
use fqcalc::calculus::{volkenborn_closed, volkenborn_limit};
use fqcalc::field::{Fq, FqContext};
use fqcalc::fqlinear::{CarlitzExpansion, Rep};
use fqcalc::series::{Laurent, Poly};
use fqcalc::specialfn::{goss_integral, log_c};
use fqcalc_bench::consts;

fn bench_constants(c: &mut Criterion) {
    c.bench_function("constants/d8_q3_cold", |b| {
        b.iter_batched(
            || consts(3),
            |cc| black_box(cc.d(8).unwrap()),
            BatchSize::SmallInput,
        )
    });
    c.bench_function("constants/gamma_q2_block", |b| {
        b.iter_batched(
            || consts(2),
            |cc| black_box(cc.gamma((1 << 10) - 1).unwrap()),
            BatchSize::SmallInput,
        )
    });
}

fn bench_basis(c: &mut Criterion) {
    let cc = consts(2);
    c.bench_function("basis/tau4_q2", |b| {
        b.iter(|| black_box(tau_product(&cc, 4, 64).unwrap()))
    });
    let hb = HBasis::new(&cc, 15).unwrap();
    let tau = tau_product(&cc, 4, 64).unwrap();
    c.bench_function("basis/h_expansion_tau4_q2", |b| {
        b.iter(|| black_box(hb.to_h(&tau).unwrap()))
    });
}

fn sample_expansion(ctx: &FqContext) -> CarlitzExpansion {
    let coeffs = (0..6)
        .map(|i| Laurent::from_poly(&Poly::from_coeffs(ctx, vec![Fq(1), Fq((i % 2) as u8)])))
        .collect();
    CarlitzExpansion::new(ctx, coeffs)
}

fn bench_conversions(c: &mut Criterion) {
    let cc = consts(3);
    let u = sample_expansion(cc.ctx());
    c.bench_function("fqlinear/carlitz_to_qexp_roundtrip_q3", |b| {
        b.iter(|| {
            let q = u.to_qexp(&cc, 64).unwrap();
            black_box(q.to_carlitz(&cc).unwrap())
        })
    });
}

fn bench_integral(c: &mut Criterion) {
    let cc = consts(2);
    let f = CarlitzExpansion::basis_vector(cc.ctx(), 3);
    c.bench_function("calculus/volkenborn_closed_f3_q2", |b| {
        b.iter(|| black_box(volkenborn_closed(&cc, &f, 40).unwrap()))
    });
    c.bench_function("calculus/volkenborn_limit_f3_q2", |b| {
        b.iter(|| {
            black_box(volkenborn_limit(&cc, &Rep::Carlitz(f.clone()), 80, 40).unwrap())
        })
    });
}

fn bench_special(c: &mut Criterion) {
    let cc = consts(2);
    let z = Laurent::monomial(cc.ctx(), Fq::ONE, 2);
    c.bench_function("specialfn/log_q2", |b| {
        b.iter(|| black_box(log_c(&cc, &z, 40).unwrap()))
    });
    let a = Poly::monomial(cc.ctx(), Fq::ONE, 2);
    c.bench_function("specialfn/goss_q2", |b| {
        b.iter(|| black_box(goss_integral(&cc, &a, &z, 40).unwrap()))
    });
}

criterion_group!(
    benches,
    bench_constants,
    bench_basis,
    bench_conversions,
    bench_integral,
    bench_special
);
criterion_main!(benches);
