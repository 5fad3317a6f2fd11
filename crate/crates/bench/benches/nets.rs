use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use planet_core::construct::{hessian_net, pencil_net, torus_net, TorusOptions};
use planet_core::cubic::is_algebraic;
use planet_core::net::{euler_feasible, verify_net};
use planet_core::quasigroup::{group_identify, latin_from_net, normalize_to_loop};
use planet_core::resonance::net_resonance;
use planet_core::{ApproxComplex, CyclotomicField};

fn feasibility(c: &mut Criterion) {
    c.bench_function("euler_feasible table", |b| {
        b.iter(|| {
            let mut n = 0;
            for r in 0..3 {
                for k in 3..=10 {
                    for m in 2..=50 {
                        n += euler_feasible(black_box(k), m, r).unwrap().feasible as usize;
                    }
                }
            }
            n
        })
    });
}

fn verification(c: &mut Criterion) {
    let q = CyclotomicField::new(8).unwrap();
    let exact = pencil_net(&q, 8).unwrap();
    c.bench_function("verify pencil m=8 exact", |b| b.iter(|| verify_net(black_box(&exact)).unwrap()));

    let f = ApproxComplex::default();
    let torus = torus_net(&f, &[2, 4], &TorusOptions::default()).unwrap();
    c.bench_function("verify torus (2,4)", |b| b.iter(|| verify_net(black_box(&torus)).unwrap()));
    c.bench_function("construct torus (2,4)", |b| {
        b.iter(|| torus_net(&f, black_box(&[2, 4]), &TorusOptions::default()).unwrap())
    });
}

fn groups(c: &mut Criterion) {
    let f = ApproxComplex::default();
    let torus = torus_net(&f, &[3, 3], &TorusOptions::default()).unwrap();
    let ls = latin_from_net(&torus, None).unwrap();
    c.bench_function("latin square torus (3,3)", |b| b.iter(|| latin_from_net(black_box(&torus), None).unwrap()));
    c.bench_function("group_identify order 9", |b| {
        b.iter(|| group_identify(&normalize_to_loop(black_box(&ls), 0, 0).unwrap()))
    });
}

fn algebra(c: &mut Criterion) {
    let f = ApproxComplex::default();
    let torus = torus_net(&f, &[2, 4], &TorusOptions::default()).unwrap();
    let mut g = c.benchmark_group("cubics");
    g.sample_size(20);
    g.bench_function("is_algebraic torus (2,4)", |b| b.iter(|| is_algebraic(black_box(&torus)).unwrap()));
    g.finish();

    let q = CyclotomicField::new(3).unwrap();
    let hesse = hessian_net(&q).unwrap();
    c.bench_function("resonance hessian exact", |b| b.iter(|| net_resonance(black_box(&hesse)).unwrap()));
}

criterion_group!(benches, feasibility, verification, groups, algebra);
criterion_main!(benches);
