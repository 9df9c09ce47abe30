use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use mackey::chartab::character_table;
use mackey::spectrum::{fiber, stratify};
use mackey::twisted::omega_irreps;
use mackey_bench::{p4g, p4g_triangle, z1, z2};

fn bench_dual(c: &mut Criterion) {
    let g = p4g();
    let tri = p4g_triangle();
    c.bench_function("character_table_d4", |b| b.iter(|| character_table(black_box(g.point_group())).unwrap()));
    c.bench_function("stratify_p4g_triangle", |b| b.iter(|| stratify(&g, black_box(&tri)).unwrap()));
    let w = g.mackey_cocycle(&z2());
    c.bench_function("omega_irreps_z2", |b| b.iter(|| omega_irreps(black_box(&w)).unwrap()));
    c.bench_function("fiber_z1", |b| b.iter(|| fiber(&g, black_box(&z1())).unwrap()));
}

criterion_group!(benches, bench_dual);
criterion_main!(benches);
