use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use margulis_bench::{gens, sample_cocycle, schottky_pair};
use margulis_core::schottky::DRUMM_T_MAX;
use margulis_core::{
    cone_plot, crooked_disjoint, drumm_construct, enumerate_classes, h1_chart, spectrum_scan,
    ConePlotOptions,
};

fn spectrum(c: &mut Criterion) {
    let data = schottky_pair(4f64.ln() * 2.0);
    let (g, u) = (gens(&data), sample_cocycle());
    c.bench_function("enumerate_classes_8", |b| b.iter(|| enumerate_classes(black_box(2), 8)));
    c.bench_function("spectrum_scan_6", |b| b.iter(|| spectrum_scan(&g, black_box(&u), 6).unwrap()));
}

fn crooked(c: &mut Criterion) {
    let data = schottky_pair(4f64.ln() * 2.0);
    let res = drumm_construct(&data, &[1.0; 4], DRUMM_T_MAX).unwrap();
    let hs = res.certificate.halfspaces;
    c.bench_function("crooked_disjoint_pairs", |b| {
        b.iter(|| {
            let mut n = 0;
            for i in 0..hs.len() {
                for j in i + 1..hs.len() {
                    n += usize::from(crooked_disjoint(black_box(&hs[i]), &hs[j]).unwrap());
                }
            }
            n
        })
    });
    c.bench_function("drumm_construct", |b| {
        b.iter(|| drumm_construct(black_box(&data), &[1.0; 4], DRUMM_T_MAX).unwrap())
    });
}

fn cone(c: &mut Criterion) {
    let g = gens(&schottky_pair(3.0));
    let chart = h1_chart(&g).unwrap();
    let opts = ConePlotOptions::default();
    let mut group = c.benchmark_group("cone_plot");
    group.sample_size(10);
    group.bench_function("length_8", |b| b.iter(|| cone_plot(black_box(&g), 8, &chart, &opts).unwrap()));
    group.finish();
}

criterion_group!(benches, spectrum, crooked, cone);
criterion_main!(benches);
