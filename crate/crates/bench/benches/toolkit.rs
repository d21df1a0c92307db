//! Benchmarks for the pipeline's hot paths: one 2560-sample signal through
//! synthesis, decomposition and feature extraction, plus classifier
//! initialization and chunked sequential updates at working sizes.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use ndarray::{s, Array2};
use rand::Rng;

use pqd_core::dwt;
use pqd_core::features::{self, N_LEVELS};
use pqd_core::oselm::{one_hot, ActivationKind, OselmModel};
use pqd_core::seed;
use pqd_core::siggen::{generate_signal, EventClass, SignalSpec};

fn bench_siggen(c: &mut Criterion) {
    let spec = SignalSpec::default();
    let mut group = c.benchmark_group("siggen");
    // A plain sinusoid and the busiest composite class bracket the cost.
    group.bench_function("normal", |b| {
        let mut i = 0u64;
        b.iter(|| {
            i += 1;
            black_box(generate_signal(EventClass::Normal, i, &spec))
        });
    });
    group.bench_function("harmonics_transient", |b| {
        let mut i = 0u64;
        b.iter(|| {
            i += 1;
            black_box(generate_signal(EventClass::HarmonicsTransient, i, &spec))
        });
    });
    group.finish();
}

fn bench_dwt(c: &mut Criterion) {
    let spec = SignalSpec::default();
    let signal = generate_signal(EventClass::Harmonics, 7, &spec);
    let decomp = dwt::decompose(&signal.samples, N_LEVELS).expect("decompose");
    let mut group = c.benchmark_group("dwt");
    group.bench_function("decompose_11_levels", |b| {
        b.iter(|| black_box(dwt::decompose(black_box(&signal.samples), N_LEVELS).unwrap()));
    });
    group.bench_function("reconstruct_11_levels", |b| {
        b.iter(|| black_box(dwt::reconstruct(black_box(&decomp)).unwrap()));
    });
    group.finish();
}

fn bench_features(c: &mut Criterion) {
    let spec = SignalSpec::default();
    let signal = generate_signal(EventClass::Sag, 11, &spec);
    let decomp = dwt::decompose(&signal.samples, N_LEVELS).expect("decompose");
    c.bench_function("features/extract_66", |b| {
        b.iter(|| black_box(features::extract(black_box(&decomp), signal.label).unwrap()));
    });
}

fn bench_oselm(c: &mut Criterion) {
    // Working sizes: 66 inputs, 16 classes, 700 hidden nodes, 50-row chunks.
    let (l, dim, chunk) = (700usize, 66usize, 50usize);
    let classes: Vec<EventClass> = EventClass::ALL[1..].to_vec();
    let n0 = l + chunk;
    let mut rng = seed::rng(99, &[1]);
    let x = Array2::from_shape_fn((n0 + chunk, dim), |_| rng.random_range(-1.0..1.0));
    let labels: Vec<EventClass> = (0..x.nrows()).map(|i| classes[i % classes.len()]).collect();
    let t = one_hot(&labels, &classes);

    let mut group = c.benchmark_group("oselm");
    group.sample_size(20);
    group.bench_function("init_700_nodes", |b| {
        b.iter(|| {
            black_box(
                OselmModel::init_phase(
                    x.slice(s![..n0, ..]),
                    t.slice(s![..n0, ..]),
                    &classes,
                    l,
                    ActivationKind::Sigmoid,
                    42,
                )
                .unwrap(),
            )
        });
    });
    let model = OselmModel::init_phase(
        x.slice(s![..n0, ..]),
        t.slice(s![..n0, ..]),
        &classes,
        l,
        ActivationKind::Sigmoid,
        42,
    )
    .unwrap();
    group.bench_function("update_50_row_chunk", |b| {
        b.iter_batched(
            || model.clone(),
            |mut m| {
                m.sequential_update(x.slice(s![n0.., ..]), t.slice(s![n0.., ..])).unwrap();
                black_box(m)
            },
            criterion::BatchSize::LargeInput,
        );
    });
    let probe: Vec<f64> = (0..dim).map(|j| x[[0, j]]).collect();
    group.bench_function("predict_one", |b| {
        b.iter(|| black_box(model.predict(black_box(&probe))));
    });
    group.finish();
}

criterion_group!(benches, bench_siggen, bench_dwt, bench_features, bench_oselm);
criterion_main!(benches);
