use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use topoclass::harness::synth_blobs;
use topoclass::persistence::{bottleneck, h0_add_point, h0_diagram, vr_diagrams, VrParams};
use topoclass::pointcloud::{euclidean, pairwise_distances};

fn h0(c: &mut Criterion) {
    let mut group = c.benchmark_group("h0");
    for n in [100, 400, 1000] {
        let cloud = synth_blobs(2, n / 2, 5, 3.0, 1.0, 1).unwrap();
        let dm = pairwise_distances(&cloud).unwrap();
        group.bench_with_input(BenchmarkId::new("full", n), &dm, |b, dm| b.iter(|| h0_diagram(black_box(dm))));
        let (_, state) = h0_diagram(&dm);
        let x = [0.3, -0.2, 0.1, 0.0, 0.5];
        let to_new: Vec<f64> = cloud.points().map(|p| euclidean(p, &x)).collect();
        group.bench_with_input(BenchmarkId::new("add_point", n), &to_new, |b, d| {
            b.iter(|| h0_add_point(&state, black_box(d)).unwrap())
        });
    }
    group.finish();
}

fn vr(c: &mut Criterion) {
    let cloud = synth_blobs(2, 15, 3, 2.0, 1.0, 2).unwrap();
    let dm = pairwise_distances(&cloud).unwrap();
    c.bench_function("vr_dim2_30pts", |b| {
        b.iter(|| vr_diagrams(black_box(&dm), &VrParams::new(2, f64::INFINITY)).unwrap())
    });
}

fn bottleneck_bench(c: &mut Criterion) {
    let a = h0_diagram(&pairwise_distances(&synth_blobs(2, 100, 3, 3.0, 1.0, 3).unwrap()).unwrap()).0;
    let b = h0_diagram(&pairwise_distances(&synth_blobs(2, 100, 3, 3.0, 1.0, 4).unwrap()).unwrap()).0;
    c.bench_function("bottleneck_200x200", |bch| bch.iter(|| bottleneck(black_box(&a), black_box(&b)).unwrap()));
}

criterion_group!(benches, h0, vr, bottleneck_bench);
criterion_main!(benches);
