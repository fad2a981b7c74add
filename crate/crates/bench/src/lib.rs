//! Criterion benchmarks for full-frame detection on a VGA board.

use std::hint::black_box;

use chess_core::baselines::{harris_detect, ptam_detect, HarrisParams, PtamParams};
use chess_core::detector::{detect_parallel, pre_blur, BlurKernel};
use chess_core::sweep::benchmark_frame;
use chess_core::{detect, select_features, RingGeometry, SelectConfig};
use criterion::{Criterion, Throughput};

pub fn benchmarks(c: &mut Criterion) {
    let frame = benchmark_frame().expect("benchmark frame renders");
    let geom = RingGeometry::radius5();
    let pixels = (frame.width() * frame.height()) as u64;

    let mut group = c.benchmark_group("vga");
    group.throughput(Throughput::Elements(pixels));
    group.bench_function("chess", |b| b.iter(|| detect(black_box(&frame), &geom).unwrap()));
    group.bench_function("chess_parallel", |b| {
        b.iter(|| detect_parallel(black_box(&frame), &geom).unwrap())
    });
    group.bench_function("chess_blur5", |b| {
        b.iter(|| detect(&pre_blur(black_box(&frame), BlurKernel::Gauss5), &geom).unwrap())
    });
    let harris = HarrisParams::default();
    group.bench_function("harris", |b| b.iter(|| harris_detect(black_box(&frame), &harris).unwrap()));
    let ptam = PtamParams::default();
    group.bench_function("ptam", |b| b.iter(|| ptam_detect(black_box(&frame), &ptam).unwrap()));
    group.finish();

    let resp = detect(&frame, &geom).unwrap();
    let cfg = SelectConfig::default();
    c.bench_function("select_features", |b| {
        b.iter(|| select_features(black_box(&resp), &cfg).unwrap())
    });
}
