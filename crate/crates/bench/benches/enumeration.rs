use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use paircorr_core::grid::Rational;
use paircorr_core::pair::{build_logset, Source, WeightKind};
use paircorr_core::quadratic::Field;
use paircorr_core::Grid;

fn disk(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_disk_sq");
    for (name, g) in [("gauss", Grid::gauss()), ("eisenstein", Grid::eisenstein())] {
        for n in [50i128, 200] {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| {
                b.iter(|| black_box(g.enumerate_disk_sq(Rational::from_integer(n * n), true).len()))
            });
        }
    }
    group.finish();
}

fn logsets(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_logset");
    let ideal = Source::ideal(Field::gaussian().element(1, 1));
    for n in [30u64, 100] {
        group.bench_with_input(BenchmarkId::new("unit", n), &n, |b, &n| {
            b.iter(|| build_logset(&Source::Grid(Grid::gauss()), n, WeightKind::Unit).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("euler", n), &n, |b, &n| {
            b.iter(|| build_logset(&ideal, n, WeightKind::EulerPhi).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, disk, logsets);
criterion_main!(benches);
