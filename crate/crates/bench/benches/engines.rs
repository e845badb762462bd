use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use tmslab_bench::{circle_diam, line, matrix, plane_diam};
use tmslab_core::ac::{analyze, falsify_ac, AnalyzeConfig, FunctionSpec, Strategy, DEFAULT_DELTAS};
use tmslab_core::linear::{operator_norm, LinearMapSpec};
use tmslab_core::measure::nu_upper;
use tmslab_core::spaces::{Norm, OpenSet};
use tmslab_core::tms::{check_tms, NeighborhoodFamily};

fn measure(c: &mut Criterion) {
    let mut g = c.benchmark_group("nu_upper");
    let plane = plane_diam();
    let union = OpenSet::union(vec![OpenSet::ball(vec![0.0, 0.0], 0.5), OpenSet::ball(vec![2.0, 0.0], 0.25)]);
    for budget in [10, 100, 1000] {
        g.bench_with_input(BenchmarkId::new("two_balls", budget), &budget, |b, &budget| {
            b.iter(|| nu_upper(&plane.space, black_box(&union), budget).unwrap())
        });
    }
    let circle = circle_diam();
    g.bench_function("arc", |b| b.iter(|| nu_upper(&circle.space, black_box(&OpenSet::arc(0.3, 2.9)), 1000).unwrap()));
    g.finish();
}

fn axioms(c: &mut Criterion) {
    let mut g = c.benchmark_group("check_tms");
    g.sample_size(10);
    for (name, inst) in [("line_lebesgue", line()), ("plane_diam", plane_diam())] {
        g.bench_function(name, |b| b.iter(|| check_tms(black_box(&inst), 50, 7, NeighborhoodFamily::Basic).unwrap()));
    }
    g.finish();
}

fn verdicts(c: &mut Criterion) {
    let mut g = c.benchmark_group("ac");
    g.sample_size(10);
    let inst = line();
    g.bench_function("analyze_sin", |b| {
        b.iter(|| analyze(&FunctionSpec::Sin, black_box(&inst), 0.01, &AnalyzeConfig::default()).unwrap())
    });
    g.bench_function("falsify_square", |b| {
        b.iter(|| falsify_ac(&FunctionSpec::Square, black_box(&inst), 1.0, &DEFAULT_DELTAS, &Strategy::ALL, 7).unwrap())
    });
    g.finish();
}

fn norms(c: &mut Criterion) {
    let mut g = c.benchmark_group("operator_norm");
    for n in [4, 16, 64] {
        let map = LinearMapSpec::MatrixOnGrid { matrix: matrix(n), domain_norm: Norm::L2, codomain_norm: Norm::L2 };
        g.bench_with_input(BenchmarkId::new("matrix_l2", n), &map, |b, map| {
            b.iter(|| operator_norm(black_box(map), 200, 7).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, measure, axioms, verdicts, norms);
criterion_main!(benches);
