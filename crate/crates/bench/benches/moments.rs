use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use iid_moments::oracle::brute_force_moment;
use iid_moments::{enumerate_partitions, evaluate, moment_of_sum, Mode, MomentAssignment};

fn partitions(c: &mut Criterion) {
    c.bench_function("enumerate_partitions(25)", |b| {
        b.iter(|| enumerate_partitions(black_box(25)).unwrap())
    });
}

fn expansion(c: &mut Criterion) {
    let mut group = c.benchmark_group("moment_of_sum");
    for p in [6u32, 12, 18] {
        group.bench_function(format!("general p={p}"), |b| {
            b.iter(|| moment_of_sum(black_box(p), Mode::General).unwrap())
        });
    }
    group.finish();
}

fn evaluation(c: &mut Criterion) {
    let e = moment_of_sum(12, Mode::General).unwrap();
    let normal = MomentAssignment::standard_normal(12);
    c.bench_function("evaluate p=12 n=10^6", |b| {
        b.iter(|| evaluate(&e, black_box(1_000_000), &normal).unwrap())
    });
    let ones = MomentAssignment::all_ones(6);
    c.bench_function("brute_force p=6 n=5", |b| {
        b.iter(|| brute_force_moment(black_box(6), black_box(5), &ones).unwrap())
    });
}

criterion_group!(benches, partitions, expansion, evaluation);
criterion_main!(benches);
