use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use maxsep_bench::{fixture, random_metrics, scattered_line, surd_pairs};
use maxsep_core::arith::rational;
use maxsep_core::fixtures::{check_fixture_identities, FixtureKind, IdentityBounds};
use maxsep_core::oracle::enumerate_maximal_sets;
use maxsep_core::{build_maximal_strict, Mode, Space};

fn surd_compare(c: &mut Criterion) {
    let pairs = surd_pairs(1024);
    c.bench_function("surd_cmp/1024", |b| {
        b.iter(|| {
            for (s, r) in &pairs {
                black_box(s.cmp_rational(r));
            }
        })
    });
}

fn greedy(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_maximal_strict/line");
    let delta = rational::int(1);
    for n in [64, 256, 1024] {
        let space = scattered_line(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &space, |b, space| {
            b.iter(|| build_maximal_strict(space, &delta, n, n).unwrap())
        });
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_maximal_sets");
    let delta = rational::int(1);
    for n in [8, 12, 16] {
        let spaces = random_metrics(4, n, 7);
        group.bench_with_input(BenchmarkId::from_parameter(n), &spaces, |b, spaces| {
            b.iter(|| {
                for s in spaces {
                    black_box(enumerate_maximal_sets(s, &delta, Mode::Strict).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn fixtures(c: &mut Criterion) {
    let mut group = c.benchmark_group("fixture_extend");
    group.sample_size(10);
    for kind in [FixtureKind::Pse, FixtureKind::Dyadic, FixtureKind::Circle, FixtureKind::Pn] {
        let fx = fixture(kind, 4, 3, 16);
        group.bench_function(kind.to_string(), |b| b.iter(|| fx.extend().unwrap()));
    }
    group.finish();

    let mut group = c.benchmark_group("fixture_identities");
    group.sample_size(10);
    let bounds = IdentityBounds {
        resolution: 16,
        ..IdentityBounds::default()
    };
    for kind in [FixtureKind::Pse, FixtureKind::Dyadic, FixtureKind::Circle] {
        let fx = fixture(kind, 4, 3, 16);
        group.bench_function(kind.to_string(), |b| b.iter(|| check_fixture_identities(&fx, &bounds)));
    }
    group.finish();

    let pn = fixture(FixtureKind::Pn, 2, 2, 16);
    let space = pn.space();
    let pts: Vec<_> = (1..=64).filter_map(|i| space.dense_point(i)).collect();
    c.bench_function("pn_dist/64x64", |b| {
        b.iter(|| {
            for p in &pts {
                for q in &pts {
                    black_box(space.dist(p, q).ge(&rational::int(1)));
                }
            }
        })
    });
}

criterion_group!(benches, surd_compare, greedy, oracle, fixtures);
criterion_main!(benches);
