//! Input generators shared by the benchmarks.

use maxsep_core::arith::rational;
use maxsep_core::fixtures::{make_fixture, FamilyY, Fixture, FixtureKind, FixtureParams};
use maxsep_core::oracle::random_finite_metric;
use maxsep_core::{FiniteSpace, Rational, Surd};

/// Points `0, 1/3, 2/3, …` on the line, enumerated with a stride so the
/// greedy pass does not meet them in sorted order.
pub fn scattered_line(n: usize) -> FiniteSpace {
    let stride = (1..n.max(2)).rev().find(|s| gcd(*s, n) == 1).unwrap_or(1);
    let xs: Vec<Rational> = (0..n).map(|i| rational::ratio(((i * stride) % n) as i64, 3)).collect();
    FiniteSpace::line(&xs).expect("distinct points")
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `count` random finite metrics on `n` points.
pub fn random_metrics(count: usize, n: usize, seed: u64) -> Vec<FiniteSpace> {
    (0..count as u64).map(|i| random_finite_metric(n, seed.wrapping_add(i))).collect()
}

/// A fixture over a family of `sets` label sets of `labels` labels each.
pub fn fixture(kind: FixtureKind, sets: usize, labels: usize, resolution: usize) -> Fixture {
    let family = FamilyY::synthetic(&vec![labels; sets]).expect("nonempty family");
    let params = FixtureParams {
        resolution,
        ..FixtureParams::default()
    };
    make_fixture(kind, family, params).expect("valid fixture")
}

/// Pairs `(a + b√c, r)` with small deterministic coefficients.
pub fn surd_pairs(count: usize) -> Vec<(Surd, Rational)> {
    (0..count as i64)
        .map(|i| {
            let a = rational::ratio(i % 17 - 8, 1 + i % 5);
            let b = rational::ratio(i % 13 - 6, 1 + i % 7);
            let c = rational::ratio(2 + i % 29, 1 + i % 3);
            let r = rational::ratio(i % 31 - 15, 1 + i % 4);
            (Surd::new(a, b, c).expect("nonnegative radicand"), r)
        })
        .collect()
}
