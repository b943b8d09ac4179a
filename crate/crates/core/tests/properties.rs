use std::cmp::Ordering;
use std::sync::Arc;

use maxsep_core::arith::rational::{self, int, ratio};
use maxsep_core::encode::encode_point;
use maxsep_core::interval::IntervalSpace;
use maxsep_core::oracle::{enumerate_maximal_sets, random_finite_metric, random_finite_pseudometric};
use maxsep_core::separation::is_addable;
use maxsep_core::space::audit_axioms;
use maxsep_core::{
    build_maximal_strict, choose_in_closed, is_maximal_on_horizon, is_separated, quotient_to_metric, rescale,
    verify_trace, ExactValue, FiniteSpace, Mode, Point, Rational, SeparatedSet, Space, Surd,
};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

// Interval oracle for a + b√c against r, written independently of the
// library: bracket √c by integer square roots at increasing precision.
fn isqrt_bracket(c: &Rational, bits: u32) -> (Rational, Rational) {
    let scale = BigInt::from(1) << (2 * bits);
    // √(n/d) = √(n·d)/d
    let nd = c.numer() * c.denom() * &scale;
    let lo = nd.sqrt();
    let hi = if &lo * &lo == nd { lo.clone() } else { &lo + 1 };
    let den = c.denom() * (BigInt::from(1) << bits);
    (Rational::new(lo, den.clone()), Rational::new(hi, den))
}

fn is_rational_square(c: &Rational) -> bool {
    let n = c.numer();
    let d = c.denom();
    let rn = n.sqrt();
    let rd = d.sqrt();
    &rn * &rn == *n && &rd * &rd == *d
}

fn oracle_cmp(a: &Rational, b: &Rational, c: &Rational, r: &Rational) -> Ordering {
    if b.is_zero() || c.is_zero() {
        return a.cmp(r);
    }
    if is_rational_square(c) {
        let root = Rational::new(c.numer().sqrt(), c.denom().sqrt());
        return (a + b * root).cmp(r);
    }
    // An irrational value never equals r, so refinement terminates.
    let mut bits = 64;
    loop {
        let (lo, hi) = isqrt_bracket(c, bits);
        let (x, y) = if b.is_positive() { (a + b * &lo, a + b * &hi) } else { (a + b * &hi, a + b * &lo) };
        if &x > r {
            return Ordering::Greater;
        }
        if &y < r {
            return Ordering::Less;
        }
        bits *= 2;
        assert!(bits <= 1 << 14, "interval oracle failed to separate");
    }
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-1000i64..=1000, 1i64..=1000).prop_map(|(p, q)| ratio(p, q))
}

fn nonneg_rational() -> impl Strategy<Value = Rational> {
    (0i64..=1000, 1i64..=1000).prop_map(|(p, q)| ratio(p, q))
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn surd_cmp_matches_interval_oracle(a in small_rational(), b in small_rational(), c in nonneg_rational(), r in small_rational()) {
        let s = Surd::new(a.clone(), b.clone(), c.clone()).unwrap();
        prop_assert_eq!(s.cmp_rational(&r), oracle_cmp(&a, &b, &c, &r));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn canonicalization_is_idempotent(a in small_rational(), b in small_rational(), c in nonneg_rational()) {
        let s = Surd::new(a, b, c).unwrap();
        let again = Surd::new(s.a().clone(), s.b().clone(), s.c().clone()).unwrap();
        prop_assert_eq!(&again, &s);
        if s.b().is_zero() {
            prop_assert!(s.c().is_zero());
        }
    }

    #[test]
    fn square_roots_bracket_their_rounding(p in 1i64..=1000, q in 1i64..=1000, e1 in 1i64..=1000, e2 in 1i64..=1000) {
        let m = ratio(p, q);
        let sq = &m * &m;
        let below = &sq - &sq * ratio(e1, 1001);
        let above = &sq + ratio(e2, 1000);
        prop_assert_eq!(Surd::sqrt(&below).unwrap().cmp_rational(&m), Ordering::Less);
        prop_assert_eq!(Surd::sqrt(&above).unwrap().cmp_rational(&m), Ordering::Greater);
        prop_assert_eq!(Surd::sqrt(&sq).unwrap().cmp_rational(&m), Ordering::Equal);
    }

    #[test]
    fn same_radicand_sums_match_the_oracle(a1 in small_rational(), b1 in small_rational(), a2 in small_rational(), b2 in small_rational(), c in nonneg_rational(), r in small_rational()) {
        let s = Surd::new(a1.clone(), b1.clone(), c.clone()).unwrap();
        let t = Surd::new(a2.clone(), b2.clone(), c.clone()).unwrap();
        let sum = s.checked_add(&t).unwrap();
        prop_assert_eq!(sum.cmp_rational(&r), oracle_cmp(&(a1 + a2), &(b1 + b2), &c, &r));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_metrics_pass_the_audit(n in 1usize..=8, seed in any::<u64>()) {
        let s = random_finite_metric(n, seed);
        prop_assert!(audit_axioms(&s, &s.points()).is_ok());
        let p = random_finite_pseudometric(n, seed);
        prop_assert!(audit_axioms(&p, &p.points()).is_ok());
    }

    #[test]
    fn rescale_preserves_separation_over_all_subsets(seed in any::<u64>(), rp in 1i64..=12, rq in 1i64..=12, dp in 1i64..=8) {
        let space = random_finite_metric(6, seed);
        let rho = ratio(rp, rq);
        let delta = ratio(dp, 4);
        let scaled = rescale(space.clone(), rho.clone()).unwrap();
        for ids in subsets(6) {
            let points: Vec<Point> = ids.iter().map(|&i| space.point(i)).collect();
            for mode in [Mode::Strict, Mode::Nonstrict] {
                let here = SeparatedSet::new(points.clone(), delta.clone(), mode);
                let there = SeparatedSet::new(points.clone(), &delta * &rho, mode);
                prop_assert_eq!(is_separated(&space, &here).is_ok(), is_separated(&scaled, &there).is_ok());
            }
        }
    }

    #[test]
    fn quotient_is_definite_and_preserves_distances(n in 1usize..=8, seed in any::<u64>()) {
        let space: Arc<dyn Space> = Arc::new(random_finite_pseudometric(n, seed));
        let (q, reps) = quotient_to_metric(space.clone()).unwrap();
        let classes: Vec<Point> = (1..=q.dense_len().unwrap()).filter_map(|i| q.dense_point(i)).chain(q.extra_points()).collect();
        for (i, x) in classes.iter().enumerate() {
            for y in &classes[i + 1..] {
                prop_assert!(!q.dist(x, y).is_zero());
            }
        }
        let originals: Vec<Point> = (1..=n).filter_map(|i| space.dense_point(i)).collect();
        for x in &originals {
            prop_assert!(space.dist(x, &reps[x]).is_zero());
            for y in &originals {
                prop_assert_eq!(q.dist(&reps[x], &reps[y]).cmp_value(&space.dist(x, y)), Ordering::Equal);
            }
        }
    }

    #[test]
    fn non_maximality_persists_at_larger_horizons(n in 2usize..=8, seed in any::<u64>(), keep in 0usize..4) {
        let space = random_finite_metric(n, seed);
        let (full, _, _) = build_maximal_strict(&space, &int(1), n, n).unwrap();
        let partial = SeparatedSet::new(full.points[..keep.min(full.len())].to_vec(), int(1), Mode::Strict);
        let mut failed = false;
        for horizon in 1..=n {
            let ok = is_maximal_on_horizon(&space, &partial, horizon).maximal_on_horizon;
            prop_assert!(!(failed && ok), "witness vanished at horizon {}", horizon);
            failed |= !ok;
        }
    }

    #[test]
    fn greedy_is_deterministic_and_traces_verify(n in 1usize..=8, seed in any::<u64>(), dp in 1i64..=8) {
        let space = random_finite_metric(n, seed);
        let delta = ratio(dp, 4);
        let a = build_maximal_strict(&space, &delta, n, n).unwrap();
        let b = build_maximal_strict(&space, &delta, n, n).unwrap();
        prop_assert_eq!(&a.1, &b.1);
        prop_assert!(verify_trace(&space, &a.1, &delta));
        prop_assert!(a.2.ok());
    }

    #[test]
    fn modes_agree_away_from_the_boundary(n in 1usize..=7, seed in any::<u64>()) {
        let space = random_finite_metric(n, seed);
        // Distances are multiples of 1/4; 1/8-offset radii never hit one.
        let delta = ratio(9, 8);
        prop_assert_eq!(
            enumerate_maximal_sets(&space, &delta, Mode::Strict).unwrap(),
            enumerate_maximal_sets(&space, &delta, Mode::Nonstrict).unwrap()
        );
    }

    #[test]
    fn encodings_separate_points(seed in any::<u64>()) {
        let space = random_finite_metric(6, seed);
        // Distances are at least 1/4, so radius 1/5 isolates each point.
        let codes: Vec<Vec<usize>> = space.points().iter().map(|x| encode_point(&space, x, 5, 6).unwrap()).collect();
        for i in 0..codes.len() {
            for j in i + 1..codes.len() {
                prop_assert_ne!(&codes[i], &codes[j]);
            }
        }
    }

    #[test]
    fn selector_contracts_on_the_interval(p in 0i64..=64, q in 0i64..=64, steps in 1usize..=16) {
        let space = IntervalSpace::unit();
        let (lo, hi) = (ratio(p.min(q), 64), ratio(p.max(q), 64));
        let closed = space.closed_interval(lo, hi);
        let choice = choose_in_closed(&space, &closed, steps, 1 << 20).unwrap();
        for (k, w) in choice.points.windows(2).enumerate() {
            prop_assert!(space.dist(&w[1], &w[0]).lt(&rational::inv_pow2(k as u32 + 1)));
        }
        let Point::Real { x } = choice.point() else { unreachable!() };
        let gap = closed.distance(x).unwrap();
        prop_assert!(gap < rational::inv_pow2(steps as u32));
    }
}

#[test]
fn exact_delta_pair_splits_the_modes() {
    let space = FiniteSpace::line(&[int(0), int(1)]).unwrap();
    let strict = enumerate_maximal_sets(&space, &int(1), Mode::Strict).unwrap();
    let nonstrict = enumerate_maximal_sets(&space, &int(1), Mode::Nonstrict).unwrap();
    assert_eq!(strict, vec![vec![0], vec![1]]);
    assert_eq!(nonstrict, vec![vec![0, 1]]);
}

#[test]
fn rescaling_two_point_space() {
    let space = FiniteSpace::line(&[int(0), int(2)]).unwrap();
    let scaled = rescale(space.clone(), ratio(1, 2)).unwrap();
    assert_eq!(scaled.dist(&space.point(0), &space.point(1)).cmp_rational(&int(1)), Ordering::Equal);
    let same = rescale(space.clone(), int(1)).unwrap();
    assert_eq!(same.dist(&space.point(0), &space.point(1)).cmp_value(&ExactValue::int(2)), Ordering::Equal);
}

#[test]
fn addability_matches_mode() {
    let space = FiniteSpace::line(&[int(0), int(1)]).unwrap();
    let s = [space.point(0)];
    assert!(!is_addable(&space, &s, &int(1), Mode::Strict, &space.point(1)));
    assert!(is_addable(&space, &s, &int(1), Mode::Nonstrict, &space.point(1)));
}
