//! Exhaustive checks of the distance facts each fixture is built on.
//!
//! Points are constructed directly from their descriptions, so the checks
//! can range past the dense truncation (e.g. `i ≤ 64` for the pse
//! sequences, or dyadics of depth 32). Every fixture also gets a check of
//! its case table against an independently written reference formula,
//! and a full axiom audit on a small sample.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{
    arc_abscissas, disk_points, dyadic, CirclePoint, DyadicPoint, Fixture, FixtureSpace, PnPoint,
    PsePoint,
};
use crate::arith::{rational, QuadTower, Rational};
use crate::space::{audit_axioms, Point, Space};
use crate::value::ExactValue;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityResult {
    pub identity: String,
    pub status: Status,
    /// Number of instances examined.
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IdentityReport(pub Vec<IdentityResult>);

impl IdentityReport {
    pub fn all_pass(&self) -> bool {
        self.0.iter().all(|r| r.status == Status::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityResult> {
        self.0.iter().filter(|r| r.status == Status::Fail)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct IdentityBounds {
    /// Sequence indices (pse), arc abscissas (pn) and disk points (circle)
    /// examined.
    pub resolution: usize,
    /// Sequence indices for `d((a_i,n),(a'_i,n)) = 1`.
    pub long_range: usize,
    /// Dyadic samples, and their maximal depth.
    pub samples: usize,
    pub sample_depth: usize,
}

impl Default for IdentityBounds {
    fn default() -> Self {
        IdentityBounds {
            resolution: 32,
            long_range: 64,
            samples: 200,
            sample_depth: 32,
        }
    }
}

fn show(p: &Point) -> String {
    serde_json::to_string(p).expect("points serialize")
}

struct Checker<'a> {
    space: &'a dyn Space,
    out: Vec<IdentityResult>,
}

impl<'a> Checker<'a> {
    /// Runs `test` over `cases`; a failing case returns its description.
    fn check<T>(&mut self, identity: &str, cases: impl IntoIterator<Item = T>, test: impl Fn(&T) -> Option<String>) {
        let mut checked = 0;
        let mut counterexample = None;
        for c in cases {
            checked += 1;
            if let Some(why) = test(&c) {
                counterexample = Some(why);
                break;
            }
        }
        self.out.push(IdentityResult {
            identity: identity.to_string(),
            status: if counterexample.is_some() { Status::Fail } else { Status::Pass },
            checked,
            counterexample,
        });
    }

    /// `d(p, q)` compared with `r`; fails unless the ordering is `want`.
    fn pairs_vs(&mut self, identity: &str, pairs: Vec<(Point, Point)>, r: impl Fn(&Point, &Point) -> Rational, want: &[Ordering]) {
        let space = self.space;
        self.check(identity, pairs, |(p, q)| {
            let d = space.dist(p, q);
            let r = r(p, q);
            (!want.contains(&d.cmp_rational(&r)))
                .then(|| format!("d({}, {}) = {d}, against {}", show(p), show(q), rational::format(&r)))
        });
    }

    fn matches_reference(&mut self, identity: &str, points: &[Point], reference: impl Fn(&Point, &Point) -> ExactValue) {
        let space = self.space;
        let pairs = points.iter().flat_map(|p| points.iter().map(move |q| (p, q)));
        self.check(identity, pairs, |(p, q)| {
            let d = space.dist(p, q);
            let r = reference(p, q);
            (d.cmp_value(&r) != Ordering::Equal)
                .then(|| format!("d({}, {}) = {d}, reference {r}", show(p), show(q)))
        });
    }

    fn axioms(&mut self, identity: &str, points: &[Point]) {
        let outcome = audit_axioms(self.space, points);
        self.out.push(IdentityResult {
            identity: identity.to_string(),
            status: if outcome.is_ok() { Status::Pass } else { Status::Fail },
            checked: points.len(),
            counterexample: outcome.err().map(|e| e.to_string()),
        });
    }
}

fn cross<T: Clone>(a: &[T], b: &[T]) -> Vec<(T, T)> {
    a.iter().flat_map(|x| b.iter().map(move |y| (x.clone(), y.clone()))).collect()
}

fn distinct_pairs<T: Clone>(a: &[T]) -> Vec<(T, T)> {
    let mut out = Vec::new();
    for (i, x) in a.iter().enumerate() {
        for y in &a[i + 1..] {
            out.push((x.clone(), y.clone()));
        }
    }
    out
}

const LT: &[Ordering] = &[Ordering::Less];
const EQ: &[Ordering] = &[Ordering::Equal];
const GT: &[Ordering] = &[Ordering::Greater];
const GE: &[Ordering] = &[Ordering::Greater, Ordering::Equal];

/// Verifies the fixture's distance identities exactly within `bounds`.
pub fn check_fixture_identities(fixture: &Fixture, bounds: &IdentityBounds) -> IdentityReport {
    let space = fixture.space();
    let mut c = Checker {
        space: space.as_ref(),
        out: Vec::new(),
    };
    match &fixture.space {
        FixtureSpace::Pse(_) => pse_identities(&mut c, fixture, bounds),
        FixtureSpace::Pn(_) => pn_identities(&mut c, fixture, bounds),
        FixtureSpace::Dyadic(_) => dyadic_identities(&mut c, fixture, bounds),
        FixtureSpace::Circle(_) => circle_identities(&mut c, fixture, bounds),
    }
    IdentityReport(c.out)
}

fn one(_: &Point, _: &Point) -> Rational {
    Rational::one()
}

fn pse_identities(c: &mut Checker<'_>, fixture: &Fixture, bounds: &IdentityBounds) {
    let copies = fixture.family().len();
    let r = bounds.resolution;
    let a = |i, n| Point::Pse(PsePoint::A { i, n });
    let ap = |i, n| Point::Pse(PsePoint::APrime { i, n });
    let labels = |n: usize| -> Vec<Point> {
        fixture
            .family()
            .set(n)
            .iter()
            .map(|l| Point::Pse(PsePoint::Label { n, label: l.name.clone() }))
            .collect()
    };
    let mut all = Vec::new();
    for n in 0..copies {
        for i in 1..=r {
            all.push(a(i, n));
            all.push(ap(i, n));
        }
        all.extend(labels(n));
    }

    let mut label_pairs = Vec::new();
    for n in 0..copies {
        for i in 1..=r {
            for s in labels(n) {
                label_pairs.push((ap(i, n), s));
            }
        }
    }
    c.pairs_vs(
        "pse: d((a'_i,n), s) = 1/i for every s in Y_n",
        label_pairs,
        |p, _| match p {
            Point::Pse(PsePoint::APrime { i, .. }) => rational::ratio(1, *i as i64),
            _ => unreachable!(),
        },
        EQ,
    );

    let space = c.space;
    let mut sequence_pairs = Vec::new();
    for n in 0..copies {
        for i in 1..=r {
            for j in 1..=r {
                if i != j {
                    sequence_pairs.push((i, j, n));
                }
            }
        }
    }
    c.check(
        "pse: d((a_i,n),(a_j,n)) = sqrt(((i+1)/i)^2 + ((j+1)/j)^2) > 1 for i != j",
        sequence_pairs,
        |&(i, j, n)| {
            let d = space.dist(&a(i, n), &a(j, n));
            let u = rational::ratio(i as i64 + 1, i as i64);
            let v = rational::ratio(j as i64 + 1, j as i64);
            let expect = ExactValue::sqrt_rational(&(&u * &u + &v * &v)).expect("positive");
            (d.cmp_value(&expect) != Ordering::Equal || !d.gt(&Rational::one()))
                .then(|| format!("d(a_{i}, a_{j}) in copy {n} is {d}"))
        },
    );

    let mut unit_pairs = Vec::new();
    for n in 0..copies {
        for i in 1..=bounds.long_range {
            unit_pairs.push((a(i, n), ap(i, n)));
        }
    }
    c.pairs_vs("pse: d((a_i,n),(a'_i,n)) = 1", unit_pairs, one, EQ);

    let mut near_label = Vec::new();
    for n in 0..copies {
        for s in labels(n) {
            for t in &all {
                let in_yn = matches!(t, Point::Pse(PsePoint::Label { n: m, .. }) if *m == n);
                if !in_yn {
                    near_label.push((s.clone(), t.clone()));
                }
            }
        }
    }
    c.check(
        "pse: s in Y_n, t outside Y_n and d(s,t) <= 1 forces t = (a'_i,n)",
        near_label,
        |(s, t)| {
            let n = match s {
                Point::Pse(p) => p.copy(),
                _ => unreachable!(),
            };
            let ok = !space.dist(s, t).le(&Rational::one())
                || matches!(t, Point::Pse(PsePoint::APrime { n: m, .. }) if *m == n);
            (!ok).then(|| format!("d({}, {}) <= 1", show(s), show(t)))
        },
    );

    let cross_pairs: Vec<(Point, Point)> = cross(&all, &all)
        .into_iter()
        .filter(|(p, q)| match (p, q) {
            (Point::Pse(p), Point::Pse(q)) => p.copy() != q.copy(),
            _ => false,
        })
        .collect();
    c.pairs_vs("pse: points of different copies are at distance 3", cross_pairs, |_, _| rational::int(3), EQ);

    let within: Vec<(Point, Point)> = (0..copies).flat_map(|n| cross(&labels(n), &labels(n))).collect();
    c.pairs_vs("pse: labels of one Y_n are at distance 0", within, |_, _| Rational::zero(), EQ);

    c.matches_reference("pse: metric cases agree with the l2 distance", &all, pse_reference);

    let sample: Vec<Point> = all
        .iter()
        .filter(|p| match p {
            Point::Pse(PsePoint::A { i, n } | PsePoint::APrime { i, n }) => *i <= 6 && *n < 2,
            Point::Pse(PsePoint::Label { n, .. }) => *n < 2,
            _ => false,
        })
        .cloned()
        .collect();
    c.axioms("pse: pseudometric axioms on a sample", &sample);
}

/// `d` from the definition: `3` across copies, `0` within `Y_n`, and
/// otherwise the `ℓ²` distance with labels at the zero sequence.
fn pse_reference(p: &Point, q: &Point) -> ExactValue {
    let (Point::Pse(p), Point::Pse(q)) = (p, q) else {
        unreachable!()
    };
    if p.copy() != q.copy() {
        return ExactValue::int(3);
    }
    let coords = |x: &PsePoint| -> Vec<(usize, Rational)> {
        match *x {
            PsePoint::A { i, .. } => vec![(i, Rational::new(BigInt::from(i + 1), BigInt::from(i)))],
            PsePoint::APrime { i, .. } => vec![(i, Rational::new(BigInt::one(), BigInt::from(i)))],
            PsePoint::Label { .. } => vec![],
        }
    };
    let (u, v) = (coords(p), coords(q));
    let mut sum = Rational::zero();
    for (k, x) in &u {
        let y = v.iter().find(|(l, _)| l == k).map_or_else(Rational::zero, |(_, y)| y.clone());
        sum += (x - &y) * (x - &y);
    }
    for (k, y) in &v {
        if !u.iter().any(|(l, _)| l == k) {
            sum += y * y;
        }
    }
    ExactValue::sqrt_rational(&sum).expect("non-negative")
}

fn pn_identities(c: &mut Checker<'_>, fixture: &Fixture, bounds: &IdentityBounds) {
    let copies = fixture.family().len();
    let xs = arc_abscissas(bounds.resolution);
    let arc = |n: usize, sheet: u8| -> Vec<Point> {
        xs.iter().map(|x| Point::Pn(PnPoint::Arc { n, sheet, x: x.clone() })).collect()
    };
    let copy = |n: usize, side: u8| -> Vec<Point> {
        fixture
            .family()
            .set(n)
            .iter()
            .map(|l| Point::Pn(PnPoint::Copy { n, side, label: l.name.clone() }))
            .collect()
    };
    let per_copy = |f: &dyn Fn(usize) -> Vec<(Point, Point)>| -> Vec<(Point, Point)> { (0..copies).flat_map(f).collect() };

    c.pairs_vs("pn: p(z,w) < 1 for z in A_n^0, w in A_n^1", per_copy(&|n| cross(&arc(n, 0), &arc(n, 1))), one, LT);
    c.pairs_vs(
        "pn: p(z1,z2) < 1 and p(w1,w2) < 1",
        per_copy(&|n| {
            let mut v = cross(&arc(n, 0), &arc(n, 0));
            v.extend(cross(&arc(n, 1), &arc(n, 1)));
            v
        }),
        one,
        LT,
    );
    c.pairs_vs(
        "pn: p(z,u) < 1 and p(w,v) < 1",
        per_copy(&|n| {
            let mut v = cross(&arc(n, 0), &copy(n, 0));
            v.extend(cross(&arc(n, 1), &copy(n, 1)));
            v
        }),
        one,
        LT,
    );
    c.pairs_vs(
        "pn: p(z,v) = 1 and p(w,u) = 1",
        per_copy(&|n| {
            let mut v = cross(&arc(n, 0), &copy(n, 1));
            v.extend(cross(&arc(n, 1), &copy(n, 0)));
            v
        }),
        one,
        EQ,
    );
    c.pairs_vs("pn: p(u,v) = 1", per_copy(&|n| cross(&copy(n, 0), &copy(n, 1))), one, EQ);
    c.pairs_vs(
        "pn: p(u1,u2) = 0 and p(v1,v2) = 0",
        per_copy(&|n| {
            let mut v = cross(&copy(n, 0), &copy(n, 0));
            v.extend(cross(&copy(n, 1), &copy(n, 1)));
            v
        }),
        |_, _| Rational::zero(),
        EQ,
    );

    let mut everything = Vec::new();
    for n in 0..copies {
        for s in [0, 1] {
            everything.extend(arc(n, s));
            everything.extend(copy(n, s));
        }
    }
    let space = c.space;
    for side in [0u8, 1] {
        let pairs: Vec<(Point, Point)> = (0..copies).flat_map(|n| cross(&copy(n, side), &everything)).collect();
        c.check(
            &format!("pn: p(u,z) < 1 for u in X_n x {{{side}}} forces z in A_n^{side} or the same copy"),
            pairs,
            |(u, z)| {
                let Point::Pn(PnPoint::Copy { n, .. }) = u else { unreachable!() };
                let allowed = match z {
                    Point::Pn(PnPoint::Arc { n: m, sheet, .. }) => m == n && *sheet == side,
                    Point::Pn(PnPoint::Copy { n: m, side: s, .. }) => m == n && *s == side,
                    _ => false,
                };
                (space.dist(u, z).lt(&Rational::one()) && !allowed)
                    .then(|| format!("p({}, {}) < 1", show(u), show(z)))
            },
        );
    }

    c.matches_reference("pn: metric cases agree with the plane distance", &everything, pn_reference);

    let sample: Vec<Point> = everything
        .iter()
        .filter(|p| match p {
            Point::Pn(PnPoint::Arc { n, x, .. }) => *n < 2 && xs.iter().position(|y| y == x).is_some_and(|i| i < 4),
            Point::Pn(PnPoint::Copy { n, .. }) => *n < 2,
            _ => false,
        })
        .cloned()
        .collect();
    c.axioms("pn: pseudometric axioms on a sample", &sample);
}

/// Euclidean distance between the plane images, with the copies placed
/// at `(0, 2n)` and `(0, 2n+1)`.
fn pn_reference(p: &Point, q: &Point) -> ExactValue {
    let (Point::Pn(p), Point::Pn(q)) = (p, q) else {
        unreachable!()
    };
    let image = |z: &PnPoint| -> (Rational, QuadTower) {
        match z {
            PnPoint::Arc { n, sheet, x } => {
                let centre = rational::int(2 * *n as i64 + 1 - *sheet as i64);
                let sign = if *sheet == 0 { -Rational::one() } else { Rational::one() };
                let tower = QuadTower::from_parts(vec![Rational::one() - x * x], vec![centre, sign]).expect("tower");
                (x.clone(), tower)
            }
            PnPoint::Copy { n, side, .. } => (
                Rational::zero(),
                QuadTower::rational(rational::int(2 * *n as i64 + *side as i64)),
            ),
        }
    };
    let ((x1, y1), (x2, y2)) = (image(p), image(q));
    let dy = y1.sub(&y2);
    let sq = dy.mul(&dy).add_rational(&((&x1 - &x2) * (&x1 - &x2)));
    ExactValue::sqrt_tower(sq).expect("non-negative")
}

/// Deterministic dyadics `m/2^k`, `m` odd, spread over depths
/// `1..=depth` and the window `(-1, 3N+1)`.
fn dyadic_samples(count: usize, depth: usize, copies: usize) -> Vec<Rational> {
    let span = 3 * copies as u128 + 2;
    (0..count as u128)
        .map(|j| {
            let k = 1 + (j % depth.max(1) as u128) as u32;
            // an odd numerator m with m/2^k in (0, span)
            let slots = span << (k - 1);
            let m = 2 * (j * 7919 % slots) + 1;
            Rational::new(BigInt::from(m), BigInt::one() << k) - rational::int(1)
        })
        .collect()
}

fn dyadic_identities(c: &mut Checker<'_>, fixture: &Fixture, bounds: &IdentityBounds) {
    let copies = fixture.family().len();
    let samples = dyadic_samples(bounds.samples, bounds.sample_depth, copies);
    let d0: Vec<Point> = samples.iter().map(|x| Point::Dyadic(DyadicPoint::d0(x.clone()))).collect();
    let d1: Vec<Point> = samples.iter().map(|x| Point::Dyadic(DyadicPoint::d1_over(x))).collect();
    let labels: Vec<Vec<Point>> = (0..copies)
        .map(|n| {
            fixture
                .family()
                .set(n)
                .iter()
                .map(|l| {
                    Point::Dyadic(DyadicPoint::Label {
                        n,
                        label: l.name.clone(),
                        x: l.value.clone().expect("filled"),
                    })
                })
                .collect()
        })
        .collect();
    let all_labels: Vec<Point> = labels.concat();

    c.check(
        "dyadic: samples are dyadic and their shifts are not",
        samples.iter(),
        |x| {
            let third = rational::ratio(1, 3);
            (!rational::is_dyadic(x) || rational::is_dyadic(&(*x + &third)))
                .then(|| format!("sample {}", rational::format(x)))
        },
    );
    let mut shift_pairs: Vec<(Point, Point)> = d0.iter().cloned().zip(d1.iter().cloned()).collect();
    shift_pairs.extend(d1.iter().cloned().zip(d0.iter().cloned()));
    c.pairs_vs("dyadic: d(x, x+1/3) = 1 for x in D0", shift_pairs, one, EQ);
    c.pairs_vs("dyadic: D1 is strictly 1-separated", distinct_pairs(&d1), one, GT);
    c.pairs_vs(
        "dyadic: labels of one Y_n are less than 1 apart",
        labels.iter().flat_map(|set| distinct_pairs(set)).collect(),
        one,
        LT,
    );
    c.pairs_vs("dyadic: labels are more than 1 from D1", cross(&all_labels, &d1), one, GT);
    let mut across = Vec::new();
    for n in 0..copies {
        for m in 0..copies {
            if n != m {
                across.extend(cross(&labels[n], &labels[m]));
            }
        }
    }
    c.pairs_vs("dyadic: labels of different sets are more than 1 apart", across, one, GT);

    let mut points: Vec<Point> = d0.iter().take(24).cloned().collect();
    points.extend(d1.iter().take(24).cloned());
    points.extend(all_labels.iter().cloned());
    c.matches_reference("dyadic: metric cases agree with the case table", &points, dyadic_reference);

    let mut sample: Vec<Point> = d0.iter().take(8).cloned().collect();
    sample.extend(d1.iter().take(8).cloned());
    sample.extend(all_labels.iter().take(8).cloned());
    c.axioms("dyadic: metric axioms on a sample", &sample);

    // keep the default-position helper honest against the same validation
    debug_assert!(!rational::is_dyadic(&dyadic::default_position(0, 0)));
}

/// Shift every `D₁` point back by `1/3`; pairs involving exactly one `D₁`
/// point are `1 +` the shifted gap, two `D₁` points are `1 +` the gap, and
/// everything else is the plain gap.
fn dyadic_reference(p: &Point, q: &Point) -> ExactValue {
    let (Point::Dyadic(p), Point::Dyadic(q)) = (p, q) else {
        unreachable!()
    };
    if p == q {
        return ExactValue::zero();
    }
    let shifted = |z: &DyadicPoint| -> Rational {
        match z {
            DyadicPoint::D1 { x } => x - rational::ratio(1, 3),
            DyadicPoint::D0 { x } | DyadicPoint::Label { x, .. } => x.clone(),
        }
    };
    let gap = match (p.in_d1(), q.in_d1()) {
        (true, true) | (false, false) => (p.position() - q.position()).abs(),
        _ => (shifted(p) - shifted(q)).abs(),
    };
    if p.in_d1() || q.in_d1() {
        ExactValue::rational(gap + Rational::one())
    } else {
        ExactValue::rational(gap)
    }
}

fn circle_identities(c: &mut Checker<'_>, fixture: &Fixture, bounds: &IdentityBounds) {
    let copies = fixture.family().len();
    let disk = disk_points(bounds.resolution);
    let labels = |n: usize| -> Vec<Point> {
        fixture
            .family()
            .set(n)
            .iter()
            .map(|l| {
                Point::Circle(CirclePoint::Label {
                    n,
                    label: l.name.clone(),
                    t: l.value.clone().expect("filled"),
                })
            })
            .collect()
    };
    let disks = |n: usize| -> Vec<Point> {
        disk.iter()
            .map(|(x, y)| Point::Circle(CirclePoint::Disk { n, x: x.clone(), y: y.clone() }))
            .collect()
    };
    let centre = |n: usize| vec![Point::Circle(CirclePoint::centre(n))];

    c.pairs_vs(
        "circle: d((4n,0), y) = 1 for every label y of Y_n",
        (0..copies).flat_map(|n| cross(&centre(n), &labels(n))).collect(),
        one,
        EQ,
    );
    c.pairs_vs(
        "circle: d((4n,0), x) < 1 for disk points x",
        (0..copies)
            .flat_map(|n| cross(&centre(n), &disks(n)).into_iter().filter(|(p, q)| p != q))
            .collect(),
        one,
        LT,
    );
    let mut all = Vec::new();
    for n in 0..copies {
        all.extend(disks(n));
        all.extend(labels(n));
    }
    let across: Vec<(Point, Point)> = cross(&all, &all)
        .into_iter()
        .filter(|(p, q)| match (p, q) {
            (Point::Circle(p), Point::Circle(q)) => p.copy() != q.copy(),
            _ => false,
        })
        .collect();
    c.pairs_vs("circle: points of different copies are at least 1 apart", across, one, GE);

    let mut sample: Vec<Point> = Vec::new();
    for n in 0..copies.min(2) {
        sample.extend(disks(n).into_iter().take(8));
        sample.extend(labels(n));
    }
    c.matches_reference("circle: metric cases agree with the Euclidean distance", &sample, circle_reference);
    c.axioms("circle: metric axioms on a sample", &sample);
}

/// Euclidean distance, with labels mapped through the expanded form of the
/// rational parametrization.
fn circle_reference(p: &Point, q: &Point) -> ExactValue {
    let (Point::Circle(p), Point::Circle(q)) = (p, q) else {
        unreachable!()
    };
    let place = |z: &CirclePoint| -> (Rational, Rational) {
        match z {
            CirclePoint::Disk { n, x, y } => (x + Rational::from_integer(BigInt::from(4 * n)), y.clone()),
            CirclePoint::Label { n, t, .. } => {
                let s = Rational::one() + t * t;
                let x = (rational::int(2) - &s) / &s + Rational::from_integer(BigInt::from(4 * n));
                (x, (t + t) / s)
            }
        }
    };
    let ((x1, y1), (x2, y2)) = (place(p), place(q));
    let sq = (&x1 - &x2) * (&x1 - &x2) + (&y1 - &y2) * (&y1 - &y2);
    ExactValue::sqrt_rational(&sq).expect("non-negative")
}
