//! Unit disks centred at `(4n, 0)`: rational interior points are dense, and
//! the labels of `Y_n` sit on the boundary circle via the rational
//! parametrization `t ↦ ((1−t²)/(1+t²), 2t/(1+t²))`.

use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{diagonal, Corruption, FamilyY};
use crate::arith::{rational, Rational};
use crate::space::{Point, Space, SpaceKind};
use crate::value::ExactValue;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CirclePoint {
    /// The point `(4n + x, y)` with `x² + y² < 1`.
    Disk {
        n: usize,
        #[serde(with = "rational::serde_str")]
        x: Rational,
        #[serde(with = "rational::serde_str")]
        y: Rational,
    },
    /// The label's image on the circle about `(4n, 0)`.
    Label {
        n: usize,
        label: String,
        #[serde(with = "rational::serde_str")]
        t: Rational,
    },
}

pub const CASES: &[&str] = &["disk-disk", "disk-label", "label-label"];

/// `t ↦ ((1−t²)/(1+t²), 2t/(1+t²))`.
pub fn circle_point(t: &Rational) -> (Rational, Rational) {
    let one = Rational::one();
    let t2 = t * t;
    let den = &one + &t2;
    ((&one - &t2) / &den, (t * rational::int(2)) / den)
}

impl CirclePoint {
    pub fn copy(&self) -> usize {
        match self {
            CirclePoint::Disk { n, .. } | CirclePoint::Label { n, .. } => *n,
        }
    }

    pub fn centre(n: usize) -> Self {
        CirclePoint::Disk {
            n,
            x: rational::int(0),
            y: rational::int(0),
        }
    }

    pub fn coordinates(&self) -> (Rational, Rational) {
        let (n, (x, y)) = match self {
            CirclePoint::Disk { n, x, y } => (*n, (x.clone(), y.clone())),
            CirclePoint::Label { n, t, .. } => (*n, circle_point(t)),
        };
        (x + rational::int(4 * n as i64), y)
    }
}

/// The first `count` rational points of the open unit disk, by common
/// denominator, then `x`, then `y`.
pub fn disk_points(count: usize) -> Vec<(Rational, Rational)> {
    let mut out = Vec::with_capacity(count);
    let mut q: i64 = 1;
    while out.len() < count {
        for a in -q..=q {
            for b in -q..=q {
                if out.len() < count && a * a + b * b < q * q && a.gcd(&b).gcd(&q) == 1 {
                    out.push((rational::ratio(a, q), rational::ratio(b, q)));
                }
            }
        }
        q += 1;
    }
    out
}

#[derive(Clone, Debug)]
pub struct CircleSpace {
    family: FamilyY,
    dense: Vec<Point>,
    corrupt: Corruption,
}

impl CircleSpace {
    pub(crate) fn new(family: FamilyY, resolution: usize, corrupt: Corruption) -> Self {
        let disk = disk_points(resolution);
        let dense = diagonal(resolution, family.len())
            .into_iter()
            .map(|(r, n)| {
                let (x, y) = disk[r - 1].clone();
                Point::Circle(CirclePoint::Disk { n, x, y })
            })
            .collect();
        CircleSpace {
            family,
            dense,
            corrupt,
        }
    }

    pub fn family(&self) -> &FamilyY {
        &self.family
    }

    /// The centres `(4n, 0)`.
    pub fn canonical_seed(&self) -> Vec<Point> {
        (0..self.family.len())
            .map(|n| Point::Circle(CirclePoint::centre(n)))
            .collect()
    }
}

fn circle(p: &Point) -> &CirclePoint {
    match p {
        Point::Circle(p) => p,
        other => panic!("{other:?} is not a point of the circle fixture"),
    }
}

pub(crate) fn euclid(p: &CirclePoint, q: &CirclePoint) -> ExactValue {
    let (x1, y1) = p.coordinates();
    let (x2, y2) = q.coordinates();
    let (dx, dy) = (x1 - x2, y1 - y2);
    ExactValue::sqrt_rational(&(&dx * &dx + &dy * &dy)).expect("sum of squares")
}

impl Space for CircleSpace {
    fn dist(&self, p: &Point, q: &Point) -> ExactValue {
        let (p, q) = (circle(p), circle(q));
        if p == q {
            return ExactValue::zero();
        }
        let case = match (p, q) {
            (CirclePoint::Disk { .. }, CirclePoint::Disk { .. }) => "disk-disk",
            (CirclePoint::Label { .. }, CirclePoint::Label { .. }) => "label-label",
            _ => "disk-label",
        };
        self.corrupt.apply(case, euclid(p, q))
    }

    fn dense_point(&self, index: usize) -> Option<Point> {
        index.checked_sub(1).and_then(|i| self.dense.get(i)).cloned()
    }

    fn dense_len(&self) -> Option<usize> {
        Some(self.dense.len())
    }

    fn extra_points(&self) -> Vec<Point> {
        self.family
            .sets()
            .iter()
            .enumerate()
            .flat_map(|(n, set)| {
                set.iter().map(move |l| {
                    Point::Circle(CirclePoint::Label {
                        n,
                        label: l.name.clone(),
                        t: FamilyY::value(l).clone(),
                    })
                })
            })
            .collect()
    }

    fn kind(&self) -> SpaceKind {
        SpaceKind::Metric
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_enumeration_starts_at_the_centre() {
        let pts = disk_points(10);
        assert_eq!(pts[0], (rational::int(0), rational::int(0)));
        assert_eq!(pts[1], (rational::ratio(-1, 2), rational::ratio(-1, 2)));
        assert!(pts.iter().all(|(x, y)| x * x + y * y < Rational::one()));
        let mut dedup = pts.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), pts.len());
    }

    #[test]
    fn parametrization_lands_on_the_circle() {
        for (p, q) in [(0, 1), (1, 1), (2, 1), (-3, 7), (5, 12)] {
            let (x, y) = circle_point(&rational::ratio(p, q));
            assert_eq!(&x * &x + &y * &y, Rational::one());
        }
    }
}
