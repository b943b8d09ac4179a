//! The plane space: two circle arcs per copy `n`, with the copies
//! `X_n × {0}` and `X_n × {1}` of the labels collapsed onto the arc
//! endpoints `(0, 2n)` and `(0, 2n+1)`.
//!
//! `A_n⁰` lies on the circle of radius 1 about `(0, 2n+1)` below height
//! `2n + 1/2`; `A_n¹` on the circle about `(0, 2n)` above it. Abscissas are
//! rationals in `(0, √3/2)`, so ordinates are single surds and squared
//! distances live in `ℚ(√(1−x₁²), √(1−x₂²))`.

use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{diagonal, Corruption, FamilyY};
use crate::arith::{rational, QuadTower, Rational};
use crate::space::{Point, Space, SpaceKind};
use crate::value::ExactValue;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PnPoint {
    /// A point of `A_n^sheet` with abscissa `x`.
    Arc {
        n: usize,
        sheet: u8,
        #[serde(with = "rational::serde_str")]
        x: Rational,
    },
    /// `(label, side)` in `X_n × {side}`.
    Copy { n: usize, side: u8, label: String },
}

pub const CASES: &[&str] = &["arc-arc", "arc-copy", "copy-copy"];

/// The first `count` rationals in `(0, √3/2)`, by denominator then
/// numerator.
pub fn arc_abscissas(count: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(count);
    let mut q: i64 = 2;
    while out.len() < count {
        for p in 1..q {
            // p/q < √3/2  ⇔  4p² < 3q²
            if p.gcd(&q) == 1 && 4 * p * p < 3 * q * q && out.len() < count {
                out.push(rational::ratio(p, q));
            }
        }
        q += 1;
    }
    out
}

/// Image of a point under the map `c` into the plane: `(x, y)` with `y` in
/// a quadratic extension.
pub fn plane_image(p: &PnPoint) -> (Rational, QuadTower) {
    match p {
        PnPoint::Arc { n, sheet, x } => {
            let root = Rational::one() - x * x;
            let base = rational::int(2 * *n as i64);
            let (a, b) = match sheet {
                0 => (base + Rational::one(), -Rational::one()),
                _ => (base, Rational::one()),
            };
            let y = QuadTower::from_parts(vec![root], vec![a, b]).expect("valid tower");
            (x.clone(), y)
        }
        PnPoint::Copy { n, side, .. } => (
            rational::int(0),
            QuadTower::rational(rational::int(2 * *n as i64 + *side as i64)),
        ),
    }
}

pub(crate) fn squared_distance(p: &PnPoint, q: &PnPoint) -> QuadTower {
    let (x1, y1) = plane_image(p);
    let (x2, y2) = plane_image(q);
    let dx = &x1 - &x2;
    let dy = y1.sub(&y2);
    dy.square().add_rational(&(&dx * &dx))
}

fn case(p: &PnPoint, q: &PnPoint) -> &'static str {
    match (p, q) {
        (PnPoint::Arc { .. }, PnPoint::Arc { .. }) => "arc-arc",
        (PnPoint::Copy { .. }, PnPoint::Copy { .. }) => "copy-copy",
        _ => "arc-copy",
    }
}

#[derive(Clone, Debug)]
pub struct PnSpace {
    family: FamilyY,
    arcs: Vec<Rational>,
    dense: Vec<Point>,
    corrupt: Corruption,
}

impl PnSpace {
    pub(crate) fn new(family: FamilyY, resolution: usize, corrupt: Corruption) -> Self {
        let arcs = arc_abscissas(resolution);
        let dense = diagonal(resolution, family.len())
            .into_iter()
            .flat_map(|(r, n)| {
                let x = arcs[r - 1].clone();
                [0, 1].map(|sheet| Point::Pn(PnPoint::Arc { n, sheet, x: x.clone() }))
            })
            .collect();
        PnSpace {
            family,
            arcs,
            dense,
            corrupt,
        }
    }

    pub fn family(&self) -> &FamilyY {
        &self.family
    }

    pub fn abscissas(&self) -> &[Rational] {
        &self.arcs
    }
}

fn pn(p: &Point) -> &PnPoint {
    match p {
        Point::Pn(p) => p,
        other => panic!("{other:?} is not a point of the pn fixture"),
    }
}

impl Space for PnSpace {
    fn dist(&self, p: &Point, q: &Point) -> ExactValue {
        let (p, q) = (pn(p), pn(q));
        if p == q {
            return ExactValue::zero();
        }
        let d = ExactValue::sqrt_tower(squared_distance(p, q)).expect("squares are non-negative");
        self.corrupt.apply(case(p, q), d)
    }

    fn dense_point(&self, index: usize) -> Option<Point> {
        index.checked_sub(1).and_then(|i| self.dense.get(i)).cloned()
    }

    fn dense_len(&self) -> Option<usize> {
        Some(self.dense.len())
    }

    fn extra_points(&self) -> Vec<Point> {
        let mut out = Vec::new();
        for (n, set) in self.family.sets().iter().enumerate() {
            for side in [0, 1] {
                for l in set {
                    out.push(Point::Pn(PnPoint::Copy {
                        n,
                        side,
                        label: l.name.clone(),
                    }));
                }
            }
        }
        out
    }

    fn kind(&self) -> SpaceKind {
        SpaceKind::Pseudometric
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abscissas_by_height() {
        let xs = arc_abscissas(6);
        let expect = [(1, 2), (1, 3), (2, 3), (1, 4), (3, 4), (1, 5)];
        assert_eq!(xs, expect.map(|(p, q)| rational::ratio(p, q)));
    }

    #[test]
    fn arc_points_lie_on_their_circles() {
        for x in arc_abscissas(32) {
            for (n, sheet) in [(0, 0), (3, 0), (0, 1), (2, 1)] {
                let p = PnPoint::Arc { n, sheet, x: x.clone() };
                let (px, py) = plane_image(&p);
                let centre = rational::int(2 * n as i64 + 1 - sheet as i64);
                let r2 = py.add_rational(&-centre).square().add_rational(&(&px * &px));
                assert_eq!(r2.as_rational(), Some(&Rational::one()));
            }
        }
    }
}
