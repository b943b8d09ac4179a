//! The interval `[lo, hi]` with a dyadic dense enumeration, and closed sets
//! that are finite unions of closed intervals.
//!
//! The enumeration is `lo, hi`, then the midpoints at depth 1, then the odd
//! multiples of `(hi - lo)/4`, and so on. The space is complete, and
//! residual regions (a closed ball minus open balls) are computed exactly
//! as unions of closed intervals.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::{rational, Rational};
use crate::complete::{ClosedSet, RegionWitness, Residual};
use crate::space::{Point, Space, SpaceKind};
use crate::value::ExactValue;
use crate::Error;

#[derive(Clone, Debug)]
pub struct IntervalSpace {
    lo: Rational,
    hi: Rational,
}

impl IntervalSpace {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self, Error> {
        if lo >= hi {
            return Err(Error::Validation("interval needs lo < hi".into()));
        }
        Ok(IntervalSpace { lo, hi })
    }

    pub fn unit() -> Self {
        IntervalSpace {
            lo: rational::int(0),
            hi: rational::int(1),
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    fn coord<'a>(&self, p: &'a Point) -> &'a Rational {
        match p {
            Point::Real { x } => x,
            other => panic!("point {other:?} is not a real number"),
        }
    }

    /// The closed set `[a, b] ∩ [lo, hi]`.
    pub fn closed_interval(&self, a: Rational, b: Rational) -> ClosedIntervals {
        ClosedIntervals::new(vec![(a, b)]).clip(&self.lo, &self.hi)
    }

    pub fn closed_points(&self, xs: Vec<Rational>) -> ClosedIntervals {
        ClosedIntervals::new(xs.into_iter().map(|x| (x.clone(), x)).collect()).clip(&self.lo, &self.hi)
    }
}

impl Space for IntervalSpace {
    fn dist(&self, p: &Point, q: &Point) -> ExactValue {
        ExactValue::rational((self.coord(p) - self.coord(q)).abs())
    }

    fn dense_point(&self, index: usize) -> Option<Point> {
        let width = &self.hi - &self.lo;
        let x = match index {
            0 => return None,
            1 => self.lo.clone(),
            2 => self.hi.clone(),
            i => {
                let t = (i - 3) as u64;
                // depth j holds 2^(j-1) points; indices before it: 2^(j-1) - 1
                let depth = 64 - (t + 1).leading_zeros();
                let offset = t + 1 - (1u64 << (depth - 1));
                let m = 2 * offset + 1;
                let frac = Rational::new(BigInt::from(m), BigInt::from(1u8) << depth as usize);
                &self.lo + width * frac
            }
        };
        Some(Point::Real { x })
    }

    fn dense_len(&self) -> Option<usize> {
        None
    }

    fn dense_in_ball<'a>(
        &'a self,
        center: &Point,
        radius: &Rational,
        limit: usize,
    ) -> Option<Box<dyn Iterator<Item = (usize, Point)> + 'a>> {
        let (a, b) = (self.coord(center) - radius, self.coord(center) + radius);
        let inside = move |x: &Rational| &a < x && x < &b;
        let ends = [(1, self.lo.clone()), (2, self.hi.clone())]
            .into_iter()
            .filter(move |(i, x)| *i <= limit && inside(x))
            .map(|(i, x)| (i, Point::Real { x }));
        let width = &self.hi - &self.lo;
        // Scaled to the unit interval, the ball is (s, t).
        let s = (self.coord(center) - radius - &self.lo) / &width;
        let t = (self.coord(center) + radius - &self.lo) / &width;
        let depths = (1..63u32).take_while(move |j| (1usize << (j - 1)) + 2 <= limit);
        let inner = depths.flat_map(move |j| {
            let scale = Rational::from(BigInt::from(1u64 << j));
            let top = (1u64 << j) - 1;
            // Odd m with s < m/2^j < t.
            let lo_m: BigInt = (&s * &scale).floor().to_integer() + 1;
            let hi_m: BigInt = (&t * &scale).ceil().to_integer() - 1;
            let (first, last) = if lo_m > BigInt::from(top) || hi_m < BigInt::from(1u8) {
                (1, 0)
            } else {
                let first: u64 = lo_m.max(BigInt::from(1u8)).try_into().unwrap();
                let last: u64 = hi_m.min(BigInt::from(top)).try_into().unwrap();
                (first | 1, last)
            };
            let base = 1usize << (j - 1);
            (first..=last).step_by(2).map(move |m| {
                let index = base + 2 + (m as usize - 1) / 2;
                (index, m, j)
            })
        });
        let lo = self.lo.clone();
        let points = inner.take_while(move |(i, _, _)| *i <= limit).map(move |(i, m, j)| {
            let frac = Rational::new(BigInt::from(m), BigInt::from(1u8) << j as usize);
            (i, Point::Real { x: &lo + &width * frac })
        });
        Some(Box::new(ends.chain(points)))
    }

    fn kind(&self) -> SpaceKind {
        SpaceKind::Metric
    }

    fn is_complete(&self) -> bool {
        true
    }

    fn region_witness(&self) -> Option<&dyn RegionWitness> {
        Some(self)
    }

    fn point_to_json(&self, p: &Point) -> serde_json::Value {
        serde_json::Value::String(rational::format(self.coord(p)))
    }

    fn point_from_json(&self, v: &serde_json::Value) -> Result<Point, Error> {
        let s = v
            .as_str()
            .ok_or_else(|| Error::Schema("interval points are rational strings".into()))?;
        let x = rational::parse(s)?;
        if x < self.lo || x > self.hi {
            return Err(Error::Schema(format!("{s} lies outside the interval")));
        }
        Ok(Point::Real { x })
    }
}

impl RegionWitness for IntervalSpace {
    fn residual_nonempty(&self, region: &Residual) -> Option<bool> {
        Some(!self.residual_intervals(region).is_empty())
    }

    fn residual_set<'a>(&'a self, region: &'a Residual) -> Box<dyn ClosedSet + 'a> {
        Box::new(self.residual_intervals(region))
    }
}

impl IntervalSpace {
    fn residual_intervals(&self, region: &Residual) -> ClosedIntervals {
        let c = self.coord(&region.center);
        let mut set = self.closed_interval(c - &region.radius, c + &region.radius);
        for (e, r) in &region.exclusions {
            let e = self.coord(e);
            set = set.remove_open(&(e - r), &(e + r));
        }
        set
    }
}

/// A finite union of closed intervals `[a, b]` (points when `a = b`),
/// kept sorted and disjoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedIntervals {
    parts: Vec<(Rational, Rational)>,
}

impl ClosedIntervals {
    pub fn new(mut parts: Vec<(Rational, Rational)>) -> Self {
        parts.retain(|(a, b)| a <= b);
        parts.sort();
        let mut merged: Vec<(Rational, Rational)> = Vec::new();
        for (a, b) in parts {
            match merged.last_mut() {
                Some((_, end)) if a <= *end => {
                    if b > *end {
                        *end = b;
                    }
                }
                _ => merged.push((a, b)),
            }
        }
        ClosedIntervals { parts: merged }
    }

    pub fn parts(&self) -> &[(Rational, Rational)] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    fn clip(&self, lo: &Rational, hi: &Rational) -> Self {
        ClosedIntervals::new(
            self.parts
                .iter()
                .map(|(a, b)| (a.max(lo).clone(), b.min(hi).clone()))
                .collect(),
        )
    }

    /// Removes the open interval `(l, r)`.
    fn remove_open(&self, l: &Rational, r: &Rational) -> Self {
        let mut out = Vec::new();
        for (a, b) in &self.parts {
            if b <= l || a >= r {
                out.push((a.clone(), b.clone()));
                continue;
            }
            if a <= l {
                out.push((a.clone(), l.clone()));
            }
            if b >= r {
                out.push((r.clone(), b.clone()));
            }
        }
        ClosedIntervals::new(out)
    }

    /// Distance from `x` to the set.
    pub fn distance(&self, x: &Rational) -> Option<Rational> {
        self.parts
            .iter()
            .map(|(a, b)| {
                if x < a {
                    a - x
                } else if x > b {
                    x - b
                } else {
                    Rational::zero()
                }
            })
            .min()
    }

    /// Nearest member; ties go to the smaller value.
    pub fn nearest(&self, x: &Rational) -> Option<Rational> {
        self.parts
            .iter()
            .map(|(a, b)| {
                let y = if x < a {
                    a.clone()
                } else if x > b {
                    b.clone()
                } else {
                    x.clone()
                };
                ((&y - x).abs(), y)
            })
            .min()
            .map(|(_, y)| y)
    }

    pub fn member(&self, x: &Rational) -> bool {
        self.parts.iter().any(|(a, b)| a <= x && x <= b)
    }
}

fn real(p: &Point) -> &Rational {
    match p {
        Point::Real { x } => x,
        other => panic!("point {other:?} is not a real number"),
    }
}

impl ClosedSet for ClosedIntervals {
    fn meets_ball(&self, center: &Point, radius: &Rational) -> bool {
        self.distance(real(center)).is_some_and(|d| &d < radius)
    }

    fn contains(&self, p: &Point) -> Option<bool> {
        Some(self.member(real(p)))
    }

    fn snap(&self, p: &Point) -> Option<Point> {
        self.nearest(real(p)).map(Point::real)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, ratio};

    #[test]
    fn ball_listing_matches_a_scan() {
        let space = IntervalSpace::new(ratio(-1, 3), int(2)).unwrap();
        let limit = 600;
        for (c, r) in [(int(0), ratio(1, 8)), (int(2), ratio(1, 2)), (ratio(5, 7), ratio(1, 1000)), (int(1), int(5))] {
            let center = Point::real(c);
            let fast: Vec<_> = space.dense_in_ball(&center, &r, limit).unwrap().collect();
            let slow: Vec<_> = (1..=limit)
                .map(|i| (i, space.dense_point(i).unwrap()))
                .filter(|(_, p)| space.dist(p, &center).lt(&r))
                .collect();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn dyadic_enumeration_order() {
        let s = IntervalSpace::unit();
        let xs: Vec<Rational> = (1..=9)
            .map(|i| match s.dense_point(i).unwrap() {
                Point::Real { x } => x,
                _ => unreachable!(),
            })
            .collect();
        let expect = [
            int(0),
            int(1),
            ratio(1, 2),
            ratio(1, 4),
            ratio(3, 4),
            ratio(1, 8),
            ratio(3, 8),
            ratio(5, 8),
            ratio(7, 8),
        ];
        assert_eq!(xs, expect);
    }

    #[test]
    fn residual_is_exact() {
        let s = IntervalSpace::unit();
        let region = Residual {
            center: Point::real(ratio(1, 2)),
            radius: ratio(1, 3),
            exclusions: vec![(Point::real(int(0)), ratio(1, 2))],
        };
        let set = s.residual_intervals(&region);
        assert_eq!(set.parts(), &[(ratio(1, 2), ratio(5, 6))]);

        // A residual with empty interior: a single point survives.
        let region = Residual {
            center: Point::real(ratio(1, 2)),
            radius: ratio(1, 2),
            exclusions: vec![(Point::real(int(0)), int(1))],
        };
        assert_eq!(s.residual_intervals(&region).parts(), &[(int(1), int(1))]);
    }

    #[test]
    fn nearest_member_and_distance() {
        let set = ClosedIntervals::new(vec![(int(0), int(0)), (ratio(1, 2), ratio(3, 4))]);
        assert_eq!(set.distance(&ratio(1, 4)), Some(ratio(1, 4)));
        assert_eq!(set.nearest(&ratio(1, 4)), Some(int(0)));
        assert_eq!(set.nearest(&ratio(7, 8)), Some(ratio(3, 4)));
        assert!(set.member(&ratio(5, 8)));
    }
}
