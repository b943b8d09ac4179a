//! The line space `Y ∪ D₀ ∪ D₁` with the dyadics `D₀`, their shift
//! `D₁ = D₀ + 1/3`, and labels `Y_n ⊂ (3n, 3n+1)`. Every `D₁` point sits at
//! distance exactly 1 from its `D₀` partner and more than 1 from everything
//! else.
//!
//! `D₀` is truncated to `m/2^k` with `k ≤ depth` inside `[-1, 3N+1]`.

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::{Corruption, FamilyY};
use crate::arith::{rational, Rational};
use crate::space::{Point, Space, SpaceKind};
use crate::value::ExactValue;
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DyadicPoint {
    D0 {
        #[serde(with = "rational::serde_str")]
        x: Rational,
    },
    /// Stored by its position on the line, `x ∈ D₀ + 1/3`.
    D1 {
        #[serde(with = "rational::serde_str")]
        x: Rational,
    },
    Label {
        n: usize,
        label: String,
        #[serde(with = "rational::serde_str")]
        x: Rational,
    },
}

impl DyadicPoint {
    pub fn position(&self) -> &Rational {
        match self {
            DyadicPoint::D0 { x } | DyadicPoint::D1 { x } | DyadicPoint::Label { x, .. } => x,
        }
    }

    pub fn in_d1(&self) -> bool {
        matches!(self, DyadicPoint::D1 { .. })
    }

    pub fn d0(x: Rational) -> Self {
        DyadicPoint::D0 { x }
    }

    /// The `D₁` point `x + 1/3`.
    pub fn d1_over(x: &Rational) -> Self {
        DyadicPoint::D1 {
            x: x + rational::ratio(1, 3),
        }
    }
}

pub const CASES: &[&str] = &["identity", "d1-d1", "d1-other", "other-d1", "other"];

/// The case table, with the name of the case that applies.
pub(crate) fn table(p: &DyadicPoint, q: &DyadicPoint) -> (&'static str, ExactValue) {
    let third = rational::ratio(1, 3);
    let (x, y) = (p.position(), q.position());
    let one = rational::int(1);
    if p == q {
        return ("identity", ExactValue::zero());
    }
    match (p.in_d1(), q.in_d1()) {
        (true, true) => ("d1-d1", ExactValue::rational(one + (x - y).abs())),
        (true, false) => ("d1-other", ExactValue::rational(one + (y - x + third).abs())),
        (false, true) => ("other-d1", ExactValue::rational(one + (x - y + third).abs())),
        (false, false) => ("other", ExactValue::rational((x - y).abs())),
    }
}

pub(crate) fn default_position(n: usize, k: usize) -> Rational {
    let five = BigInt::from(5u8).pow(k as u32 + 1);
    rational::int(3 * n as i64) + Rational::new(BigInt::from(1u8), five)
}

pub(crate) fn validate(family: &FamilyY) -> Result<(), Error> {
    let third = rational::ratio(1, 3);
    for (n, set) in family.sets().iter().enumerate() {
        let lo = rational::int(3 * n as i64);
        let hi = rational::int(3 * n as i64 + 1);
        for l in set {
            let x = FamilyY::value(l);
            if *x <= lo || *x >= hi {
                return Err(Error::Validation(format!(
                    "label {:?} at {} lies outside ({lo}, {hi})",
                    l.name,
                    rational::format(x)
                )));
            }
            if rational::is_dyadic(x) || rational::is_dyadic(&(x - &third)) {
                return Err(Error::Validation(format!(
                    "label {:?} at {} meets D₀ ∪ D₁",
                    l.name,
                    rational::format(x)
                )));
            }
        }
    }
    family.require_distinct_values("position")
}

#[derive(Clone, Debug)]
pub struct DyadicSpace {
    family: FamilyY,
    depth: usize,
    d0: Vec<Rational>,
    corrupt: Corruption,
}

impl DyadicSpace {
    pub(crate) fn new(family: FamilyY, depth: usize, corrupt: Corruption) -> Self {
        let lo = rational::int(-1);
        let hi = rational::int(3 * family.len() as i64 + 1);
        let mut d0 = Vec::new();
        for k in 0..=depth {
            let scale = BigInt::from(1u8) << k;
            let first: BigInt = -scale.clone();
            let last: BigInt = (3 * family.len() as i64 + 1) * scale.clone();
            let mut m = first;
            while m <= last {
                if k == 0 || m.bit(0) {
                    let x = Rational::new(m.clone(), scale.clone());
                    debug_assert!(x >= lo && x <= hi);
                    d0.push(x);
                }
                m += 1;
            }
        }
        DyadicSpace {
            family,
            depth,
            d0,
            corrupt,
        }
    }

    pub fn family(&self) -> &FamilyY {
        &self.family
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// The truncated `D₁`.
    pub fn canonical_seed(&self) -> Vec<Point> {
        self.d0.iter().map(|x| Point::Dyadic(DyadicPoint::d1_over(x))).collect()
    }
}

fn dyadic(p: &Point) -> &DyadicPoint {
    match p {
        Point::Dyadic(p) => p,
        other => panic!("{other:?} is not a point of the dyadic fixture"),
    }
}

impl Space for DyadicSpace {
    fn dist(&self, p: &Point, q: &Point) -> ExactValue {
        let (case, d) = table(dyadic(p), dyadic(q));
        self.corrupt.apply(case, d)
    }

    /// `D₀` and `D₁` interleaved: each dyadic is followed by its shift.
    fn dense_point(&self, index: usize) -> Option<Point> {
        let i = index.checked_sub(1)?;
        let x = self.d0.get(i / 2)?;
        Some(Point::Dyadic(if i % 2 == 0 {
            DyadicPoint::d0(x.clone())
        } else {
            DyadicPoint::d1_over(x)
        }))
    }

    fn dense_len(&self) -> Option<usize> {
        Some(2 * self.d0.len())
    }

    fn extra_points(&self) -> Vec<Point> {
        self.family
            .sets()
            .iter()
            .enumerate()
            .flat_map(|(n, set)| {
                set.iter().map(move |l| {
                    Point::Dyadic(DyadicPoint::Label {
                        n,
                        label: l.name.clone(),
                        x: FamilyY::value(l).clone(),
                    })
                })
            })
            .collect()
    }

    fn kind(&self) -> SpaceKind {
        SpaceKind::Metric
    }
}
