//! Copies `A × {n}` of the sequences `a_i`, `a'_i` in `ℓ²`, glued to label
//! sets `Y_n` that all sit at the origin of their copy.

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::{diagonal, Corruption, FamilyY};
use crate::arith::{rational, Rational};
use crate::space::{Point, Space, SpaceKind};
use crate::value::ExactValue;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PsePoint {
    /// `(a_i, n)`: the sequence with `(i+1)/i` in slot `i`.
    A { i: usize, n: usize },
    /// `(a'_i, n)`: the sequence with `1/i` in slot `i`.
    APrime { i: usize, n: usize },
    Label { n: usize, label: String },
}

impl PsePoint {
    pub fn copy(&self) -> usize {
        match self {
            PsePoint::A { n, .. } | PsePoint::APrime { n, .. } | PsePoint::Label { n, .. } => *n,
        }
    }

    /// Slot and value of the single nonzero coordinate; `None` for labels.
    fn coordinate(&self) -> Option<(usize, Rational)> {
        match *self {
            PsePoint::A { i, .. } => Some((i, rational::ratio(i as i64 + 1, i as i64))),
            PsePoint::APrime { i, .. } => Some((i, rational::ratio(1, i as i64))),
            PsePoint::Label { .. } => None,
        }
    }
}

pub const CASES: &[&str] = &["cross-copy", "label-label", "euclid", "label-euclid"];

#[derive(Clone, Debug)]
pub struct PseSpace {
    family: FamilyY,
    m: usize,
    dense: Vec<Point>,
    corrupt: Corruption,
}

impl PseSpace {
    pub(crate) fn new(family: FamilyY, m: usize, corrupt: Corruption) -> Self {
        let dense = diagonal(m, family.len())
            .into_iter()
            .flat_map(|(i, n)| {
                [
                    Point::Pse(PsePoint::A { i, n }),
                    Point::Pse(PsePoint::APrime { i, n }),
                ]
            })
            .collect();
        PseSpace {
            family,
            m,
            dense,
            corrupt,
        }
    }

    pub fn family(&self) -> &FamilyY {
        &self.family
    }

    pub fn truncation(&self) -> usize {
        self.m
    }

    /// `S = {a_i} × ω`, truncated.
    pub fn canonical_seed(&self) -> Vec<Point> {
        (0..self.family.len())
            .flat_map(|n| (1..=self.m).map(move |i| Point::Pse(PsePoint::A { i, n })))
            .collect()
    }

    fn raw(&self, p: &PsePoint, q: &PsePoint) -> (&'static str, ExactValue) {
        if p.copy() != q.copy() {
            return ("cross-copy", ExactValue::int(3));
        }
        let d = match (p.coordinate(), q.coordinate()) {
            (None, None) => return ("label-label", ExactValue::zero()),
            (Some((_, v)), None) | (None, Some((_, v))) => return ("label-euclid", ExactValue::rational(v)),
            (Some((i, u)), Some((j, v))) if i == j => ExactValue::rational((u - v).abs()),
            (Some((_, u)), Some((_, v))) => {
                ExactValue::sqrt_rational(&(&u * &u + &v * &v)).expect("sum of squares")
            }
        };
        ("euclid", d)
    }
}

fn pse(p: &Point) -> &PsePoint {
    match p {
        Point::Pse(p) => p,
        other => panic!("{other:?} is not a point of the pse fixture"),
    }
}

impl Space for PseSpace {
    fn dist(&self, p: &Point, q: &Point) -> ExactValue {
        let (p, q) = (pse(p), pse(q));
        if p == q {
            return ExactValue::zero();
        }
        let (case, d) = self.raw(p, q);
        self.corrupt.apply(case, d)
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
                    Point::Pse(PsePoint::Label {
                        n,
                        label: l.name.clone(),
                    })
                })
            })
            .collect()
    }

    fn kind(&self) -> SpaceKind {
        SpaceKind::Pseudometric
    }
}
