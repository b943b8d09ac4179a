//! The four reduction spaces, parameterized by a family `{Y_n}`, and the
//! maps that read one label per `Y_n` off a maximal separated set.

mod circle;
mod dyadic;
mod family;
mod identities;
mod pn;
mod pse;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use circle::{circle_point, disk_points, CirclePoint, CircleSpace};
pub use dyadic::{DyadicPoint, DyadicSpace};
pub use family::{FamilyY, Label};
pub use identities::{check_fixture_identities, IdentityBounds, IdentityReport, IdentityResult, Status};
pub use pn::{arc_abscissas, plane_image, PnPoint, PnSpace};
pub use pse::{PsePoint, PseSpace};

use crate::arith::{rational, Rational};
use crate::complete::{extend_nonstrict, ExtendBudgets};
use crate::greedy::extend_via_excision;
use crate::separation::{Certificate, Mode, SeparatedSet};
use crate::space::{Point, Space};
use crate::value::ExactValue;
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FixtureKind {
    Pse,
    Pn,
    Dyadic,
    Circle,
}

impl FixtureKind {
    /// Names of the metric cases that can be corrupted.
    pub fn cases(self) -> &'static [&'static str] {
        match self {
            FixtureKind::Pse => pse::CASES,
            FixtureKind::Pn => pn::CASES,
            FixtureKind::Dyadic => dyadic::CASES,
            FixtureKind::Circle => circle::CASES,
        }
    }

    /// The separation mode the fixture is built for.
    pub fn mode(self) -> Mode {
        match self {
            FixtureKind::Pse | FixtureKind::Dyadic => Mode::Strict,
            FixtureKind::Pn | FixtureKind::Circle => Mode::Nonstrict,
        }
    }
}

impl fmt::Display for FixtureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FixtureKind::Pse => "pse",
            FixtureKind::Pn => "pn",
            FixtureKind::Dyadic => "dyadic",
            FixtureKind::Circle => "circle",
        })
    }
}

impl FromStr for FixtureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "pse" => Ok(FixtureKind::Pse),
            "pn" => Ok(FixtureKind::Pn),
            "dyadic" => Ok(FixtureKind::Dyadic),
            "circle" => Ok(FixtureKind::Circle),
            other => Err(Error::Schema(format!("unknown fixture type {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FixtureParams {
    /// Truncation of the sequence index (pse), number of arc abscissas
    /// (pn), or number of disk points per copy (circle).
    pub resolution: usize,
    /// Dyadic depth of the truncated `D₀`.
    pub depth: usize,
    /// A metric case to corrupt, for negative controls.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corrupt: Option<String>,
}

impl Default for FixtureParams {
    fn default() -> Self {
        FixtureParams {
            resolution: 32,
            depth: 4,
            corrupt: None,
        }
    }
}

/// Perturbs one named metric case: nonzero values are doubled, zeros
/// become `1/2`.
#[derive(Clone, Debug, Default)]
pub(crate) struct Corruption(Option<String>);

impl Corruption {
    pub(crate) fn apply(&self, case: &str, d: ExactValue) -> ExactValue {
        match &self.0 {
            Some(c) if c == case => {
                if d.is_zero() {
                    ExactValue::rational(rational::ratio(1, 2))
                } else {
                    d.scale(&rational::int(2))
                }
            }
            _ => d,
        }
    }
}

/// Pairs `(r, n)` with `1 ≤ r ≤ ranks`, `n < copies`, ordered by `r + n`
/// and then by `n`.
pub(crate) fn diagonal(ranks: usize, copies: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(ranks * copies);
    for s in 1..ranks + copies {
        for n in 0..copies.min(s) {
            let r = s - n;
            if r <= ranks {
                out.push((r, n));
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub enum FixtureSpace {
    Pse(Arc<PseSpace>),
    Pn(Arc<PnSpace>),
    Dyadic(Arc<DyadicSpace>),
    Circle(Arc<CircleSpace>),
}

/// A fixture space together with its designated seed.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub kind: FixtureKind,
    pub params: FixtureParams,
    pub space: FixtureSpace,
}

/// Largest truncated `D₀` a dyadic fixture will materialize.
pub const MAX_DYADIC_POINTS: usize = 1 << 20;

pub fn make_fixture(kind: FixtureKind, family: FamilyY, params: FixtureParams) -> Result<Fixture, Error> {
    let mut family = family;
    if params.resolution == 0 {
        return Err(Error::Validation("resolution must be positive".into()));
    }
    if kind == FixtureKind::Dyadic {
        let window = 3 * family.len() + 2;
        let points = (params.depth < 32).then(|| window << params.depth);
        if points.map_or(true, |p| p > MAX_DYADIC_POINTS) {
            return Err(Error::Validation(format!(
                "dyadic depth {} needs more than {MAX_DYADIC_POINTS} points",
                params.depth
            )));
        }
    }
    if let Some(c) = &params.corrupt {
        if !kind.cases().contains(&c.as_str()) {
            return Err(Error::Validation(format!(
                "{kind} fixture has no metric case {c:?}; cases are {:?}",
                kind.cases()
            )));
        }
    }
    let corrupt = Corruption(params.corrupt.clone());
    let space = match kind {
        FixtureKind::Pse => FixtureSpace::Pse(Arc::new(PseSpace::new(family, params.resolution, corrupt))),
        FixtureKind::Pn => FixtureSpace::Pn(Arc::new(PnSpace::new(family, params.resolution, corrupt))),
        FixtureKind::Dyadic => {
            family.fill_values(dyadic::default_position);
            dyadic::validate(&family)?;
            FixtureSpace::Dyadic(Arc::new(DyadicSpace::new(family, params.depth, corrupt)))
        }
        FixtureKind::Circle => {
            family.fill_values(|_, k| rational::int(k as i64));
            family.require_distinct_values("parameter")?;
            FixtureSpace::Circle(Arc::new(CircleSpace::new(family, params.resolution, corrupt)))
        }
    };
    Ok(Fixture { kind, params, space })
}

impl Fixture {
    pub fn space(&self) -> Arc<dyn Space> {
        match &self.space {
            FixtureSpace::Pse(s) => s.clone(),
            FixtureSpace::Pn(s) => s.clone(),
            FixtureSpace::Dyadic(s) => s.clone(),
            FixtureSpace::Circle(s) => s.clone(),
        }
    }

    pub fn family(&self) -> &FamilyY {
        match &self.space {
            FixtureSpace::Pse(s) => s.family(),
            FixtureSpace::Pn(s) => s.family(),
            FixtureSpace::Dyadic(s) => s.family(),
            FixtureSpace::Circle(s) => s.family(),
        }
    }

    pub fn delta(&self) -> Rational {
        rational::int(1)
    }

    /// The designated seed; empty for pn, which is extended from scratch.
    pub fn canonical_seed(&self) -> SeparatedSet {
        let points = match &self.space {
            FixtureSpace::Pse(s) => s.canonical_seed(),
            FixtureSpace::Pn(_) => Vec::new(),
            FixtureSpace::Dyadic(s) => s.canonical_seed(),
            FixtureSpace::Circle(s) => s.canonical_seed(),
        };
        SeparatedSet::new(points, self.delta(), self.kind.mode())
    }

    /// Extends the canonical seed to a maximal set in the fixture's mode:
    /// excision plus greedy for strict fixtures, the complete-space
    /// extension for non-strict ones. The whole finite presentation is
    /// the horizon.
    pub fn extend(&self) -> Result<(SeparatedSet, Certificate), Error> {
        let space = self.space();
        let horizon = space.dense_len().expect("fixtures are finite presentations");
        let seed = self.canonical_seed();
        match self.kind.mode() {
            Mode::Strict => extend_via_excision(space, &seed, horizon),
            Mode::Nonstrict => {
                let enum_limit = horizon + space.extra_points().len();
                extend_nonstrict(space, &seed, ExtendBudgets { enum_limit, steps: 1 })
            }
        }
    }
}

/// Reads one label per `Y_n` off `points`.
///
/// pse and dyadic take the least label present; pn prefers the label of a
/// point of `X_n × {0}` and falls back to `X_n × {1}`; circle takes the
/// label with the least parameter.
pub fn extract_choice(fixture: &Fixture, points: &[Point]) -> Result<BTreeMap<usize, String>, Error> {
    // (n, priority, key, label)
    let mut best: BTreeMap<usize, (u8, Rational, String)> = BTreeMap::new();
    let mut offer = |n: usize, priority: u8, key: Rational, label: &str| {
        let cand = (priority, key, label.to_string());
        match best.get(&n) {
            Some(cur) if *cur <= cand => {}
            _ => {
                best.insert(n, cand);
            }
        }
    };
    let zero = rational::int(0);
    for p in points {
        match p {
            Point::Pse(PsePoint::Label { n, label }) => offer(*n, 0, zero.clone(), label),
            Point::Pn(PnPoint::Copy { n, side, label }) => offer(*n, *side, zero.clone(), label),
            Point::Dyadic(DyadicPoint::Label { n, label, x }) => offer(*n, 0, x.clone(), label),
            Point::Circle(CirclePoint::Label { n, label, t }) => offer(*n, 0, t.clone(), label),
            _ => {}
        }
    }
    (0..fixture.family().len())
        .map(|n| {
            best.remove(&n)
                .map(|(_, _, label)| (n, label))
                .ok_or(Error::Extraction { n })
        })
        .collect()
}

/// Checks the structure a maximal non-strict set must have in the pn
/// fixture: for every `n`, at most one point in each of `X_n × {0}` and
/// `X_n × {1}`, and at least one in their union. Returns the violations.
pub fn pn_structure_violations(fixture: &Fixture, points: &[Point]) -> Vec<String> {
    let copies = fixture.family().len();
    let mut counts = vec![[0usize; 2]; copies];
    for p in points {
        if let Point::Pn(PnPoint::Copy { n, side, .. }) = p {
            counts[*n][*side as usize] += 1;
        }
    }
    let mut out = Vec::new();
    for (n, [zero, one]) in counts.into_iter().enumerate() {
        if zero > 1 || one > 1 {
            out.push(format!("copy {n}: {zero} points in X_n×{{0}}, {one} in X_n×{{1}}"));
        }
        if zero + one == 0 {
            out.push(format!("copy {n}: no point in X_n×{{0,1}}"));
        }
    }
    out
}

/// Labels of `Y_n` present in `points`, per `n`.
pub fn label_counts(fixture: &Fixture, points: &[Point]) -> Vec<usize> {
    let mut counts = vec![0; fixture.family().len()];
    for p in points {
        let n = match p {
            Point::Pse(PsePoint::Label { n, .. })
            | Point::Dyadic(DyadicPoint::Label { n, .. })
            | Point::Circle(CirclePoint::Label { n, .. }) => *n,
            _ => continue,
        };
        counts[n] += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_order_is_balanced() {
        assert_eq!(
            diagonal(3, 2),
            vec![(1, 0), (2, 0), (1, 1), (3, 0), (2, 1), (3, 1)]
        );
        assert_eq!(diagonal(2, 1), vec![(1, 0), (2, 0)]);
    }

    #[test]
    fn rejects_unknown_corruption() {
        let params = FixtureParams {
            corrupt: Some("nope".into()),
            ..FixtureParams::default()
        };
        let fam = FamilyY::synthetic(&[1]).unwrap();
        assert!(matches!(
            make_fixture(FixtureKind::Pse, fam, params),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn empty_set_fails_extraction_at_zero() {
        let fam = FamilyY::synthetic(&[2, 1]).unwrap();
        let fx = make_fixture(FixtureKind::Pse, fam, FixtureParams::default()).unwrap();
        assert!(matches!(extract_choice(&fx, &[]), Err(Error::Extraction { n: 0 })));
    }

    #[test]
    fn pn_prefers_the_zero_copy() {
        let fam = FamilyY::synthetic(&[2]).unwrap();
        let fx = make_fixture(FixtureKind::Pn, fam, FixtureParams::default()).unwrap();
        let pts = vec![
            Point::Pn(PnPoint::Copy { n: 0, side: 1, label: "y0_0".into() }),
            Point::Pn(PnPoint::Copy { n: 0, side: 0, label: "y0_1".into() }),
        ];
        assert_eq!(extract_choice(&fx, &pts).unwrap()[&0], "y0_1");
    }
}
