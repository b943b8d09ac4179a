//! δ-separation, horizon-bounded maximality, and excision neighbourhoods.

use serde::{Deserialize, Serialize};

use crate::arith::Rational;
use crate::greedy::GreedyTrace;
use crate::space::{horizon_points, Point, Space};
use crate::value::ExactValue;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Distinct members at distance `> δ`.
    Strict,
    /// Distinct members at distance `≥ δ`.
    Nonstrict,
}

impl Mode {
    /// Whether two distinct points at distance `d` may coexist.
    pub fn separated(self, d: &ExactValue, delta: &Rational) -> bool {
        match self {
            Mode::Strict => d.gt(delta),
            Mode::Nonstrict => d.ge(delta),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Strict => "strict",
            Mode::Nonstrict => "nonstrict",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(Mode::Strict),
            "nonstrict" | "non-strict" => Ok(Mode::Nonstrict),
            other => Err(crate::Error::Schema(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatedSet {
    pub points: Vec<Point>,
    pub delta: Rational,
    pub mode: Mode,
    pub trace: Option<GreedyTrace>,
}

impl SeparatedSet {
    pub fn new(points: Vec<Point>, delta: Rational, mode: Mode) -> Self {
        SeparatedSet {
            points,
            delta,
            mode,
            trace: None,
        }
    }

    pub fn empty(delta: Rational, mode: Mode) -> Self {
        Self::new(Vec::new(), delta, mode)
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.points.contains(p)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    /// Two members closer than the mode allows.
    Pair {
        first: Point,
        second: Point,
        distance: ExactValue,
    },
    /// A point outside the set that could be added to it.
    Addable { point: Point },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub separation_ok: bool,
    pub maximal_on_horizon: bool,
    pub horizon: usize,
    /// Set when maximality rests on an incomplete search rather than an
    /// exact oracle.
    pub heuristic: bool,
    pub violation: Option<Violation>,
}

impl Certificate {
    pub fn ok(&self) -> bool {
        self.separation_ok && self.maximal_on_horizon
    }
}

/// Checks every distinct pair; returns the first offending pair, if any.
pub fn is_separated(space: &dyn Space, set: &SeparatedSet) -> Result<(), Violation> {
    for (i, p) in set.points.iter().enumerate() {
        for q in &set.points[i + 1..] {
            if p == q {
                continue;
            }
            let d = space.dist(p, q);
            if !set.mode.separated(&d, &set.delta) {
                return Err(Violation::Pair {
                    first: p.clone(),
                    second: q.clone(),
                    distance: d,
                });
            }
        }
    }
    Ok(())
}

/// Whether `x ∉ S` could join `S` without breaking separation.
pub fn is_addable(space: &dyn Space, points: &[Point], delta: &Rational, mode: Mode, x: &Point) -> bool {
    !points.contains(x) && points.iter().all(|s| mode.separated(&space.dist(x, s), delta))
}

/// Separation plus maximality against the dense points with index
/// `≤ horizon` and every extra point.
pub fn is_maximal_on_horizon(space: &dyn Space, set: &SeparatedSet, horizon: usize) -> Certificate {
    let mut cert = Certificate {
        separation_ok: true,
        maximal_on_horizon: true,
        horizon,
        heuristic: false,
        violation: None,
    };
    if let Err(v) = is_separated(space, set) {
        cert.separation_ok = false;
        cert.violation = Some(v);
    }
    let witness = horizon_points(space, horizon)
        .into_iter()
        .find(|x| is_addable(space, &set.points, &set.delta, set.mode, x));
    if let Some(point) = witness {
        cert.maximal_on_horizon = false;
        if cert.violation.is_none() {
            cert.violation = Some(Violation::Addable { point });
        }
    }
    cert
}

/// `x ∈ N_δ(S)`, the union of open δ-balls around members of `S`.
pub fn in_excision(space: &dyn Space, points: &[Point], delta: &Rational, x: &Point) -> bool {
    points.iter().any(|s| space.dist(x, s).lt(delta))
}

/// Human-readable rendering used in reports.
pub fn describe_violation(space: &dyn Space, v: &Violation) -> serde_json::Value {
    match v {
        Violation::Pair {
            first,
            second,
            distance,
        } => serde_json::json!({
            "kind": "pair",
            "first": space.point_to_json(first),
            "second": space.point_to_json(second),
            "distance": distance,
        }),
        Violation::Addable { point } => serde_json::json!({
            "kind": "addable",
            "point": space.point_to_json(point),
        }),
    }
}

pub fn describe_certificate(space: &dyn Space, cert: &Certificate) -> serde_json::Value {
    serde_json::json!({
        "separation_ok": cert.separation_ok,
        "maximal_on_horizon": cert.maximal_on_horizon,
        "horizon": cert.horizon,
        "heuristic": cert.heuristic,
        "violation": cert.violation.as_ref().map(|v| describe_violation(space, v)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, ratio};
    use crate::finite::FiniteSpace;

    fn line() -> FiniteSpace {
        FiniteSpace::line(&[int(0), ratio(3, 5), ratio(6, 5), ratio(5, 2)]).unwrap()
    }

    #[test]
    fn empty_and_singleton_sets_are_separated() {
        let s = line();
        assert!(is_separated(&s, &SeparatedSet::empty(int(1), Mode::Strict)).is_ok());
        let one = SeparatedSet::new(vec![s.point(2)], int(1), Mode::Strict);
        assert!(is_separated(&s, &one).is_ok());
    }

    #[test]
    fn line_points_are_strictly_separated() {
        let s = FiniteSpace::line(&[int(0), ratio(6, 5), ratio(5, 2)]).unwrap();
        let set = SeparatedSet::new(s.points(), int(1), Mode::Strict);
        assert!(is_separated(&s, &set).is_ok());
    }

    #[test]
    fn maximality_on_the_line() {
        let s = line();
        let good = SeparatedSet::new(vec![s.point(0), s.point(2), s.point(3)], int(1), Mode::Strict);
        assert!(is_maximal_on_horizon(&s, &good, 4).ok());

        let bad = SeparatedSet::new(vec![s.point(0)], int(1), Mode::Strict);
        let cert = is_maximal_on_horizon(&s, &bad, 4);
        assert!(cert.separation_ok && !cert.maximal_on_horizon);
        // 1.2 is the first dense point farther than 1 from 0.
        assert!(matches!(cert.violation, Some(Violation::Addable { ref point }) if *point == s.point(2)));
    }

    #[test]
    fn empty_set_is_not_maximal() {
        let s = line();
        let cert = is_maximal_on_horizon(&s, &SeparatedSet::empty(int(1), Mode::Strict), 1);
        assert!(matches!(cert.violation, Some(Violation::Addable { ref point }) if *point == s.point(0)));
    }

    #[test]
    fn excision_uses_open_balls() {
        let s = FiniteSpace::line(&[int(0), int(1), ratio(1, 2)]).unwrap();
        let seed = [s.point(0)];
        assert!(in_excision(&s, &seed, &int(1), &s.point(0)));
        assert!(in_excision(&s, &seed, &int(1), &s.point(2)));
        assert!(!in_excision(&s, &seed, &int(1), &s.point(1)));
        assert!(!in_excision(&s, &[], &int(1), &s.point(1)));
    }

    #[test]
    fn boundary_distance_splits_modes() {
        let s = FiniteSpace::line(&[int(0), int(1)]).unwrap();
        let set = SeparatedSet::new(s.points(), int(1), Mode::Strict);
        assert!(is_separated(&s, &set).is_err());
        let set = SeparatedSet::new(s.points(), int(1), Mode::Nonstrict);
        assert!(is_separated(&s, &set).is_ok());
    }
}
