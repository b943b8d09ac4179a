//! JSON documents: space specifications, seed lists and closed sets.
//!
//! ```json
//! {"type": "finite", "points": ["a", "b"], "dist": [["0", "3/2"], ["3/2", "0"]]}
//! {"type": "line", "points": ["0", "3/5", "6/5", "5/2"]}
//! {"type": "interval", "lo": "0", "hi": "1"}
//! {"type": "rescale", "rho": "1/2", "inner": {...}}
//! {"type": "quotient", "inner": {...}}
//! {"type": "pse", "family": [{"n": 0, "labels": ["a", "b"]}], "params": {"resolution": 32}}
//! ```
//!
//! Distances in finite specs are rational strings, `"sqrt(q)"`, or surd
//! objects `{"a": .., "b": .., "c": ..}`.

use std::sync::Arc;

use serde_json::Value;

use crate::arith::{rational, Rational, Surd};
use crate::complete::ClosedSet;
use crate::finite::FiniteSpace;
use crate::fixtures::{make_fixture, FamilyY, Fixture, FixtureKind, FixtureParams};
use crate::interval::{ClosedIntervals, IntervalSpace};
use crate::space::{audit_axioms, dense_prefix, Point, Space};
use crate::transform::{quotient_to_metric, rescale};
use crate::value::ExactValue;
use crate::Error;

/// A parsed space, keeping the concrete type where a command needs it.
#[derive(Clone)]
pub enum SpaceDoc {
    Finite(Arc<FiniteSpace>),
    Interval(Arc<IntervalSpace>),
    Fixture(Fixture),
    Derived(Arc<dyn Space>),
}

impl SpaceDoc {
    pub fn space(&self) -> Arc<dyn Space> {
        match self {
            SpaceDoc::Finite(s) => s.clone(),
            SpaceDoc::Interval(s) => s.clone(),
            SpaceDoc::Fixture(f) => f.space(),
            SpaceDoc::Derived(s) => s.clone(),
        }
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, Error> {
    v.get(key)
        .ok_or_else(|| Error::Schema(format!("missing field {key:?}")))
}

fn string<'a>(v: &'a Value, key: &str) -> Result<&'a str, Error> {
    field(v, key)?
        .as_str()
        .ok_or_else(|| Error::Schema(format!("field {key:?} must be a string")))
}

fn rational_field(v: &Value, key: &str) -> Result<Rational, Error> {
    rational::parse(string(v, key)?)
}

fn array<'a>(v: &'a Value, key: &str) -> Result<&'a Vec<Value>, Error> {
    field(v, key)?
        .as_array()
        .ok_or_else(|| Error::Schema(format!("field {key:?} must be an array")))
}

/// Parses one distance entry.
pub fn parse_distance(v: &Value) -> Result<ExactValue, Error> {
    match v {
        Value::String(s) => {
            let s = s.trim();
            if let Some(inner) = s.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
                ExactValue::sqrt_rational(&rational::parse(inner)?)
            } else {
                Ok(ExactValue::rational(rational::parse(s)?))
            }
        }
        Value::Object(_) => {
            let s: Surd = serde_json::from_value(v.clone())
                .map_err(|e| Error::Schema(format!("bad surd distance: {e}")))?;
            Ok(ExactValue::Exact(s))
        }
        Value::Number(_) => Err(Error::Schema(format!(
            "distance {v} must be a string such as \"3/2\"; JSON numbers are not exact"
        ))),
        other => Err(Error::Schema(format!("bad distance entry {other}"))),
    }
}

/// Builds and audits the space described by `doc`. Finite spaces are
/// audited exhaustively; infinite or fixture spaces on a sample.
pub fn parse_space_spec(doc: &Value) -> Result<SpaceDoc, Error> {
    let parsed = parse_unaudited(doc)?;
    if !matches!(parsed, SpaceDoc::Finite(_)) {
        let space = parsed.space();
        let mut sample: Vec<Point> = dense_prefix(space.as_ref(), 24).into_iter().map(|(_, p)| p).collect();
        sample.extend(space.extra_points().into_iter().take(12));
        audit_axioms(space.as_ref(), &sample)?;
    }
    Ok(parsed)
}

fn parse_unaudited(doc: &Value) -> Result<SpaceDoc, Error> {
    let kind = string(doc, "type")?;
    match kind {
        "finite" => {
            let labels = array(doc, "points")?
                .iter()
                .map(|p| match p {
                    Value::String(s) => Ok(s.clone()),
                    other => Err(Error::Schema(format!("point labels must be strings, got {other}"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            let dist = array(doc, "dist")?
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| Error::Schema("dist rows must be arrays".into()))?
                        .iter()
                        .map(parse_distance)
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(SpaceDoc::Finite(Arc::new(FiniteSpace::new(labels, dist)?)))
        }
        "line" => {
            let xs = array(doc, "points")?
                .iter()
                .map(|p| {
                    p.as_str()
                        .ok_or_else(|| Error::Schema("line points must be rational strings".into()))
                        .and_then(rational::parse)
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(SpaceDoc::Finite(Arc::new(FiniteSpace::line(&xs)?)))
        }
        "interval" => Ok(SpaceDoc::Interval(Arc::new(IntervalSpace::new(
            rational_field(doc, "lo")?,
            rational_field(doc, "hi")?,
        )?))),
        "rescale" => {
            let rho = rational_field(doc, "rho")?;
            let inner = parse_unaudited(field(doc, "inner")?)?.space();
            Ok(SpaceDoc::Derived(Arc::new(rescale(inner, rho)?)))
        }
        "quotient" => {
            let inner = parse_unaudited(field(doc, "inner")?)?.space();
            let (q, _) = quotient_to_metric(inner)?;
            Ok(SpaceDoc::Derived(Arc::new(q)))
        }
        "pse" | "pn" | "dyadic" | "circle" => Ok(SpaceDoc::Fixture(parse_fixture(doc)?)),
        other => Err(Error::Schema(format!("unknown space type {other:?}"))),
    }
}

pub fn parse_fixture(doc: &Value) -> Result<Fixture, Error> {
    let kind: FixtureKind = string(doc, "type")?.parse()?;
    let family = FamilyY::from_json(field(doc, "family")?)?;
    let params: FixtureParams = match doc.get("params") {
        None | Some(Value::Null) => FixtureParams::default(),
        Some(p) => serde_json::from_value(p.clone()).map_err(|e| Error::Schema(format!("bad fixture params: {e}")))?,
    };
    make_fixture(kind, family, params)
}

/// A seed document: either a bare array of points or `{"points": [...]}`.
pub fn parse_points(space: &dyn Space, doc: &Value) -> Result<Vec<Point>, Error> {
    let list = match doc {
        Value::Array(a) => a,
        Value::Object(_) => array(doc, "points")?,
        other => return Err(Error::Schema(format!("expected a list of points, got {other}"))),
    };
    list.iter().map(|p| space.point_from_json(p)).collect()
}

/// Closed sets for `choose-closed`:
///
/// * `{"type": "finite-points", "points": [...]}`;
/// * `{"type": "interval", "lo": .., "hi": ..}` (interval spaces only);
/// * `{"type": "predicate-grid", "lo": .., "hi": .., "step": .., "poly": [c0, c1, ..], "op": "<=", "rhs": ..}`:
///   the grid points `lo + j·step` in `[lo, hi]` where `c0 + c1·x + … op rhs`
///   (interval spaces only).
pub fn parse_closed_set(space: &SpaceDoc, doc: &Value) -> Result<Box<dyn ClosedSet>, Error> {
    let kind = string(doc, "type")?;
    match (kind, space) {
        ("finite-points", SpaceDoc::Interval(s)) => {
            let xs = parse_points(s.as_ref(), doc)?.into_iter().map(|p| match p {
                Point::Real { x } => x,
                _ => unreachable!("interval points are real"),
            });
            nonempty(s.closed_points(xs.collect()))
        }
        ("finite-points", _) => {
            let sp = space.space();
            let points = parse_points(sp.as_ref(), doc)?;
            if points.is_empty() {
                return Err(Error::Precondition("closed set is empty".into()));
            }
            Ok(Box::new(PointList { space: sp, points }))
        }
        ("interval", SpaceDoc::Interval(s)) => {
            nonempty(s.closed_interval(rational_field(doc, "lo")?, rational_field(doc, "hi")?))
        }
        ("predicate-grid", SpaceDoc::Interval(s)) => {
            let lo = rational_field(doc, "lo")?;
            let hi = rational_field(doc, "hi")?;
            let step = rational_field(doc, "step")?;
            if step <= rational::int(0) {
                return Err(Error::Schema("grid step must be positive".into()));
            }
            let poly = array(doc, "poly")?
                .iter()
                .map(|c| {
                    c.as_str()
                        .ok_or_else(|| Error::Schema("polynomial coefficients must be rational strings".into()))
                        .and_then(rational::parse)
                })
                .collect::<Result<Vec<_>, _>>()?;
            let rhs = rational_field(doc, "rhs")?;
            let op = string(doc, "op")?;
            let test: fn(&Rational, &Rational) -> bool = match op {
                "<" => |a, b| a < b,
                "<=" => |a, b| a <= b,
                "=" | "==" => |a, b| a == b,
                ">=" => |a, b| a >= b,
                ">" => |a, b| a > b,
                other => return Err(Error::Schema(format!("unknown comparison {other:?}"))),
            };
            let mut xs = Vec::new();
            let mut x = lo.clone();
            while x <= hi {
                let value = poly.iter().rev().fold(rational::int(0), |acc, c| acc * &x + c);
                if test(&value, &rhs) {
                    xs.push(x.clone());
                }
                x += &step;
                if xs.len() > 1 << 20 {
                    return Err(Error::Schema("grid has too many points".into()));
                }
            }
            nonempty(s.closed_points(xs))
        }
        ("interval" | "predicate-grid", _) => Err(Error::Unsupported(format!(
            "closed sets of type {kind:?} need an interval space"
        ))),
        (other, _) => Err(Error::Schema(format!("unknown closed-set type {other:?}"))),
    }
}

fn nonempty(set: ClosedIntervals) -> Result<Box<dyn ClosedSet>, Error> {
    if set.is_empty() {
        return Err(Error::Precondition("closed set is empty".into()));
    }
    Ok(Box::new(set))
}

/// A finite list of points, as a closed set.
struct PointList {
    space: Arc<dyn Space>,
    points: Vec<Point>,
}

impl ClosedSet for PointList {
    fn meets_ball(&self, center: &Point, radius: &Rational) -> bool {
        self.points.iter().any(|p| self.space.dist(center, p).lt(radius))
    }

    fn contains(&self, p: &Point) -> Option<bool> {
        Some(self.points.iter().any(|q| self.space.dist(p, q).is_zero()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn finite_spec_with_rational_and_surd_entries() {
        let doc = json!({"type": "finite", "points": ["a", "b"], "dist": [["0", "3/2"], ["3/2", "0"]]});
        let s = parse_space_spec(&doc).unwrap().space();
        assert_eq!(s.dist(&Point::Finite { id: 0 }, &Point::Finite { id: 1 }).as_rational(), Some(&rational::ratio(3, 2)));
        let doc = json!({"type": "finite", "points": ["a", "b"], "dist": [["0", {"a": "0", "b": "1", "c": "2"}], ["sqrt(2)", "0"]]});
        assert!(parse_space_spec(&doc).is_ok());
    }

    #[test]
    fn asymmetric_matrix_is_named() {
        let doc = json!({"type": "finite", "points": ["a", "b"], "dist": [["0", "1"], ["2", "0"]]});
        let err = parse_space_spec(&doc).err().unwrap();
        assert!(matches!(err, Error::Audit(ref m) if m.contains("asymmetric")), "{err}");
    }

    #[test]
    fn rescale_halves_distances() {
        let doc = json!({"type": "rescale", "rho": "1/2", "inner":
            {"type": "finite", "points": ["a", "b"], "dist": [["0", "2"], ["2", "0"]]}});
        let s = parse_space_spec(&doc).unwrap().space();
        assert_eq!(s.dist(&Point::Finite { id: 0 }, &Point::Finite { id: 1 }).as_rational(), Some(&rational::int(1)));
    }

    #[test]
    fn floats_are_rejected() {
        let doc = json!({"type": "finite", "points": ["a", "b"], "dist": [["0", 1.5], ["3/2", "0"]]});
        assert!(matches!(parse_space_spec(&doc), Err(Error::Schema(_))));
    }

    #[test]
    fn predicate_grid_on_the_interval() {
        let space = parse_space_spec(&json!({"type": "interval", "lo": "0", "hi": "1"})).unwrap();
        let set = parse_closed_set(
            &space,
            &json!({"type": "predicate-grid", "lo": "0", "hi": "1", "step": "1/4", "poly": ["0", "0", "1"], "op": ">=", "rhs": "1/2"}),
        )
        .unwrap();
        assert_eq!(set.contains(&Point::real(rational::ratio(3, 4))), Some(true));
        assert_eq!(set.contains(&Point::real(rational::ratio(1, 2))), Some(false));
    }
}
