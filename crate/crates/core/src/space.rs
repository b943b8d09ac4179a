//! Points and the space abstraction: a distance oracle over a 1-based dense
//! enumeration, plus an optional catalogue of non-dense points.

use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::{rational, Rational};
use crate::complete::RegionWitness;
use crate::fixtures::{CirclePoint, DyadicPoint, PnPoint, PsePoint};
use crate::value::ExactValue;
use crate::Error;

/// A point of some space. Identity is structural equality of the payload;
/// in a pseudometric space two distinct points may be at distance zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "space", rename_all = "kebab-case")]
pub enum Point {
    Finite { id: usize },
    Real {
        #[serde(with = "rational::serde_str")]
        x: Rational,
    },
    Pse(PsePoint),
    Pn(PnPoint),
    Dyadic(DyadicPoint),
    Circle(CirclePoint),
}

impl Point {
    pub fn real(x: Rational) -> Self {
        Point::Real { x }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKind {
    Metric,
    Pseudometric,
}

/// A separable (pseudo)metric space presented by a distance oracle and a
/// dense enumeration `d_1, d_2, …`.
///
/// Implementations are immutable and must be safe to query concurrently.
pub trait Space: Send + Sync {
    fn dist(&self, p: &Point, q: &Point) -> ExactValue;

    /// The dense point with 1-based `index`, or `None` past the end of a
    /// finite enumeration.
    fn dense_point(&self, index: usize) -> Option<Point>;

    /// Size of the dense enumeration, when finite.
    fn dense_len(&self) -> Option<usize>;

    /// Catalogued points outside the dense enumeration.
    fn extra_points(&self) -> Vec<Point> {
        Vec::new()
    }

    fn kind(&self) -> SpaceKind;

    /// Finite presentations are complete; infinite spaces must opt in.
    fn is_complete(&self) -> bool {
        self.dense_len().is_some()
    }

    /// Exact nonemptiness oracle for closed-ball residuals, if the space
    /// has a better one than scanning its finite presentation.
    fn region_witness(&self) -> Option<&dyn RegionWitness> {
        None
    }

    /// The dense points with index `≤ limit` inside the open ball
    /// `B(center, radius)`, in increasing index order — for spaces that can
    /// list them without scanning the enumeration.
    fn dense_in_ball<'a>(
        &'a self,
        _center: &Point,
        _radius: &Rational,
        _limit: usize,
    ) -> Option<Box<dyn Iterator<Item = (usize, Point)> + 'a>> {
        None
    }

    fn point_to_json(&self, p: &Point) -> serde_json::Value {
        serde_json::to_value(p).expect("points serialize")
    }

    fn point_from_json(&self, v: &serde_json::Value) -> Result<Point, Error> {
        serde_json::from_value(v.clone()).map_err(|e| Error::Schema(format!("bad point: {e}")))
    }
}

macro_rules! forward_space {
    ($ty:ty) => {
        impl<S: Space + ?Sized> Space for $ty {
            fn dist(&self, p: &Point, q: &Point) -> ExactValue {
                (**self).dist(p, q)
            }
            fn dense_point(&self, index: usize) -> Option<Point> {
                (**self).dense_point(index)
            }
            fn dense_len(&self) -> Option<usize> {
                (**self).dense_len()
            }
            fn extra_points(&self) -> Vec<Point> {
                (**self).extra_points()
            }
            fn kind(&self) -> SpaceKind {
                (**self).kind()
            }
            fn is_complete(&self) -> bool {
                (**self).is_complete()
            }
            fn region_witness(&self) -> Option<&dyn RegionWitness> {
                (**self).region_witness()
            }
            fn dense_in_ball<'a>(
                &'a self,
                center: &Point,
                radius: &Rational,
                limit: usize,
            ) -> Option<Box<dyn Iterator<Item = (usize, Point)> + 'a>> {
                (**self).dense_in_ball(center, radius, limit)
            }
            fn point_to_json(&self, p: &Point) -> serde_json::Value {
                (**self).point_to_json(p)
            }
            fn point_from_json(&self, v: &serde_json::Value) -> Result<Point, Error> {
                (**self).point_from_json(v)
            }
        }
    };
}

forward_space!(Arc<S>);
forward_space!(Box<S>);
forward_space!(&S);

/// Dense points with indices `1..=limit` (or fewer for a short enumeration).
pub fn dense_prefix(space: &dyn Space, limit: usize) -> Vec<(usize, Point)> {
    let end = space.dense_len().map_or(limit, |n| n.min(limit));
    (1..=end)
        .map_while(|i| space.dense_point(i).map(|p| (i, p)))
        .collect()
}

/// The points a horizon-bounded check looks at: dense indices up to
/// `horizon`, followed by every extra point not already listed.
pub fn horizon_points(space: &dyn Space, horizon: usize) -> Vec<Point> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (_, p) in dense_prefix(space, horizon) {
        if seen.insert(p.clone()) {
            out.push(p);
        }
    }
    for p in space.extra_points() {
        if seen.insert(p.clone()) {
            out.push(p);
        }
    }
    out
}

/// Every point of a finite presentation, dense ones first.
pub fn all_points(space: &dyn Space) -> Result<Vec<Point>, Error> {
    let n = space.dense_len().ok_or_else(|| {
        Error::Unsupported("operation needs a finite presentation of the space".into())
    })?;
    Ok(horizon_points(space, n))
}

/// Exhaustive axiom audit over the given points: zero diagonal,
/// non-negativity, symmetry, the triangle inequality, and definiteness
/// for metric spaces.
pub fn audit_axioms(space: &dyn Space, points: &[Point]) -> Result<(), Error> {
    let n = points.len();
    let mut d = vec![vec![ExactValue::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            d[i][j] = space.dist(&points[i], &points[j]);
        }
    }
    let name = |i: usize| format!("{:?}", points[i]);
    for i in 0..n {
        if !d[i][i].is_zero() {
            return Err(Error::Audit(format!("d(x,x) != 0 at {}", name(i))));
        }
        for j in 0..n {
            if d[i][j].is_negative() {
                return Err(Error::Audit(format!("negative distance {} {}", name(i), name(j))));
            }
            if d[i][j].cmp_value(&d[j][i]) != std::cmp::Ordering::Equal {
                return Err(Error::Audit(format!(
                    "asymmetric pair {} {}: {} vs {}",
                    name(i),
                    name(j),
                    d[i][j],
                    d[j][i]
                )));
            }
            if i != j && space.kind() == SpaceKind::Metric && d[i][j].is_zero() {
                return Err(Error::Audit(format!(
                    "distinct points at distance 0 in a metric space: {} {}",
                    name(i),
                    name(j)
                )));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if !crate::value::triangle_holds(&d[i][k], &d[i][j], &d[j][k]) {
                    return Err(Error::Audit(format!(
                        "triangle inequality fails for {} {} {}",
                        name(i),
                        name(j),
                        name(k)
                    )));
                }
            }
        }
    }
    Ok(())
}
