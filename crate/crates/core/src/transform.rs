//! Spaces derived from other spaces: rescaling, the metric quotient of a
//! pseudometric, and finite subspaces.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Signed;

use crate::arith::{rational, Rational};
use crate::space::{all_points, Point, Space, SpaceKind};
use crate::value::ExactValue;
use crate::Error;

/// The same points with every distance multiplied by `rho`.
#[derive(Clone)]
pub struct Rescaled<S = Arc<dyn Space>> {
    inner: S,
    rho: Rational,
}

pub fn rescale<S: Space>(space: S, rho: Rational) -> Result<Rescaled<S>, Error> {
    if !rho.is_positive() {
        return Err(Error::Precondition(format!(
            "rescaling factor must be positive, got {}",
            rational::format(&rho)
        )));
    }
    Ok(Rescaled { inner: space, rho })
}

impl<S> Rescaled<S> {
    pub fn rho(&self) -> &Rational {
        &self.rho
    }

    pub fn inner(&self) -> &S {
        &self.inner
    }
}

impl<S: Space> Space for Rescaled<S> {
    fn dist(&self, p: &Point, q: &Point) -> ExactValue {
        self.inner.dist(p, q).scale(&self.rho)
    }

    fn dense_point(&self, index: usize) -> Option<Point> {
        self.inner.dense_point(index)
    }

    fn dense_len(&self) -> Option<usize> {
        self.inner.dense_len()
    }

    fn extra_points(&self) -> Vec<Point> {
        self.inner.extra_points()
    }

    fn kind(&self) -> SpaceKind {
        self.inner.kind()
    }

    fn is_complete(&self) -> bool {
        self.inner.is_complete()
    }

    fn point_to_json(&self, p: &Point) -> serde_json::Value {
        self.inner.point_to_json(p)
    }

    fn point_from_json(&self, v: &serde_json::Value) -> Result<Point, Error> {
        self.inner.point_from_json(v)
    }
}

/// Maps every point of a pseudometric space to the representative of its
/// distance-zero class.
pub type RepresentativeMap = BTreeMap<Point, Point>;

/// The metric space of distance-zero classes, `d([x],[y]) = p(x,y)`.
///
/// Each class is represented by its member with the least discovery
/// index (dense points in order, then extra points).
#[derive(Clone)]
pub struct Quotient {
    inner: Arc<dyn Space>,
    dense: Vec<Point>,
    extras: Vec<Point>,
}

pub fn quotient_to_metric(space: Arc<dyn Space>) -> Result<(Quotient, RepresentativeMap), Error> {
    let dense_len = space.dense_len().ok_or_else(|| {
        Error::Unsupported("quotient needs a finite presentation or a class enumerator".into())
    })?;
    let points = all_points(space.as_ref())?;
    let mut reps: Vec<(Point, bool)> = Vec::new();
    let mut map = RepresentativeMap::new();
    for (pos, p) in points.iter().enumerate() {
        // Comparing against representatives suffices: p(x, r) = 0 and
        // p(r, r') > 0 exclude p(x, r') = 0 by the triangle inequality.
        let rep = reps.iter().find(|(r, _)| space.dist(p, r).is_zero()).map(|(r, _)| r.clone());
        let rep = match rep {
            Some(r) => r,
            None => {
                reps.push((p.clone(), pos < dense_len));
                p.clone()
            }
        };
        map.insert(p.clone(), rep);
    }
    let (dense, extras): (Vec<_>, Vec<_>) = reps.into_iter().partition(|(_, dense)| *dense);
    Ok((
        Quotient {
            inner: space,
            dense: dense.into_iter().map(|(p, _)| p).collect(),
            extras: extras.into_iter().map(|(p, _)| p).collect(),
        },
        map,
    ))
}

impl Quotient {
    pub fn classes(&self) -> usize {
        self.dense.len() + self.extras.len()
    }
}

impl Space for Quotient {
    fn dist(&self, p: &Point, q: &Point) -> ExactValue {
        self.inner.dist(p, q)
    }

    fn dense_point(&self, index: usize) -> Option<Point> {
        index.checked_sub(1).and_then(|i| self.dense.get(i).cloned())
    }

    fn dense_len(&self) -> Option<usize> {
        Some(self.dense.len())
    }

    fn extra_points(&self) -> Vec<Point> {
        self.extras.clone()
    }

    fn kind(&self) -> SpaceKind {
        SpaceKind::Metric
    }

    fn point_to_json(&self, p: &Point) -> serde_json::Value {
        self.inner.point_to_json(p)
    }

    fn point_from_json(&self, v: &serde_json::Value) -> Result<Point, Error> {
        self.inner.point_from_json(v)
    }
}

/// A finite subspace with an explicit dense list and extra list.
#[derive(Clone)]
pub struct Subspace {
    inner: Arc<dyn Space>,
    dense: Vec<Point>,
    extras: Vec<Point>,
}

impl Subspace {
    pub fn new(inner: Arc<dyn Space>, dense: Vec<Point>, extras: Vec<Point>) -> Self {
        Subspace { inner, dense, extras }
    }

    pub fn dense(&self) -> &[Point] {
        &self.dense
    }
}

impl Space for Subspace {
    fn dist(&self, p: &Point, q: &Point) -> ExactValue {
        self.inner.dist(p, q)
    }

    fn dense_point(&self, index: usize) -> Option<Point> {
        index.checked_sub(1).and_then(|i| self.dense.get(i).cloned())
    }

    fn dense_len(&self) -> Option<usize> {
        Some(self.dense.len())
    }

    fn extra_points(&self) -> Vec<Point> {
        self.extras.clone()
    }

    fn kind(&self) -> SpaceKind {
        self.inner.kind()
    }

    fn point_to_json(&self, p: &Point) -> serde_json::Value {
        self.inner.point_to_json(p)
    }

    fn point_from_json(&self, v: &serde_json::Value) -> Result<Point, Error> {
        self.inner.point_from_json(v)
    }
}
