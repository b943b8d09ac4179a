//! Finite spaces given by an explicit distance matrix.

use serde_json::Value;

use crate::space::{audit_axioms, Point, Space, SpaceKind};
use crate::value::ExactValue;
use crate::Error;

/// A finite (pseudo)metric space. Every point is dense, in list order.
#[derive(Clone, Debug)]
pub struct FiniteSpace {
    labels: Vec<String>,
    dist: Vec<Vec<ExactValue>>,
    kind: SpaceKind,
}

impl FiniteSpace {
    /// Builds and audits a finite space. The kind is pseudometric exactly
    /// when some off-diagonal entry is zero.
    pub fn new(labels: Vec<String>, dist: Vec<Vec<ExactValue>>) -> Result<Self, Error> {
        let n = labels.len();
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(Error::Schema(format!("distance matrix must be {n}x{n}")));
        }
        let mut unique = labels.clone();
        unique.sort();
        unique.dedup();
        if unique.len() != n {
            return Err(Error::Schema("duplicate point labels".into()));
        }
        let pseudo = (0..n).any(|i| (0..n).any(|j| i != j && dist[i][j].is_zero()));
        let space = FiniteSpace {
            labels,
            dist,
            kind: if pseudo {
                SpaceKind::Pseudometric
            } else {
                SpaceKind::Metric
            },
        };
        let points: Vec<Point> = (0..n).map(|id| Point::Finite { id }).collect();
        audit_axioms(&space, &points)?;
        Ok(space)
    }

    /// Builds without the axiom audit; callers guarantee the axioms.
    pub(crate) fn new_unchecked(labels: Vec<String>, dist: Vec<Vec<ExactValue>>, kind: SpaceKind) -> Self {
        FiniteSpace { labels, dist, kind }
    }

    /// Points on the real line with the usual distance. `|x - y|` is a
    /// metric, so only distinctness is checked.
    pub fn line(xs: &[crate::Rational]) -> Result<Self, Error> {
        let mut sorted = xs.to_vec();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Schema("duplicate point labels".into()));
        }
        let labels = xs.iter().map(crate::arith::rational::format).collect();
        let dist = xs
            .iter()
            .map(|x| {
                xs.iter()
                    .map(|y| ExactValue::rational(num_traits::Signed::abs(&(x - y))))
                    .collect()
            })
            .collect();
        Ok(Self::new_unchecked(labels, dist, SpaceKind::Metric))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn point(&self, id: usize) -> Point {
        Point::Finite { id }
    }

    pub fn points(&self) -> Vec<Point> {
        (0..self.len()).map(|id| Point::Finite { id }).collect()
    }

    pub fn matrix(&self) -> &[Vec<ExactValue>] {
        &self.dist
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    fn id(&self, p: &Point) -> usize {
        match p {
            Point::Finite { id } if *id < self.len() => *id,
            other => panic!("point {other:?} does not belong to this finite space"),
        }
    }
}

impl Space for FiniteSpace {
    fn dist(&self, p: &Point, q: &Point) -> ExactValue {
        self.dist[self.id(p)][self.id(q)].clone()
    }

    fn dense_point(&self, index: usize) -> Option<Point> {
        (1..=self.len()).contains(&index).then(|| Point::Finite { id: index - 1 })
    }

    fn dense_len(&self) -> Option<usize> {
        Some(self.len())
    }

    fn kind(&self) -> SpaceKind {
        self.kind
    }

    fn point_to_json(&self, p: &Point) -> Value {
        Value::String(self.labels[self.id(p)].clone())
    }

    fn point_from_json(&self, v: &Value) -> Result<Point, Error> {
        let label = match v {
            Value::String(s) => s.clone(),
            Value::Number(n) => n.to_string(),
            other => return Err(Error::Schema(format!("finite point must be a label, got {other}"))),
        };
        self.index_of(&label)
            .map(|id| Point::Finite { id })
            .ok_or_else(|| Error::Schema(format!("unknown point label {label:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, ratio};

    #[test]
    fn rejects_asymmetric_matrix() {
        let labels = vec!["a".to_string(), "b".to_string()];
        let dist = vec![
            vec![ExactValue::zero(), ExactValue::int(1)],
            vec![ExactValue::int(2), ExactValue::zero()],
        ];
        let err = FiniteSpace::new(labels, dist).unwrap_err();
        assert!(err.to_string().contains("asymmetric"), "{err}");
    }

    #[test]
    fn rejects_triangle_violation() {
        let labels: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let v = |n| ExactValue::int(n);
        let dist = vec![
            vec![v(0), v(1), v(5)],
            vec![v(1), v(0), v(1)],
            vec![v(5), v(1), v(0)],
        ];
        let err = FiniteSpace::new(labels, dist).unwrap_err();
        assert!(err.to_string().contains("triangle"), "{err}");
    }

    #[test]
    fn detects_pseudometric_kind() {
        let labels: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let v = |n| ExactValue::int(n);
        let dist = vec![
            vec![v(0), v(0), v(1)],
            vec![v(0), v(0), v(1)],
            vec![v(1), v(1), v(0)],
        ];
        assert_eq!(FiniteSpace::new(labels, dist).unwrap().kind(), SpaceKind::Pseudometric);
    }

    #[test]
    fn line_space_uses_absolute_difference() {
        let s = FiniteSpace::line(&[int(0), ratio(6, 5), ratio(5, 2)]).unwrap();
        assert_eq!(s.kind(), SpaceKind::Metric);
        let d = s.dist(&s.point(1), &s.point(2));
        assert_eq!(d.as_rational(), Some(&ratio(13, 10)));
        assert_eq!(s.labels()[1], "6/5");
    }
}
