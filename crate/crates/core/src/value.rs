//! Distance values and the exact comparisons the algorithms rely on.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{rational, QuadTower, Rational, Surd};
use crate::Error;

/// A non-negative distance.
///
/// `Exact` covers rationals and single surds, `Sqrt` holds the square root
/// of a multi-quadratic value (used for points on different circle arcs),
/// and `Approx` is a float carrying an explicit tolerance: comparisons that
/// fall within the tolerance report equality.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExactValue {
    Exact(Surd),
    Sqrt {
        sqrt: QuadTower,
    },
    Approx {
        approx: f64,
        tol: f64,
    },
}

impl ExactValue {
    pub fn zero() -> Self {
        ExactValue::Exact(Surd::zero())
    }

    pub fn rational(q: Rational) -> Self {
        ExactValue::Exact(Surd::rational(q))
    }

    pub fn int(n: i64) -> Self {
        Self::rational(rational::int(n))
    }

    /// `√q` for a non-negative rational.
    pub fn sqrt_rational(q: &Rational) -> Result<Self, Error> {
        Surd::sqrt(q).map(ExactValue::Exact)
    }

    /// `√t` for a non-negative tower element, collapsing to a surd whenever
    /// `t` is rational.
    pub fn sqrt_tower(t: QuadTower) -> Result<Self, Error> {
        if t.signum() == Ordering::Less {
            return Err(Error::Domain("square root of a negative value".into()));
        }
        match t.as_rational() {
            Some(q) => Self::sqrt_rational(q),
            None => Ok(ExactValue::Sqrt { sqrt: t }),
        }
    }

    pub fn approx(value: f64, tol: f64) -> Self {
        ExactValue::Approx { approx: value, tol }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, ExactValue::Approx { .. })
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            ExactValue::Exact(s) => s.as_rational(),
            _ => None,
        }
    }

    fn tolerance(&self) -> f64 {
        match self {
            ExactValue::Approx { tol, .. } => *tol,
            _ => 0.0,
        }
    }

    /// The square of an exact value, as a tower element.
    fn squared(&self) -> Option<QuadTower> {
        match self {
            ExactValue::Exact(s) => Some(QuadTower::from_surd(&s.square())),
            ExactValue::Sqrt { sqrt } => Some(sqrt.clone()),
            ExactValue::Approx { .. } => None,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            ExactValue::Exact(s) => s.signum() == Ordering::Less,
            ExactValue::Sqrt { .. } => false,
            ExactValue::Approx { approx, tol } => *approx < -tol,
        }
    }

    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        match self {
            ExactValue::Exact(s) => s.cmp_rational(r),
            ExactValue::Sqrt { sqrt } => {
                if r.is_negative() {
                    Ordering::Greater
                } else {
                    sqrt.cmp_rational(&(r * r))
                }
            }
            ExactValue::Approx { approx, tol } => cmp_with_tol(*approx, rational::to_f64(r), *tol),
        }
    }

    /// Compares two non-negative distances.
    pub fn cmp_value(&self, other: &ExactValue) -> Ordering {
        match (self.squared(), other.squared()) {
            (Some(a), Some(b)) => a.sub(&b).signum(),
            _ => cmp_with_tol(
                self.to_f64(),
                other.to_f64(),
                self.tolerance() + other.tolerance(),
            ),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cmp_rational(&Rational::zero()) == Ordering::Equal
    }

    pub fn lt(&self, r: &Rational) -> bool {
        self.cmp_rational(r) == Ordering::Less
    }

    pub fn le(&self, r: &Rational) -> bool {
        self.cmp_rational(r) != Ordering::Greater
    }

    pub fn gt(&self, r: &Rational) -> bool {
        self.cmp_rational(r) == Ordering::Greater
    }

    pub fn ge(&self, r: &Rational) -> bool {
        self.cmp_rational(r) != Ordering::Less
    }

    /// `rho · self` for `rho > 0`.
    pub fn scale(&self, rho: &Rational) -> ExactValue {
        match self {
            ExactValue::Exact(s) => ExactValue::Exact(s.scale(rho)),
            ExactValue::Sqrt { sqrt } => ExactValue::Sqrt {
                sqrt: sqrt.scale(&(rho * rho)),
            },
            ExactValue::Approx { approx, tol } => {
                let k = rational::to_f64(rho);
                ExactValue::Approx {
                    approx: approx * k,
                    tol: tol * k,
                }
            }
        }
    }

    /// Sum of two values, when it stays representable.
    ///
    /// Rational and same-radicand surd sums are exact; anything else returns
    /// a mixed-radicand error so callers compare squares instead.
    pub fn checked_add(&self, other: &ExactValue) -> Result<ExactValue, Error> {
        match (self, other) {
            (ExactValue::Exact(a), ExactValue::Exact(b)) => a.checked_add(b).map(ExactValue::Exact),
            (ExactValue::Approx { .. }, _) | (_, ExactValue::Approx { .. }) => Ok(ExactValue::Approx {
                approx: self.to_f64() + other.to_f64(),
                tol: self.tolerance() + other.tolerance(),
            }),
            _ => Err(Error::MixedRadicand {
                left: self.to_string(),
                right: other.to_string(),
            }),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExactValue::Exact(s) => s.to_f64(),
            ExactValue::Sqrt { sqrt } => sqrt.to_f64().sqrt(),
            ExactValue::Approx { approx, .. } => *approx,
        }
    }
}

fn cmp_with_tol(x: f64, y: f64, tol: f64) -> Ordering {
    if (x - y).abs() <= tol {
        Ordering::Equal
    } else if x < y {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// `d_xz ≤ d_xy + d_yz`, decided exactly for exact inputs.
///
/// With squares `a`, `b`, `c`: `√a ≤ √b + √c` iff `R = a − b − c ≤ 0` or
/// `R² ≤ 4bc`.
pub fn triangle_holds(d_xz: &ExactValue, d_xy: &ExactValue, d_yz: &ExactValue) -> bool {
    match (d_xz.squared(), d_xy.squared(), d_yz.squared()) {
        (Some(a), Some(b), Some(c)) => {
            let r = a.sub(&b).sub(&c);
            if r.signum() != Ordering::Greater {
                return true;
            }
            let slack = b.mul(&c).scale(&rational::int(4)).sub(&r.square());
            slack.signum() != Ordering::Less
        }
        _ => {
            let tol = d_xz.tolerance() + d_xy.tolerance() + d_yz.tolerance();
            d_xz.to_f64() <= d_xy.to_f64() + d_yz.to_f64() + tol
        }
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactValue::Exact(s) => write!(f, "{s}"),
            ExactValue::Sqrt { sqrt } => write!(f, "sqrt(~{})", sqrt.to_f64()),
            ExactValue::Approx { approx, tol } => write!(f, "{approx}±{tol}"),
        }
    }
}

impl From<Surd> for ExactValue {
    fn from(s: Surd) -> Self {
        ExactValue::Exact(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, ratio};

    #[test]
    fn sqrt_values_compare_through_squares() {
        let a = ExactValue::sqrt_rational(&int(2)).unwrap();
        let b = ExactValue::sqrt_rational(&int(3)).unwrap();
        assert_eq!(a.cmp_value(&b), Ordering::Less);
        assert_eq!(b.cmp_value(&a), Ordering::Greater);
        assert_eq!(a.cmp_value(&a.clone()), Ordering::Equal);
    }

    #[test]
    fn triangle_with_collinear_equality() {
        // √2 = √(1/2) + √(1/2)
        let a = ExactValue::sqrt_rational(&int(2)).unwrap();
        let h = ExactValue::sqrt_rational(&ratio(1, 2)).unwrap();
        assert!(triangle_holds(&a, &h, &h));
        let big = ExactValue::sqrt_rational(&ratio(201, 100)).unwrap();
        assert!(!triangle_holds(&big, &h, &h));
    }

    #[test]
    fn approx_values_use_their_tolerance() {
        let v = ExactValue::approx(1.0 + 1e-12, 1e-9);
        assert_eq!(v.cmp_rational(&int(1)), Ordering::Equal);
        assert_eq!(v.cmp_rational(&ratio(1, 2)), Ordering::Greater);
    }

    #[test]
    fn scaling_preserves_comparisons() {
        let v = ExactValue::sqrt_rational(&int(5)).unwrap();
        let half = v.scale(&ratio(1, 2));
        // √5/2 ≈ 1.118
        assert!(half.gt(&int(1)) && half.lt(&ratio(9, 8)));
    }

    #[test]
    fn serializes_without_floats_for_exact_values() {
        let v = ExactValue::sqrt_rational(&int(2)).unwrap();
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, r#"{"a":"0","b":"1","c":"2"}"#);
        let back: ExactValue = serde_json::from_str(&json).unwrap();
        assert_eq!(back.cmp_value(&v), Ordering::Equal);
    }
}
