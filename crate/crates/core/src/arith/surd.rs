//! Quadratic surds `a + b·√c` with rational `a`, `b` and `c ≥ 0`.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{self, Rational};
use crate::Error;

/// A real number `a + b·√c`.
///
/// Values are kept canonical: whenever `b = 0` or `c` is the square of a
/// rational, the surd is stored as the rational `a` with `b = c = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Surd {
    #[serde(with = "rational::serde_str")]
    a: Rational,
    #[serde(with = "rational::serde_str")]
    b: Rational,
    #[serde(with = "rational::serde_str")]
    c: Rational,
}

impl Surd {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Result<Self, Error> {
        if c.is_negative() {
            return Err(Error::Domain(format!(
                "negative radicand {}",
                rational::format(&c)
            )));
        }
        Ok(Self::canonical(a, b, c))
    }

    fn canonical(a: Rational, b: Rational, c: Rational) -> Self {
        if b.is_zero() || c.is_zero() {
            return Self::rational(a);
        }
        match rational::sqrt_exact(&c) {
            Some(root) => Self::rational(a + b * root),
            None => Surd { a, b, c },
        }
    }

    pub fn rational(a: Rational) -> Self {
        Surd {
            a,
            b: Rational::zero(),
            c: Rational::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::rational(Rational::zero())
    }

    /// `√q`, reduced to a rational when `q` is a perfect square.
    pub fn sqrt(q: &Rational) -> Result<Self, Error> {
        Self::new(Rational::zero(), rational::int(1), q.clone())
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    /// Sign of the real value, decided exactly.
    pub fn signum(&self) -> Ordering {
        sign_of(&self.a, &self.b, &self.c)
    }

    /// Exact comparison of the value against a rational.
    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        sign_of(&(&self.a - r), &self.b, &self.c)
    }

    pub fn neg(&self) -> Self {
        Surd {
            a: -&self.a,
            b: -&self.b,
            c: self.c.clone(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::canonical(&self.a * k, &self.b * k, self.c.clone())
    }

    pub fn add_rational(&self, r: &Rational) -> Self {
        Surd {
            a: &self.a + r,
            b: self.b.clone(),
            c: self.c.clone(),
        }
    }

    /// `self + other` when the sum stays inside a single `a + b√c`.
    ///
    /// Radicands unify when their ratio is a rational square, so
    /// `√8` and `√2` combine while `√2` and `√3` do not.
    pub fn checked_add(&self, other: &Surd) -> Result<Surd, Error> {
        if other.is_rational() {
            return Ok(self.add_rational(&other.a));
        }
        if self.is_rational() {
            return Ok(other.add_rational(&self.a));
        }
        let ratio = &other.c / &self.c;
        match rational::sqrt_exact(&ratio) {
            // b2·√c2 = b2·√(c2/c1)·√c1
            Some(root) => Ok(Self::canonical(
                &self.a + &other.a,
                &self.b + &other.b * root,
                self.c.clone(),
            )),
            None => Err(Error::MixedRadicand {
                left: rational::format(&self.c),
                right: rational::format(&other.c),
            }),
        }
    }

    pub fn checked_sub(&self, other: &Surd) -> Result<Surd, Error> {
        self.checked_add(&other.neg())
    }

    pub fn square(&self) -> Surd {
        // (a + b√c)² = a² + b²c + 2ab√c
        Self::canonical(
            &self.a * &self.a + &self.b * &self.b * &self.c,
            rational::int(2) * &self.a * &self.b,
            self.c.clone(),
        )
    }

    pub fn to_f64(&self) -> f64 {
        rational::to_f64(&self.a) + rational::to_f64(&self.b) * rational::to_f64(&self.c).sqrt()
    }
}

/// Sign of `p + q·√c` by sign analysis and one squaring step.
pub(crate) fn sign_of(p: &Rational, q: &Rational, c: &Rational) -> Ordering {
    let sp = p.cmp(&Rational::zero());
    let sq = if c.is_zero() {
        Ordering::Equal
    } else {
        q.cmp(&Rational::zero())
    };
    match (sp, sq) {
        (s, Ordering::Equal) => s,
        (Ordering::Equal, s) => s,
        (a, b) if a == b => a,
        // Opposite signs: the larger magnitude wins.
        (s, _) => {
            let diff = p * p - q * q * c;
            match diff.cmp(&Rational::zero()) {
                Ordering::Equal => Ordering::Equal,
                Ordering::Greater => s,
                Ordering::Less => s.reverse(),
            }
        }
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", rational::format(&self.a));
        }
        write!(
            f,
            "{} + {}*sqrt({})",
            rational::format(&self.a),
            rational::format(&self.b),
            rational::format(&self.c)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, ratio};

    fn surd(a: Rational, b: Rational, c: Rational) -> Surd {
        Surd::new(a, b, c).unwrap()
    }

    #[test]
    fn sqrt_of_perfect_square_is_rational() {
        let s = Surd::sqrt(&ratio(25, 4)).unwrap();
        assert_eq!(s.as_rational(), Some(&ratio(5, 2)));
        assert_eq!(s.c(), &int(0));
        assert_eq!(Surd::sqrt(&int(0)).unwrap(), Surd::zero());
    }

    #[test]
    fn sqrt_of_two_stays_irrational() {
        let s = Surd::sqrt(&int(2)).unwrap();
        assert_eq!((s.a(), s.b(), s.c()), (&int(0), &int(1), &int(2)));
    }

    #[test]
    fn negative_radicand_is_a_domain_error() {
        assert!(matches!(Surd::sqrt(&int(-1)), Err(Error::Domain(_))));
    }

    #[test]
    fn compares_against_rationals() {
        // 2 + √2 ≈ 3.414 < 7/2
        let s = surd(int(2), int(1), int(2));
        assert_eq!(s.cmp_rational(&ratio(7, 2)), Ordering::Less);
        let five_halves = Surd::sqrt(&ratio(25, 4)).unwrap();
        assert_eq!(five_halves.cmp_rational(&ratio(5, 2)), Ordering::Equal);
        assert_eq!(five_halves.cmp_rational(&int(1)), Ordering::Greater);
        // 3 - √2 ≈ 1.586
        let t = surd(int(3), int(-1), int(2));
        assert_eq!(t.cmp_rational(&ratio(3, 2)), Ordering::Greater);
        assert_eq!(t.cmp_rational(&ratio(8, 5)), Ordering::Less);
    }

    #[test]
    fn linear_combination_with_shared_radicand() {
        let x = surd(int(1), int(2), int(3));
        let y = surd(int(2), int(-1), int(3));
        assert_eq!(x.checked_add(&y).unwrap(), surd(int(3), int(1), int(3)));
    }

    #[test]
    fn linear_combination_rejects_mixed_radicands() {
        let x = surd(int(1), int(1), int(2));
        let y = surd(int(1), int(1), int(3));
        assert!(matches!(x.checked_add(&y), Err(Error::MixedRadicand { .. })));
    }

    #[test]
    fn radicands_unify_up_to_square_factor() {
        let x = surd(int(1), int(1), int(8));
        let y = surd(int(1), int(-2), int(2));
        assert_eq!(x.checked_add(&y).unwrap(), Surd::rational(int(2)));
    }

    #[test]
    fn squaring_keeps_radicand() {
        // (1 + √2)² = 3 + 2√2
        let s = surd(int(1), int(1), int(2)).square();
        assert_eq!(s, surd(int(3), int(2), int(2)));
    }
}
