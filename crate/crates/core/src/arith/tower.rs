//! Elements of multi-quadratic fields `ℚ(√c₁, …, √c_k)`.
//!
//! Used where a comparison mixes several radicands, e.g. squared distances
//! between two points on different circle arcs. The sign procedure splits
//! off the last radicand, `x = A + B·√c`, and recurses on `A`, `B` and
//! `A² − B²c`; it never evaluates a floating-point approximation.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{self, Rational};
use super::surd::Surd;

/// `Σ_mask coeffs[mask] · Π_{i ∈ mask} √radicands[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadTower {
    #[serde(with = "rational::serde_str::vec")]
    radicands: Vec<Rational>,
    #[serde(with = "rational::serde_str::vec")]
    coeffs: Vec<Rational>,
}

impl QuadTower {
    pub fn rational(q: Rational) -> Self {
        QuadTower {
            radicands: Vec::new(),
            coeffs: vec![q],
        }
    }

    pub fn zero() -> Self {
        Self::rational(Rational::zero())
    }

    /// Builds a tower element from raw parts; `coeffs.len()` must be
    /// `2^radicands.len()` and all radicands non-negative.
    pub fn from_parts(radicands: Vec<Rational>, coeffs: Vec<Rational>) -> Option<Self> {
        if radicands.len() > 16
            || coeffs.len() != 1 << radicands.len()
            || radicands.iter().any(|c| c.is_negative())
        {
            return None;
        }
        Some(QuadTower { radicands, coeffs }.simplified())
    }

    pub fn from_surd(s: &Surd) -> Self {
        if s.is_rational() {
            return Self::rational(s.a().clone());
        }
        QuadTower {
            radicands: vec![s.c().clone()],
            coeffs: vec![s.a().clone(), s.b().clone()],
        }
    }

    pub fn radicands(&self) -> &[Rational] {
        &self.radicands
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.radicands.is_empty().then(|| &self.coeffs[0])
    }

    /// The value as a single surd, when at most one radicand remains.
    pub fn as_surd(&self) -> Option<Surd> {
        match self.radicands.len() {
            0 => Some(Surd::rational(self.coeffs[0].clone())),
            1 => Surd::new(
                self.coeffs[0].clone(),
                self.coeffs[1].clone(),
                self.radicands[0].clone(),
            )
            .ok(),
            _ => None,
        }
    }

    fn lift(&self, target: &[Rational]) -> Vec<Rational> {
        let positions: Vec<usize> = self
            .radicands
            .iter()
            .map(|c| target.iter().position(|t| t == c).expect("radicand present"))
            .collect();
        let mut out = vec![Rational::zero(); 1 << target.len()];
        for (mask, coeff) in self.coeffs.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let mut lifted = 0usize;
            for (bit, pos) in positions.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    lifted |= 1 << pos;
                }
            }
            out[lifted] += coeff;
        }
        out
    }

    fn union(&self, other: &Self) -> Vec<Rational> {
        let mut radicands = self.radicands.clone();
        for c in &other.radicands {
            if !radicands.contains(c) {
                radicands.push(c.clone());
            }
        }
        radicands
    }

    pub fn add(&self, other: &Self) -> Self {
        let radicands = self.union(other);
        let mut coeffs = self.lift(&radicands);
        for (slot, c) in coeffs.iter_mut().zip(other.lift(&radicands)) {
            *slot += c;
        }
        QuadTower { radicands, coeffs }.simplified()
    }

    pub fn neg(&self) -> Self {
        QuadTower {
            radicands: self.radicands.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        QuadTower {
            radicands: self.radicands.clone(),
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
        .simplified()
    }

    pub fn add_rational(&self, r: &Rational) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += r;
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let radicands = self.union(other);
        let left = self.lift(&radicands);
        let right = other.lift(&radicands);
        let n = radicands.len();
        // products[m] = Π_{i ∈ m} c_i, the value of (Π √c_i)² restricted to m.
        let mut products = vec![Rational::one(); 1 << n];
        for mask in 1..(1usize << n) {
            let bit = mask.trailing_zeros() as usize;
            products[mask] = &products[mask & (mask - 1)] * &radicands[bit];
        }
        let mut coeffs = vec![Rational::zero(); 1 << n];
        for (m1, x) in left.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (m2, y) in right.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                coeffs[m1 ^ m2] += x * y * &products[m1 & m2];
            }
        }
        QuadTower { radicands, coeffs }.simplified()
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    /// Folds perfect-square radicands into the coefficients and drops
    /// radicands that no longer occur.
    fn simplified(mut self) -> Self {
        let mut i = 0;
        while i < self.radicands.len() {
            let bit = 1usize << i;
            let root = rational::sqrt_exact(&self.radicands[i]);
            let unused = self
                .coeffs
                .iter()
                .enumerate()
                .all(|(m, c)| m & bit == 0 || c.is_zero());
            if root.is_none() && !unused {
                i += 1;
                continue;
            }
            let root = root.unwrap_or_else(Rational::zero);
            let mut coeffs = vec![Rational::zero(); self.coeffs.len() / 2];
            for (mask, c) in self.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let low = mask & (bit - 1);
                let high = (mask >> (i + 1)) << i;
                let target = low | high;
                if mask & bit == 0 {
                    coeffs[target] += c;
                } else {
                    coeffs[target] += c * &root;
                }
            }
            self.radicands.remove(i);
            self.coeffs = coeffs;
        }
        self
    }

    /// Splits `x = A + B·√c_last`.
    fn split_last(&self) -> (QuadTower, QuadTower, Rational) {
        let k = self.radicands.len();
        let half = 1usize << (k - 1);
        let radicands = self.radicands[..k - 1].to_vec();
        let low = QuadTower {
            radicands: radicands.clone(),
            coeffs: self.coeffs[..half].to_vec(),
        };
        let high = QuadTower {
            radicands,
            coeffs: self.coeffs[half..].to_vec(),
        };
        (low, high, self.radicands[k - 1].clone())
    }

    /// Exact sign of the represented real number.
    pub fn signum(&self) -> Ordering {
        if self.radicands.is_empty() {
            return self.coeffs[0].cmp(&Rational::zero());
        }
        if let Some(s) = self.float_sign() {
            return s;
        }
        let (a, b, c) = self.split_last();
        let sa = a.signum();
        let sb = if c.is_zero() { Ordering::Equal } else { b.signum() };
        match (sa, sb) {
            (s, Ordering::Equal) => s,
            (Ordering::Equal, s) => s,
            (x, y) if x == y => x,
            (s, _) => {
                let diff = a.square().sub(&b.square().scale(&c));
                match diff.signum() {
                    Ordering::Equal => Ordering::Equal,
                    Ordering::Greater => s,
                    Ordering::Less => s.reverse(),
                }
            }
        }
    }

    // Sign from a floating-point sum, trusted only when the sum clears the
    // accumulated rounding error by a wide margin and nothing under/overflowed.
    fn float_sign(&self) -> Option<Ordering> {
        const TINY: f64 = 1e-150;
        if self.radicands.len() > 16 {
            return None;
        }
        let roots = self
            .radicands
            .iter()
            .map(|r| {
                let v = rational::to_f64(r);
                (v.is_finite() && v >= TINY && v <= 1e150).then(|| v.sqrt())
            })
            .collect::<Option<Vec<f64>>>()?;
        let (mut value, mut mag) = (0.0f64, 0.0f64);
        for (mask, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut term = rational::to_f64(c);
            if !term.is_finite() || term.abs() < TINY || term.abs() > 1e150 {
                return None;
            }
            for (i, root) in roots.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    term *= root;
                }
            }
            value += term;
            mag += term.abs();
        }
        if mag == 0.0 {
            return Some(Ordering::Equal);
        }
        if value.abs() > mag * 2f64.powi(-30) {
            Some(if value > 0.0 { Ordering::Greater } else { Ordering::Less })
        } else {
            None
        }
    }

    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        self.add_rational(&-r).signum()
    }

    pub fn to_f64(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(mask, c)| {
                let mut term = rational::to_f64(c);
                for (i, r) in self.radicands.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        term *= rational::to_f64(r).sqrt();
                    }
                }
                term
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, ratio};

    fn sqrt(c: i64) -> QuadTower {
        QuadTower::from_parts(vec![int(c)], vec![int(0), int(1)]).unwrap()
    }

    #[test]
    fn perfect_square_radicands_fold() {
        let t = sqrt(9).add_rational(&int(1));
        assert_eq!(t.as_rational(), Some(&int(4)));
    }

    #[test]
    fn product_of_roots() {
        // √2·√3·√6 = 6
        let t = sqrt(2).mul(&sqrt(3)).mul(&sqrt(6));
        assert_eq!(t.signum(), Ordering::Greater);
        assert_eq!(t.cmp_rational(&int(6)), Ordering::Equal);
    }

    #[test]
    fn sign_with_two_radicands() {
        // √2 + √3 ≈ 3.146 vs π-ish bounds
        let t = sqrt(2).add(&sqrt(3));
        assert_eq!(t.cmp_rational(&ratio(314, 100)), Ordering::Greater);
        assert_eq!(t.cmp_rational(&ratio(315, 100)), Ordering::Less);
        // √2 + √3 − √(5 + 2√6) = 0
        let inner = QuadTower::from_parts(vec![int(6)], vec![int(5), int(2)]).unwrap();
        assert_eq!(inner.cmp_rational(&int(0)), Ordering::Greater);
        let lhs = t.square();
        assert_eq!(lhs.sub(&inner).signum(), Ordering::Equal);
    }

    #[test]
    fn dependent_radicands_still_decide() {
        // √8 − 2√2 = 0 even though 8 and 2 are listed separately.
        let t = sqrt(8).sub(&sqrt(2).scale(&int(2)));
        assert_eq!(t.signum(), Ordering::Equal);
    }
}
