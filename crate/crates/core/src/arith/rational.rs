//! Arbitrary-precision rationals and their canonical string form.
//!
//! Every rational that crosses a file boundary is written as `"p/q"` (or
//! `"p"` when the denominator is one). Parsing additionally accepts finite
//! decimals such as `"1.2"`, which are converted exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::Error;

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// `1 / 2^k`.
pub fn inv_pow2(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(2u8).pow(k))
}

pub fn format(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::Schema(format!("invalid rational literal {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole: BigInt = match whole {
            "" | "-" | "+" => BigInt::zero(),
            w => w.parse().map_err(|_| bad())?,
        };
        let scale = BigInt::from(10u8).pow(frac.len() as u32);
        let frac: BigInt = frac.parse().map_err(|_| bad())?;
        let mut value = Rational::from_integer(whole.abs()) + Rational::new(frac, scale);
        if negative {
            value = -value;
        }
        return Ok(value);
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(p))
}

/// Exact rational square root, if one exists.
pub fn sqrt_exact(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

pub fn is_square(q: &Rational) -> bool {
    sqrt_exact(q).is_some()
}

/// Rational lower and upper bounds on `√q` whose gap is at most `2^-bits`.
pub fn sqrt_bounds(q: &Rational, bits: u32) -> (Rational, Rational) {
    assert!(!q.is_negative(), "square root of a negative rational");
    if let Some(r) = sqrt_exact(q) {
        return (r.clone(), r);
    }
    // floor(sqrt(q * 4^bits)) / 2^bits brackets sqrt(q) from below.
    let scale = BigInt::one() << (2 * bits as usize);
    let scaled = (q.numer() * &scale).div_floor(q.denom());
    let root = scaled.sqrt();
    let unit = BigInt::one() << bits as usize;
    let lo = Rational::new(root.clone(), unit.clone());
    let hi = Rational::new(root + 1, unit);
    (lo, hi)
}

pub fn to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn is_dyadic(q: &Rational) -> bool {
    let d = q.denom();
    d.is_positive() && (d & (d - BigInt::one())).is_zero()
}

pub mod serde_str {
    //! Serde adapters writing rationals as canonical strings.
    use super::{format, parse, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::super::{format, parse, Rational};
        use serde::ser::SerializeSeq;
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for q in v {
                seq.serialize_element(&format(q))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter()
                .map(|s| parse(s).map_err(serde::de::Error::custom))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!(parse("6/4").unwrap(), ratio(3, 2));
        assert_eq!(parse("-7").unwrap(), int(-7));
        assert_eq!(parse("1.2").unwrap(), ratio(6, 5));
        assert_eq!(parse("-0.25").unwrap(), ratio(-1, 4));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
        assert!(parse("1.").is_err());
    }

    #[test]
    fn canonical_format() {
        assert_eq!(format(&ratio(10, 4)), "5/2");
        assert_eq!(format(&ratio(4, -2)), "-2");
        assert_eq!(format(&ratio(-1, 3)), "-1/3");
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(sqrt_exact(&ratio(25, 4)), Some(ratio(5, 2)));
        assert_eq!(sqrt_exact(&int(2)), None);
        assert_eq!(sqrt_exact(&int(0)), Some(int(0)));
        let (lo, hi) = sqrt_bounds(&int(2), 40);
        assert!(&lo * &lo < int(2) && &hi * &hi > int(2));
        assert!(&hi - &lo <= inv_pow2(40));
    }

    #[test]
    fn dyadic_detection() {
        assert!(is_dyadic(&ratio(3, 8)));
        assert!(is_dyadic(&int(5)));
        assert!(!is_dyadic(&ratio(1, 3)));
        assert!(!is_dyadic(&ratio(1, 6)));
    }
}
