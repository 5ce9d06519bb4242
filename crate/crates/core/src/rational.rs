//! Exact rational helpers shared by every construction.

use num::bigint::{BigInt, Sign};
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

pub type Rational = BigRational;

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// 2^e for any integer e.
pub fn pow2(e: i64) -> Rational {
    let m = BigInt::one() << e.unsigned_abs() as usize;
    if e >= 0 {
        Rational::from_integer(m)
    } else {
        Rational::new(BigInt::one(), m)
    }
}

pub fn powi(base: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= base;
    }
    acc
}

pub fn to_f64(x: &Rational) -> f64 {
    if let Some(v) = x.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // very large numerator/denominator: fall back to log-scale division
    let n = x.numer();
    let d = x.denom();
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    let shift = (nb - db) - 60;
    let scaled = if shift >= 0 {
        Rational::new(n.clone(), d.clone() << shift as usize)
    } else {
        Rational::new(n.clone() << (-shift) as usize, d.clone())
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse `{0}` as a rational number")]
pub struct ParseRationalError(pub String);

/// Parses "p/q", integers, and decimals (with optional exponent) exactly.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let t = s.trim();
    let err = || ParseRationalError(s.to_string());
    if t.is_empty() {
        return Err(err());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| err())?),
        None => (t, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(err());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{ip}{fp}");
    let mut num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| err())? };
    if neg {
        num = -num;
    }
    let scale = exp - fp.len() as i64;
    let ten = BigInt::from(10);
    let p = num::pow(ten, scale.unsigned_abs() as usize);
    Ok(if scale >= 0 { Rational::from_integer(num * p) } else { Rational::new(num, p) })
}

/// Exact decimal value of the shortest representation of `x`, so 0.1 becomes 1/10.
pub fn from_f64_decimal(x: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    parse_rational(&format!("{x:e}")).ok()
}

/// "p/q", or "p" for integers.
pub fn fmt_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Serde helpers: rationals as "p/q" strings; numbers and decimal strings are accepted on input.
pub mod serde_rational {
    use super::{fmt_rational, from_f64_decimal, parse_rational, Rational};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Text(String),
        Int(i64),
        Float(f64),
    }

    fn convert<E: Error>(r: Raw) -> Result<Rational, E> {
        match r {
            Raw::Text(s) => parse_rational(&s).map_err(E::custom),
            Raw::Int(i) => Ok(Rational::from_integer(i.into())),
            Raw::Float(f) => from_f64_decimal(f).ok_or_else(|| E::custom("non-finite number")),
        }
    }

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        convert(Raw::deserialize(d)?)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(xs.len()))?;
            for x in xs {
                seq.serialize_element(&fmt_rational(x))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            Vec::<Raw>::deserialize(d)?.into_iter().map(convert).collect()
        }
    }

    /// Nested lists, used for point patterns.
    pub mod vec2 {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(xs: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(xs.len()))?;
            for x in xs {
                let v: Vec<String> = x.iter().map(fmt_rational).collect();
                seq.serialize_element(&v)?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
            Vec::<Vec<Raw>>::deserialize(d)?.into_iter().map(|p| p.into_iter().map(convert).collect()).collect()
        }
    }
}

pub struct Exact<'a>(pub &'a Rational);

impl fmt::Display for Exact<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_rational(self.0))
    }
}

/// Exact square root if `x` is the square of a rational.
pub fn sqrt_exact(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer();
    let d = x.denom();
    let rn = n.sqrt();
    let rd = d.sqrt();
    if &rn * &rn == *n && &rd * &rd == *d {
        Some(Rational::new(rn, rd))
    } else {
        None
    }
}

/// A rational s with s ≤ √x and √x − s < 2^-bits (for x ≥ 0).
pub fn sqrt_lower(x: &Rational, bits: u32) -> Rational {
    if let Some(r) = sqrt_exact(x) {
        return r;
    }
    let scale = BigInt::one() << (2 * bits as usize);
    let scaled = (x.numer() * &scale) / x.denom();
    Rational::new(scaled.sqrt(), BigInt::one() << bits as usize)
}

/// A rational s with s ≥ √x and s − √x < 2^-bits (for x ≥ 0).
pub fn sqrt_upper(x: &Rational, bits: u32) -> Rational {
    if let Some(r) = sqrt_exact(x) {
        return r;
    }
    sqrt_lower(x, bits) + pow2(-(bits as i64))
}

/// √s_sq ≤ √t_sq + slack, decided exactly (all arguments non-negative).
pub fn sqrt_le_sqrt_plus(s_sq: &Rational, t_sq: &Rational, slack: &Rational) -> bool {
    if s_sq <= t_sq || *s_sq <= slack * slack {
        return true;
    }
    // √s > slack here, so the condition is s + slack² − t ≤ 2·slack·√s
    let l = s_sq + slack * slack - t_sq;
    if !l.is_positive() {
        return true;
    }
    &l * &l <= Rational::from_integer(4.into()) * slack * slack * s_sq
}

pub fn abs(x: &Rational) -> Rational {
    x.abs()
}

pub fn is_positive(x: &Rational) -> bool {
    x.numer().sign() == Sign::Plus
}

pub fn lcm_denominators<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    use num::integer::Integer;
    let mut l = BigInt::one();
    for x in xs {
        l = l.lcm(x.denom());
    }
    l
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_forms() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("0.1").unwrap(), rat(1, 10));
        assert_eq!(parse_rational("-2.50").unwrap(), rat(-5, 2));
        assert_eq!(parse_rational("1e-3").unwrap(), rat(1, 1000));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn float_goes_through_shortest_decimal() {
        assert_eq!(from_f64_decimal(0.1).unwrap(), rat(1, 10));
        assert_eq!(from_f64_decimal(0.6).unwrap(), rat(3, 5));
        assert_eq!(from_f64_decimal(-3.0).unwrap(), int(-3));
        assert!(from_f64_decimal(f64::NAN).is_none());
    }

    #[test]
    fn powers_and_roots() {
        assert_eq!(pow2(-3), rat(1, 8));
        assert_eq!(pow2(4), int(16));
        assert_eq!(sqrt_exact(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(sqrt_exact(&int(2)), None);
        let lo = sqrt_lower(&int(2), 30);
        let hi = sqrt_upper(&int(2), 30);
        assert!(&lo * &lo < int(2) && &hi * &hi > int(2));
        assert!(&hi - &lo <= pow2(-30));
    }

    #[test]
    fn tiny_values_convert() {
        let x = pow2(-2000) * int(3);
        let v = to_f64(&x);
        assert_eq!(v, 0.0); // below f64 range, rounds to zero
        let y = pow2(-600);
        assert!((to_f64(&y).log2() + 600.0).abs() < 1e-9);
        assert_eq!(fmt_rational(&rat(-6, 4)), "-3/2");
    }

    #[test]
    fn root_comparison_with_slack() {
        // 1.414 ≤ 1.5, 1.732 > 1.5
        assert!(sqrt_le_sqrt_plus(&int(2), &int(1), &rat(1, 2)));
        assert!(!sqrt_le_sqrt_plus(&int(3), &int(1), &rat(1, 2)));
        // boundary: √(9/4) = √1 + 1/2
        assert!(sqrt_le_sqrt_plus(&rat(9, 4), &int(1), &rat(1, 2)));
        assert!(!sqrt_le_sqrt_plus(&(rat(9, 4) + pow2(-200)), &int(1), &rat(1, 2)));
        assert!(sqrt_le_sqrt_plus(&rat(1, 4), &int(0), &rat(1, 2)));
    }
}
