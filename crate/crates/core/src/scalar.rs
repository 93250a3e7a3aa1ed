//! Numeric backends.
//!
//! Exact predicates and finite-support probabilities run on [`Rat`]
//! (arbitrary precision rationals); sampling and angles run on `f64`.
//! Geometry and preference code is generic over [`Scalar`] so the same
//! predicate serves both.

use std::fmt::Debug;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub trait Scalar: Clone + PartialOrd + Debug + Num + Signed + FromPrimitive + Send + Sync + 'static {
    fn to_f64(&self) -> f64;
    fn from_rat(r: &Rat) -> Self;

    fn from_int(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("integer is representable")
    }

    /// Sign as -1, 0, +1.
    fn sign(&self) -> i8 {
        if self.is_zero() {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        }
    }

    fn half() -> Self {
        Self::one() / (Self::one() + Self::one())
    }

    /// Slack used by membership checks: zero for exact arithmetic.
    fn slack() -> Self;
}

impl Scalar for Rat {
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }

    fn slack() -> Self {
        Rat::zero()
    }
}

impl Scalar for f64 {
    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_rat(r: &Rat) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn slack() -> Self {
        1e-12
    }
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// Parses `"3/4"`, `"-2"`, or a finite decimal such as `"0.125"` / `"1e-3"`
/// into an exact rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|e| Error::Parse(format!("{s}: {e}")))?;
        let d = BigInt::from_str(d.trim()).map_err(|e| Error::Parse(format!("{s}: {e}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("{s}: zero denominator")));
        }
        return Ok(Rat::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = s[i + 1..].parse().map_err(|e| Error::Parse(format!("{s}: {e}")))?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::Parse(format!("{s}: no digits")));
    }
    let all = format!("{int_part}{frac_part}");
    if !all.chars().all(|c| c.is_ascii_digit()) {
        return Err(Error::Parse(format!("{s}: not a number")));
    }
    let mut value = Rat::from_integer(BigInt::from_str(&all).unwrap_or_default());
    let scale = exp - frac_part.len() as i32;
    let ten = Rat::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Ok(if neg { -value } else { value })
}

/// `"n/d"` or `"n"` for integers.
pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact conversion of a finite float.
pub fn rat_from_f64(v: f64) -> Result<Rat> {
    Rat::from_float(v).ok_or_else(|| Error::Parse(format!("{v} is not finite")))
}

pub fn binomial(n: u32, k: u32) -> Rat {
    if k > n {
        return Rat::zero();
    }
    let mut acc = Rat::one();
    for i in 0..k {
        acc = acc * int((n - i) as i64) / int((i + 1) as i64);
    }
    acc
}

/// Serde adapter storing a rational as a `"num/den"` string; decimals are
/// accepted on input.
pub mod rat_string {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Str(String),
            Int(i64),
            Float(f64),
        }
        match Raw::deserialize(d)? {
            Raw::Str(s) => parse_rat(&s).map_err(serde::de::Error::custom),
            Raw::Int(i) => Ok(int(i)),
            Raw::Float(f) => parse_rat(&f.to_string()).map_err(serde::de::Error::custom),
        }
    }
}

pub mod rat_string_vec {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format_rat(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rat>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "super::rat_string")] Rat);
        let raw: Vec<Wrap> = Vec::deserialize(d)?;
        Ok(raw.into_iter().map(|w| w.0).collect())
    }
}

pub mod rat_array3 {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rat; 3], s: S) -> std::result::Result<S::Ok, S::Error> {
        super::rat_string_vec::serialize(v, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<[Rat; 3], D::Error> {
        let v = super::rat_string_vec::deserialize(d)?;
        <[Rat; 3]>::try_from(v).map_err(|v| serde::de::Error::custom(format!("expected 3 values, got {}", v.len())))
    }
}
