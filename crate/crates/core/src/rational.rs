//! Exact rational scalars and their string encoding.
//!
//! Every coordinate, coefficient and probability in the crate is a
//! [`Rational`]. On the wire a rational is the string `"num/den"`, or just
//! `"num"` when the denominator is one.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serializer};
use thiserror::Error;

/// Arbitrary-precision fraction, always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid rational literal {literal:?}")]
pub struct ParseRationalError {
    pub literal: String,
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn half() -> Rational {
    frac(1, 2)
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

pub fn vector(values: &[i64]) -> Vec<Rational> {
    values.iter().map(|&v| int(v)).collect()
}

/// Parses `"a/b"`, `"a"` or `"-a/b"`. Non-reduced input is accepted and
/// reduced; zero denominators are rejected.
pub fn parse(literal: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError {
        literal: literal.to_string(),
    };
    let trimmed = literal.trim();
    let (num, den) = match trimmed.split_once('/') {
        Some((n, d)) => (n, d),
        None => (trimmed, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

pub fn format(r: &Rational) -> String {
    r.to_string()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Scales a rational vector by a positive factor so that it becomes a
/// primitive integer vector (gcd of entries equal to one). The zero vector
/// maps to itself.
pub fn primitive_integer_vector(values: &[Rational]) -> Vec<BigInt> {
    let lcm = values
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<BigInt> = values
        .iter()
        .map(|v| v.numer() * (&lcm / v.denom()))
        .collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if gcd.is_zero() {
        return ints;
    }
    ints.into_iter().map(|v| v / &gcd).collect()
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

pub(crate) mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let literal = String::deserialize(d)?;
        parse(&literal).map_err(serde::de::Error::custom)
    }
}

pub(crate) mod serde_rational_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&format(v))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let literals = Vec::<String>::deserialize(d)?;
        literals
            .iter()
            .map(|l| parse(l).map_err(serde::de::Error::custom))
            .collect()
    }
}

pub(crate) mod serde_rational_matrix {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(rows: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(rows.len()))?;
        for row in rows {
            let strings: Vec<String> = row.iter().map(format).collect();
            seq.serialize_element(&strings)?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        rows.iter()
            .map(|row| {
                row.iter()
                    .map(|l| parse(l).map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_canonical_forms() {
        assert_eq!(parse("0").unwrap(), Rational::zero());
        assert_eq!(parse("3/6").unwrap(), half());
        assert_eq!(parse("-7/2").unwrap(), frac(-7, 2));
        assert_eq!(parse(" 4 ").unwrap(), int(4));
        assert!(parse("1/0").is_err());
        assert!(parse("a/2").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn zero_is_written_without_denominator() {
        assert_eq!(format(&frac(0, 5)), "0");
        assert_eq!(format(&frac(6, -4)), "-3/2");
    }

    #[test]
    fn primitive_vector_clears_denominators() {
        let v = vec![frac(1, 2), frac(-1, 3), int(0)];
        let p = primitive_integer_vector(&v);
        assert_eq!(p, vec![BigInt::from(3), BigInt::from(-2), BigInt::from(0)]);
    }

    proptest! {
        #[test]
        fn string_form_round_trips(num in -10_000i64..10_000, den in 1i64..10_000) {
            let r = frac(num, den);
            let s = format(&r);
            let back = parse(&s).unwrap();
            prop_assert_eq!(&back, &r);
            prop_assert_eq!(format(&back), s);
        }
    }
}
