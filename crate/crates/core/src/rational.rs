//! Exact rational numbers and their textual form.
//!
//! Inputs accept integers (`"1"`), fractions (`"2/5"`) and finite decimals
//! (`"0.8"`); output is always the reduced `p/q` form, or `p` when `q = 1`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses an exact rational from an integer, fraction or decimal string.
pub fn parse(text: &str) -> Result<Rational, Error> {
    let bad = || Error::InvalidNumber(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_decimal(num.trim()).ok_or_else(bad)?;
        let den = parse_decimal(den.trim()).ok_or_else(bad)?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(num / den);
    }
    parse_decimal(s).ok_or_else(bad)
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (negative, digits) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, frac) = match digits.split_once('.') {
        Some((w, f)) => (w, f),
        None => (digits, ""),
    };
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let mut numer: BigInt = if whole.is_empty() { BigInt::zero() } else { whole.parse().ok()? };
    let mut denom = BigInt::one();
    for c in frac.chars() {
        numer = numer * 10 + BigInt::from(c.to_digit(10)?);
        denom *= 10;
    }
    if negative {
        numer = -numer;
    }
    Some(Rational::new(numer, denom))
}

/// Renders `p/q` in lowest terms, or just `p` for integers.
pub fn format(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn in_unit_interval(value: &Rational) -> bool {
    !value.is_negative() && *value <= one()
}

pub fn max_of<'a, I>(values: I) -> Option<Rational>
where
    I: IntoIterator<Item = &'a Rational>,
{
    values.into_iter().max().cloned()
}

pub fn pow(base: &Rational, exp: usize) -> Rational {
    num_traits::pow(base.clone(), exp)
}
