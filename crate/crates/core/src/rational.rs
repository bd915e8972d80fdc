//! Exact arbitrary-precision rationals and their `"p/q"` string form.
//!
//! [`Rational`] is `num_rational::BigRational`, which already keeps values in
//! canonical form (positive denominator, reduced fraction), so structural
//! equality coincides with mathematical equality.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Error;

pub type Rational = num_rational::BigRational;

/// Shorthand for a rational from machine integers.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Shorthand for an integer rational.
pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"p/q"` or plain `"p"`.
pub fn parse(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let make_err = || Error::ParseRational(s.to_string());
    match s.split_once('/') {
        Some((p, q)) => {
            let numer: BigInt = p.trim().parse().map_err(|_| make_err())?;
            let denom: BigInt = q.trim().parse().map_err(|_| make_err())?;
            if denom.is_zero() {
                return Err(make_err());
            }
            Ok(Rational::new(numer, denom))
        }
        None => {
            let numer: BigInt = s.parse().map_err(|_| make_err())?;
            Ok(Rational::from_integer(numer))
        }
    }
}

/// Formats as `"p/q"`, or just `"p"` when the denominator is one.
pub fn format(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Lossy conversion for export paths only; the core never rounds.
pub fn to_f64(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

pub fn abs(r: &Rational) -> Rational {
    Signed::abs(r)
}
