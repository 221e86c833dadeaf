//! Exact rational values and their text forms.

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = Rational64;

/// Parses `p`, `-p`, `p/q`, or a finite decimal such as `0.25`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::BadRational(text.to_string());
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| bad())?;
        let den: i64 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 18 {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_part: i64 = match int.trim_start_matches(['-', '+']) {
            "" => 0,
            digits => digits.parse().map_err(|_| bad())?,
        };
        let scale = 10i64.checked_pow(frac.len() as u32).ok_or_else(bad)?;
        let frac_part: i64 = frac.parse().map_err(|_| bad())?;
        let magnitude = int_part.checked_mul(scale).and_then(|v| v.checked_add(frac_part)).ok_or_else(bad)?;
        let value = Rational::new(magnitude, scale);
        return Ok(if negative { -value } else { value });
    }
    s.parse::<i64>().map(Rational::from_integer).map_err(|_| bad())
}

/// Exact form: `p/q`, or `p` when the denominator is 1.
pub fn fraction(r: &Rational) -> String {
    r.to_string()
}

/// Six-place decimal sidecar for display. The fraction is authoritative.
pub fn decimal6(r: &Rational) -> String {
    let v = r.to_f64().unwrap_or(f64::NAN);
    // avoid printing "-0.000000" for tiny negatives that round to zero
    if v.abs() < 5e-7 {
        return "0.000000".to_string();
    }
    format!("{v:.6}")
}

pub(crate) fn sum<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    values.into_iter().fold(Rational::zero(), |acc, v| acc + v)
}
