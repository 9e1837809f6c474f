//! Exact rational helpers: literal parsing, canonical formatting and
//! fixed-place decimal previews.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational used for every time, distance, profit and bound.
pub type Ratio = num_rational::BigRational;

pub fn int(n: i64) -> Ratio {
    Ratio::from_integer(BigInt::from(n))
}

pub fn frac(num: i64, den: i64) -> Ratio {
    Ratio::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `p/q`, an integer, or a decimal string such as `-0.125`.
/// Decimal strings are converted exactly.
pub fn parse_ratio(text: &str) -> Option<Ratio> {
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = parse_integer(num)?;
        let den: BigInt = parse_integer(den)?;
        if den.is_zero() {
            return None;
        }
        return Some(Ratio::new(num, den));
    }
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (whole, fraction) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && fraction.is_empty() {
        return None;
    }
    if !whole
        .chars()
        .chain(fraction.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{whole}{fraction}");
    let num: BigInt = digits.parse().ok()?;
    let den = num_traits::pow(BigInt::from(10), fraction.len());
    let value = Ratio::new(num, den);
    Some(if negative { -value } else { value })
}

fn parse_integer(text: &str) -> Option<BigInt> {
    let digits = text
        .strip_prefix('-')
        .or_else(|| text.strip_prefix('+'))
        .unwrap_or(text);
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    text.parse().ok()
}

/// Canonical text form: `n` for integers, `p/q` otherwise (always reduced).
pub fn format_ratio(value: &Ratio) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Decimal rendering with `places` digits after the point, rounded half to even.
pub fn decimal_preview(value: &Ratio, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), places);
    let scaled = value.abs() * Ratio::from_integer(scale.clone());
    let floor = scaled.floor().to_integer();
    let rest = scaled - Ratio::from_integer(floor.clone());
    let half = Ratio::new(BigInt::one(), BigInt::from(2));
    let rounded = if rest > half || (rest == half && floor.is_odd()) {
        floor + BigInt::one()
    } else {
        floor
    };
    let (whole, fraction) = rounded.div_rem(&scale);
    let sign = if value.is_negative() && !rounded_is_zero(&whole, &fraction) {
        "-"
    } else {
        ""
    };
    if places == 0 {
        return format!("{sign}{whole}");
    }
    format!(
        "{sign}{whole}.{:0>width$}",
        fraction.to_string(),
        width = places
    )
}

fn rounded_is_zero(whole: &BigInt, fraction: &BigInt) -> bool {
    whole.is_zero() && fraction.is_zero()
}
