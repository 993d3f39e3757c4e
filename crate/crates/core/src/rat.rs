//! Exact rational scalars.
//!
//! Everything in the exact core is a [`Rat`], an arbitrary precision rational
//! kept in lowest terms with a positive denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

/// `num/den` as a [`Rat`]. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"p/r"` or `"p"`.
///
/// Decimal input such as `"0.5"` is refused so that no float ever reaches the
/// exact core.
pub fn parse_rat(input: &str) -> Result<Rat> {
    let s = input.trim();
    if s.contains(['.', 'e', 'E']) {
        let hint = match s.parse::<f64>() {
            Ok(v) => match decimal_to_fraction(s) {
                Some(r) => format!("decimals are not accepted; write {r} instead of {v}"),
                None => "decimals are not accepted; write a fraction like 1/2".to_string(),
            },
            Err(_) => "expected a fraction like 1/2".to_string(),
        };
        return Err(Error::ParseRational {
            input: input.to_string(),
            hint,
        });
    }
    let bad = |hint: &str| Error::ParseRational {
        input: input.to_string(),
        hint: hint.to_string(),
    };
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| bad("numerator is not an integer"))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| bad("denominator is not an integer"))?;
    if den.is_zero() {
        return Err(bad("denominator is zero"));
    }
    Ok(Rat::new(num, den))
}

fn decimal_to_fraction(s: &str) -> Option<Rat> {
    let (whole, frac) = s.split_once('.')?;
    if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{whole}{frac}").parse().ok()?;
    let scale = num_traits::pow(BigInt::from(10), frac.len());
    Some(Rat::new(digits, scale))
}

/// Nearest double.
pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Decimal rendering with exactly `digits` places, rounded half away from zero.
pub fn to_decimal(r: &Rat, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = r.abs() * Rat::from_integer(scale.clone());
    let (floor, rem) = scaled.numer().div_rem(scaled.denom());
    let twice = rem * 2;
    let rounded = if &twice >= scaled.denom() {
        floor + BigInt::one()
    } else {
        floor
    };
    let negative = r.is_negative() && !rounded.is_zero();
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(&int_part.to_string());
    if digits > 0 {
        out.push('.');
        out.push_str(&format!(
            "{:0>width$}",
            frac_part.to_string(),
            width = digits
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rat("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rat(" -6/4 ").unwrap(), rat(-3, 2));
        assert_eq!(parse_rat("3").unwrap(), int(3));
        assert_eq!(parse_rat("2/-4").unwrap(), rat(-1, 2));
    }

    #[test]
    fn rejects_decimals_with_hint() {
        let err = parse_rat("0.5").unwrap_err();
        match err {
            Error::ParseRational { hint, .. } => assert!(hint.contains("1/2"), "{hint}"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
    }

    #[test]
    fn lowest_terms_and_positive_denominator() {
        let r = rat(6, -8);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(4));
        assert_eq!(rat(0, 5).denom(), &BigInt::one());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&rat(-1, 7), 6), "-0.142857");
        assert_eq!(to_decimal(&rat(2, 3), 4), "0.6667");
        assert_eq!(to_decimal(&rat(1, 2), 0), "1");
        assert_eq!(to_decimal(&rat(-1, 100000), 4), "0.0000");
        assert_eq!(to_decimal(&int(5), 2), "5.00");
    }
}
