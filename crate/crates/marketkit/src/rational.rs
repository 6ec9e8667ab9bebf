//! Exact number type and its text forms.
//!
//! Every quantity in the toolkit is a [`Rational`]: an arbitrary-precision
//! fraction kept in lowest terms with a positive denominator. Text input
//! accepts integers (`3`, `-7`), fractions (`6/5`, `-1/3`) and finite
//! decimals (`1.25`); exponent notation and non-finite values are rejected
//! so that parsing is exact in every mode.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number. Normalized by construction:
/// the denominator is positive and the fraction is in lowest terms.
pub type Rational = num_rational::BigRational;

/// Rational from an integer.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational from a numerator/denominator pair.
///
/// Panics if `den` is zero; intended for literals in code and tests.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Error raised when a token is not an exact number.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid exact number {token:?}: {reason}")]
pub struct NumberParseError {
    pub token: String,
    pub reason: &'static str,
}

fn parse_digits(s: &str, token: &str) -> Result<BigInt, NumberParseError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(NumberParseError {
            token: token.to_owned(),
            reason: "expected a digit run",
        });
    }
    Ok(s.parse::<BigInt>().expect("digit run parses"))
}

/// Parses an exact number: integer, `p/q` fraction or finite decimal.
///
/// Floating-point style literals (`1e-3`, `inf`, `NaN`) are rejected.
pub fn parse_exact(token: &str) -> Result<Rational, NumberParseError> {
    let (negative, body) = match token.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, token),
    };
    if body.is_empty() {
        return Err(NumberParseError {
            token: token.to_owned(),
            reason: "empty number",
        });
    }
    let magnitude = if let Some((num, den)) = body.split_once('/') {
        let num = parse_digits(num, token)?;
        let den = parse_digits(den, token)?;
        if den.is_zero() {
            return Err(NumberParseError {
                token: token.to_owned(),
                reason: "zero denominator",
            });
        }
        Rational::new(num, den)
    } else if let Some((whole, frac)) = body.split_once('.') {
        let whole = parse_digits(whole, token)?;
        let places = frac.len();
        let frac = parse_digits(frac, token)?;
        let scale = BigInt::from(10u8).pow(places as u32);
        Rational::new(whole * &scale + frac, scale)
    } else {
        Rational::from_integer(parse_digits(body, token)?)
    };
    Ok(if negative { -magnitude } else { magnitude })
}

/// Canonical fraction form: `p` when the denominator is one, else `p/q`.
pub fn fraction_string(value: &Rational) -> String {
    value.to_string()
}

/// Fixed-point decimal with `digits` places, rounded half away from zero.
pub fn decimal_string(value: &Rational, digits: u32) -> String {
    let scale = BigInt::from(10u8).pow(digits);
    let num = value.numer() * &scale;
    let den = value.denom().clone();
    let (quot, rem) = (&num / &den, &num % &den);
    let mut units = quot;
    if rem.abs() * 2 >= den {
        if num.is_negative() {
            units -= 1;
        } else {
            units += 1;
        }
    }
    let sign = if units.is_negative() { "-" } else { "" };
    let units = units.abs();
    if digits == 0 {
        return format!("{sign}{units}");
    }
    let whole = &units / &scale;
    let frac = &units % &scale;
    format!("{sign}{whole}.{frac:0width$}", width = digits as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_fractions_decimals() {
        assert_eq!(parse_exact("3").unwrap(), int(3));
        assert_eq!(parse_exact("-7").unwrap(), int(-7));
        assert_eq!(parse_exact("6/5").unwrap(), ratio(6, 5));
        assert_eq!(parse_exact("-1/3").unwrap(), ratio(-1, 3));
        assert_eq!(parse_exact("1.25").unwrap(), ratio(5, 4));
        assert_eq!(parse_exact("-0.5").unwrap(), ratio(-1, 2));
        assert_eq!(parse_exact("0.0").unwrap(), int(0));
    }

    #[test]
    fn rejects_non_exact_tokens() {
        for bad in ["", "-", "1e5", "1E5", "inf", "NaN", "1/0", ".5", "5.", "1/-2", "+3", "1 2"] {
            assert!(parse_exact(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn canonical_fraction_form() {
        assert_eq!(fraction_string(&ratio(6, 5)), "6/5");
        assert_eq!(fraction_string(&int(4)), "4");
        assert_eq!(fraction_string(&ratio(-2, 4)), "-1/2");
    }

    #[test]
    fn decimal_rendering_rounds_half_away_from_zero() {
        assert_eq!(decimal_string(&ratio(6, 5), 6), "1.200000");
        assert_eq!(decimal_string(&ratio(1, 3), 6), "0.333333");
        assert_eq!(decimal_string(&ratio(2, 3), 6), "0.666667");
        assert_eq!(decimal_string(&ratio(-1, 2), 0), "-1");
        assert_eq!(decimal_string(&ratio(1, 2), 0), "1");
        assert_eq!(decimal_string(&int(99), 2), "99.00");
    }
}
