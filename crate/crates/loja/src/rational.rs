//! Small helpers around `BigRational`: exact p/q formatting and parsing.
//!
//! Every rational leaving the crate (reports, CLI output) is rendered as
//! `p/q` (or a bare integer), never as a float.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::LojaError;
use crate::Result;

/// Render a rational exactly, `p/q` or `p` when the denominator is one.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `p`, `p/q` or `-p/q` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = |m: &str| LojaError::Parse {
        offset: 0,
        message: format!("{m}: {s:?}"),
    };
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad("invalid numerator"))?;
        let d: BigInt = den.trim().parse().map_err(|_| bad("invalid denominator"))?;
        if d.is_zero() {
            return Err(bad("zero denominator"));
        }
        Ok(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().map_err(|_| bad("invalid integer"))?;
        Ok(BigRational::from_integer(n))
    }
}

/// Rational from an integer pair.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Rational from an integer.
pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Approximate as f64 (diagnostics only; never used for decisions).
pub fn to_f64(r: &BigRational) -> f64 {
    let digits = 18;
    let scale = BigInt::from(10u8).pow(digits);
    let scaled = (r.numer() * &scale) / r.denom();
    let mut out = 0.0f64;
    let mut rem = scaled.abs();
    let chunk = BigInt::from(u64::MAX);
    let mut factor = 1.0f64;
    while !rem.is_zero() {
        let part = &rem % &chunk;
        let part_u64: u64 = part.try_into().unwrap_or(0);
        out += part_u64 as f64 * factor;
        rem = &rem / &chunk;
        factor *= u64::MAX as f64;
    }
    let signed = if r.is_negative() { -out } else { out };
    signed / 1e18
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_formatting() {
        for s in ["3/2", "-7/12", "0", "42", "-5"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(format_rational(&r), s);
        }
    }

    #[test]
    fn reduces_to_lowest_terms() {
        assert_eq!(format_rational(&parse_rational("6/4").unwrap()), "3/2");
    }

    #[test]
    fn rejects_zero_denominator() {
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn f64_approximation() {
        assert!((to_f64(&ratio(8, 9)) - 8.0 / 9.0).abs() < 1e-12);
        assert!((to_f64(&ratio(-95, 101)) + 95.0 / 101.0).abs() < 1e-12);
    }
}
