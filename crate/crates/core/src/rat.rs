//! Arbitrary-precision rational helpers shared by every module.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::CoreError;

/// The exact scalar used throughout: a ratio of arbitrary-precision integers.
pub type Rat = BigRational;

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn big_to_rat(v: &BigInt) -> Rat {
    Rat::from_integer(v.clone())
}

/// Parses `p` or `p/q` with an optional leading minus sign.
pub fn parse_rat(text: &str) -> Result<Rat, CoreError> {
    let bad = || CoreError::invalid(format!("invalid rational literal `{text}`"));
    let mut parts = text.splitn(2, '/');
    let numer: BigInt = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    match parts.next() {
        None => Ok(Rat::from_integer(numer)),
        Some(d) => {
            let denom: BigInt = d.trim().parse().map_err(|_| bad())?;
            if denom.is_zero() {
                return Err(CoreError::invalid(format!("zero denominator in `{text}`")));
            }
            Ok(Rat::new(numer, denom))
        }
    }
}

/// Canonical `p/q` form (plain `p` for integers); used verbatim in JSON.
pub fn format_rat(v: &Rat) -> String {
    v.to_string()
}

/// Ceiling of a rational, clamped to zero for negative input.
pub fn ceil_plus(v: &Rat) -> BigInt {
    if v.is_negative() {
        BigInt::zero()
    } else {
        v.ceil().to_integer()
    }
}

/// Least integer `m >= lo` with `m >= v`; `lo` is usually one.
pub fn ceil_at_least(v: &Rat, lo: i64) -> BigInt {
    let c = v.ceil().to_integer();
    let lo = BigInt::from(lo);
    if c < lo {
        lo
    } else {
        c
    }
}

pub fn rat_is_one(v: &Rat) -> bool {
    v.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3", "-3", "2/3", "-7/5", "0"] {
            let v = parse_rat(s).unwrap();
            assert_eq!(format_rat(&v), s);
        }
        assert_eq!(format_rat(&parse_rat("4/6").unwrap()), "2/3");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn ceil_plus_clamps_negatives() {
        assert_eq!(ceil_plus(&ratio(-6, 9)), int(0));
        assert_eq!(ceil_plus(&ratio(1, 3)), int(1));
        assert_eq!(ceil_plus(&rat(0)), int(0));
        assert_eq!(ceil_plus(&ratio(7, 2)), int(4));
    }
}
