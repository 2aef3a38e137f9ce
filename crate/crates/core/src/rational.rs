//! Arbitrary-precision rational scalars.
//!
//! `Rat` is a type alias for `num_rational::BigRational`, which already
//! keeps values in canonical form (positive denominator, reduced by gcd).
//! The helpers here cover construction, the `"p/q"` wire format used by
//! every JSON/CSV emitter, and conversion to `f64` at the symbolic/numeric
//! boundary.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

/// Shorthand for p/q from machine integers.
pub fn rat(p: i64, q: i64) -> Rat {
    assert!(q != 0, "zero denominator");
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn rint(p: i64) -> Rat {
    BigRational::from(BigInt::from(p))
}

/// Parses the wire format: "p/q" with q > 0 after normalization, or "p".
pub fn rat_parse(s: &str) -> Result<Rat> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::BadRational(s.to_string()))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let q = parse_int(q)?;
            if q.is_zero() {
                return Err(Error::BadRational(s.to_string()));
            }
            Ok(BigRational::new(parse_int(p)?, q))
        }
        None => Ok(BigRational::from(parse_int(s)?)),
    }
}

/// Formats as "p/q", or "p" when the denominator is 1.
pub fn rat_str(r: &Rat) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a quotient of truncated floats for out-of-range parts.
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY * sign_of(r));
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

fn sign_of(r: &Rat) -> f64 {
    if r.is_negative() {
        -1.0
    } else {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3/4", "-3/4", "0", "7", "-22/7"] {
            let r = rat_parse(s).unwrap();
            assert_eq!(rat_str(&r), s);
        }
        // Non-canonical input normalizes.
        assert_eq!(rat_str(&rat_parse("4/8").unwrap()), "1/2");
        assert_eq!(rat_str(&rat_parse("3/-6").unwrap()), "-1/2");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(rat_parse("1/0").is_err());
        assert!(rat_parse("a/b").is_err());
        assert!(rat_parse("1.5").is_err());
    }
}
