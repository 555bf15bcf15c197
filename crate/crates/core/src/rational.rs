//! Rational scalars and their canonical text form `p/q`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

/// Integer as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Canonical text form: `q > 0`, `gcd(p, q) = 1`, zero is `0/1`.
pub fn to_canonical(x: &Rational) -> String {
    // BigRational is kept reduced with a positive denominator.
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `p/q` or a bare integer `p`. Non-reduced input is accepted and
/// reduced; a zero denominator is rejected.
pub fn parse(s: &str) -> Result<Rational> {
    let err = || Error::ParseRational(s.to_string());
    let t = s.trim();
    let (p, q) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let p = BigInt::from_str(p).map_err(|_| err())?;
    let q = BigInt::from_str(q).map_err(|_| err())?;
    if q.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(p, q))
}

/// Scales a rational vector to a primitive integer vector (content one,
/// first nonzero entry positive). The zero vector is returned unchanged.
pub fn primitive_integer(v: &[Rational]) -> Vec<BigInt> {
    let mut den = BigInt::one();
    for x in v {
        den = den.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &den).to_integer()).collect();
    normalize_primitive(ints)
}

/// Divides an integer vector by its content and fixes the sign of the first
/// nonzero entry to be positive.
pub fn normalize_primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for x in &v {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v;
    }
    let negative = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    if negative {
        g = -g;
    }
    if !g.is_one() {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        assert_eq!(to_canonical(&Rational::new(4.into(), (-6).into())), "-2/3");
        assert_eq!(to_canonical(&Rational::zero()), "0/1");
        assert_eq!(to_canonical(&int(7)), "7/1");
    }

    #[test]
    fn parse_accepts_integers_and_reduces() {
        assert_eq!(parse("3").unwrap(), int(3));
        assert_eq!(parse("2/4").unwrap(), Rational::new(1.into(), 2.into()));
        assert_eq!(parse(" -0/5 ").unwrap(), Rational::zero());
        assert!(parse("1/0").is_err());
        assert!(parse("a/2").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn primitive_scaling() {
        let v = [Rational::new((-1).into(), 2.into()), int(0), Rational::new(3.into(), 4.into())];
        let p = primitive_integer(&v);
        assert_eq!(p, [BigInt::from(2), BigInt::zero(), BigInt::from(-3)]);
    }
}
