//! Arbitrary-precision rationals and the `"num/den"` string encoding used in
//! every JSON surface.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// 2-adic valuation of a nonzero rational.
pub fn v2(q: &Rational) -> Result<i64> {
    if q.is_zero() {
        return Err(Error::Domain("2-adic valuation of zero".into()));
    }
    let n = q.numer().trailing_zeros().unwrap_or(0) as i64;
    let d = q.denom().trailing_zeros().unwrap_or(0) as i64;
    Ok(n - d)
}

/// p-adic valuation of a nonzero rational.
pub fn valuation(q: &Rational, p: u64) -> Result<i64> {
    if q.is_zero() {
        return Err(Error::Domain("valuation of zero".into()));
    }
    let p = BigInt::from(p);
    let count = |x: &BigInt| {
        let mut x = x.clone();
        let mut k = 0i64;
        while (&x % &p).is_zero() {
            x /= &p;
            k += 1;
        }
        k
    };
    Ok(count(q.numer()) - count(q.denom()))
}

/// `base^exp` for any integer exponent; `base` must be nonzero when `exp < 0`.
pub fn powi(base: &Rational, exp: i64) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp.unsigned_abs() {
        acc *= base;
    }
    if exp < 0 {
        acc.recip()
    } else {
        acc
    }
}

pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Accepts `"n/d"` or a bare integer `"n"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidInput(format!("not a rational: {s:?}"));
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

pub fn is_signed_power_of_two(q: &Rational) -> bool {
    let odd = |x: &BigInt| {
        let tz = x.trailing_zeros().unwrap_or(0);
        x.abs() >> tz
    };
    !q.is_zero() && odd(q.numer()).is_one() && odd(q.denom()).is_one()
}

/// serde adapter: `Rational` <-> `"num/den"`.
pub mod serde_str {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_positive_denominator() {
        let q = rat(6, -4);
        assert_eq!(format_rational(&q), "-3/2");
        assert_eq!(parse_rational("-3/2").unwrap(), q);
        assert_eq!(parse_rational(" 7 ").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn valuations() {
        assert_eq!(v2(&rat(1, 8)).unwrap(), -3);
        assert_eq!(v2(&rat(6, 5)).unwrap(), 1);
        assert_eq!(valuation(&rat(25, 3), 5).unwrap(), 2);
        assert_eq!(valuation(&rat(2, 75), 5).unwrap(), -2);
        assert!(v2(&int(0)).is_err());
    }

    #[test]
    fn powers() {
        assert_eq!(powi(&int(3), -2), rat(1, 9));
        assert_eq!(powi(&rat(2, 3), 3), rat(8, 27));
        assert_eq!(powi(&int(5), 0), int(1));
        assert!(is_signed_power_of_two(&rat(-1, 8)));
        assert!(!is_signed_power_of_two(&rat(3, 8)));
    }
}
