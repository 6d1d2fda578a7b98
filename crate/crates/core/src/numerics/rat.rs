//! Exact rationals with a stable `p/q` text form.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A rational number in canonical reduced form with a positive denominator.
///
/// Renders as `p/q` (always with a denominator, so `1` is `1/1`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::domain("rational with zero denominator"));
        }
        Ok(Rat(BigRational::new(numer.into(), denom)))
    }

    /// Builds `numer/denom`, panicking on a zero denominator.
    pub fn ratio(numer: i64, denom: i64) -> Self {
        Rat::new(numer, denom).expect("nonzero denominator")
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rat(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    /// `1 / 2^exp`.
    pub fn inv_pow2(exp: u32) -> Self {
        Rat(BigRational::new(
            BigInt::one(),
            BigInt::one() << exp as usize,
        ))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn into_big(self) -> BigRational {
        self.0
    }

    pub fn from_big(r: BigRational) -> Self {
        Rat(r)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn recip(&self) -> Self {
        Rat(self.0.recip())
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    pub fn floor(&self) -> BigInt {
        self.0.numer().div_floor(self.0.denom())
    }

    pub fn ceil(&self) -> BigInt {
        -((-self.0.numer()).div_floor(self.0.denom()))
    }

    pub fn pow(&self, exp: u32) -> Self {
        Rat(num_traits::pow(self.0.clone(), exp as usize))
    }

    /// Is this exactly `2^m` for some integer `m`? Returns `m`.
    pub fn power_of_two_exponent(&self) -> Option<i64> {
        if !self.is_positive() {
            return None;
        }
        let n = self.numer().magnitude();
        let d = self.denom().magnitude();
        let single_bit = |x: &BigUint| x.count_ones() == 1;
        if d.is_one() && single_bit(n) {
            Some(n.bits() as i64 - 1)
        } else if n.is_one() && single_bit(d) {
            Some(-(d.bits() as i64 - 1))
        } else {
            None
        }
    }

    /// `floor(log2 |self|)` for nonzero values.
    pub fn floor_log2(&self) -> i64 {
        debug_assert!(!self.is_zero());
        let n = self.numer().magnitude();
        let d = self.denom().magnitude();
        let mut e = n.bits() as i64 - d.bits() as i64;
        // 2^e <= |n|/d < 2^(e+1) after at most one correction.
        let (a, b) = if e >= 0 {
            (n.clone(), d << e as usize)
        } else {
            (n << (-e) as usize, d.clone())
        };
        if a < b {
            e -= 1;
        }
        e
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Parses a decimal literal such as `0.25` or `3` into its exact value.
    /// Exponent notation is rejected.
    pub fn parse_decimal(s: &str) -> Result<Self> {
        let s = s.trim();
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        let valid = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
        if (int_part.is_empty() && frac_part.is_empty()) || !valid(int_part) || !valid(frac_part) {
            return Err(Error::parse(format!("not a plain decimal literal: {s:?}")));
        }
        let digits = format!("{int_part}{frac_part}");
        let mut numer: BigInt = digits
            .parse::<BigInt>()
            .map_err(|e| Error::parse(format!("{s:?}: {e}")))?;
        if neg {
            numer = -numer;
        }
        let denom = num_traits::pow(BigInt::from(10u32), frac_part.len());
        Rat::new(numer, denom)
    }

    /// Parses either `p/q` or a decimal literal.
    pub fn parse_flexible(s: &str) -> Result<Self> {
        if s.contains('/') {
            s.parse()
        } else {
            Rat::parse_decimal(s)
        }
    }

    /// Finite decimal expansion, if the reduced denominator has no prime
    /// factors other than 2 and 5.
    pub fn to_decimal_string(&self) -> Option<String> {
        let mut d = self.denom().magnitude().clone();
        let (two, five) = (BigUint::from(2u32), BigUint::from(5u32));
        let mut twos = 0usize;
        let mut fives = 0usize;
        while (&d % &two).is_zero() {
            d /= &two;
            twos += 1;
        }
        while (&d % &five).is_zero() {
            d /= &five;
            fives += 1;
        }
        if !d.is_one() {
            return None;
        }
        let places = twos.max(fives);
        let scale = num_traits::pow(BigInt::from(10u32), places);
        let scaled = self.numer() * &scale / self.denom();
        let neg = scaled.is_negative();
        let digits = scaled.magnitude().to_string();
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        if places == 0 {
            out.push_str(&digits);
        } else {
            let padded = format!("{digits:0>width$}", width = places + 1);
            let (i, f) = padded.split_at(padded.len() - places);
            out.push_str(i);
            out.push('.');
            out.push_str(f);
        }
        Some(out)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let n: BigInt = n
            .parse()
            .map_err(|_| Error::parse(format!("bad rational numerator in {s:?}")))?;
        let d: BigInt = d
            .parse()
            .map_err(|_| Error::parse(format!("bad rational denominator in {s:?}")))?;
        if d.sign() != Sign::Plus {
            return Err(Error::parse(format!(
                "denominator must be positive in {s:?}"
            )));
        }
        Rat::new(n, d)
    }
}

impl From<u64> for Rat {
    fn from(n: u64) -> Self {
        Rat::from_integer(n)
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Self {
        Rat::from_integer(n)
    }
}

impl From<BigUint> for Rat {
    fn from(n: BigUint) -> Self {
        Rat::from_integer(BigInt::from(n))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl std::iter::Product for Rat {
    fn product<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::one(), |a, b| a * b)
    }
}

/// Compares `a/b` against `c/d` for positive denominators without allocating a
/// rational.
pub(crate) fn cmp_fractions(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> Ordering {
    (a * d).cmp(&(c * b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_and_parses() {
        let r = Rat::ratio(6, 8);
        assert_eq!(r.to_string(), "3/4");
        assert_eq!("3/4".parse::<Rat>().unwrap(), r);
        assert_eq!(Rat::one().to_string(), "1/1");
        assert_eq!("-2/4".parse::<Rat>().unwrap().to_string(), "-1/2");
        assert!("1/0".parse::<Rat>().is_err());
        assert!("1/-2".parse::<Rat>().is_err());
        assert!("x/2".parse::<Rat>().is_err());
    }

    #[test]
    fn decimals_are_exact() {
        assert_eq!(Rat::parse_decimal("0.25").unwrap(), Rat::ratio(1, 4));
        assert_eq!(Rat::parse_decimal("0.1").unwrap(), Rat::ratio(1, 10));
        assert_eq!(Rat::parse_decimal(".5").unwrap(), Rat::ratio(1, 2));
        assert_eq!(Rat::parse_decimal("3").unwrap(), Rat::from(3));
        assert!(Rat::parse_decimal("1e-2").is_err());
        assert!(Rat::parse_decimal("0.2.5").is_err());
        assert!(Rat::parse_decimal(".").is_err());
    }

    #[test]
    fn decimal_expansion() {
        assert_eq!(Rat::ratio(3, 16).to_decimal_string().unwrap(), "0.1875");
        assert_eq!(Rat::ratio(1, 5).to_decimal_string().unwrap(), "0.2");
        assert_eq!(Rat::one().to_decimal_string().unwrap(), "1");
        assert_eq!(Rat::ratio(-1, 2).to_decimal_string().unwrap(), "-0.5");
        assert!(Rat::ratio(1, 3).to_decimal_string().is_none());
    }

    #[test]
    fn floor_ceil_and_logs() {
        assert_eq!(Rat::ratio(7, 2).floor(), BigInt::from(3));
        assert_eq!(Rat::ratio(7, 2).ceil(), BigInt::from(4));
        assert_eq!(Rat::ratio(-7, 2).floor(), BigInt::from(-4));
        assert_eq!(Rat::ratio(-7, 2).ceil(), BigInt::from(-3));
        assert_eq!(Rat::from(4).ceil(), BigInt::from(4));
        assert_eq!(Rat::ratio(1, 8).power_of_two_exponent(), Some(-3));
        assert_eq!(Rat::from(64).power_of_two_exponent(), Some(6));
        assert_eq!(Rat::ratio(3, 8).power_of_two_exponent(), None);
        assert_eq!(Rat::from(1).floor_log2(), 0);
        assert_eq!(Rat::ratio(3, 8).floor_log2(), -2);
        assert_eq!(Rat::ratio(1, 8).floor_log2(), -3);
        assert_eq!(Rat::from(100).floor_log2(), 6);
    }
}
