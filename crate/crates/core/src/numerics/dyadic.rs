//! Dyadic rationals `a/2^b` in the closed unit interval.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use super::Rat;
use crate::error::{Error, Result};

/// Largest exponent a [`Dyadic`] may carry.
pub const MAX_DYADIC_EXPONENT: u32 = 63;

/// An exact dyadic rational `numerator / 2^exponent` in `[0, 1]`.
///
/// Canonical form: the numerator is odd, except for the two boundary values
/// `0 = 0/2^0` and `1 = 1/2^0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dyadic {
    numerator: u64,
    exponent: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic {
        numerator: 0,
        exponent: 0,
    };
    pub const ONE: Dyadic = Dyadic {
        numerator: 1,
        exponent: 0,
    };

    /// Canonicalizes `numerator / 2^exponent`.
    pub fn normalize(numerator: u64, exponent: u32) -> Result<Self> {
        if numerator == 0 {
            return Ok(Dyadic::ZERO);
        }
        let shift = numerator.trailing_zeros().min(exponent);
        let (n, e) = (numerator >> shift, exponent - shift);
        if e > MAX_DYADIC_EXPONENT {
            return Err(Error::domain(format!(
                "dyadic exponent {e} exceeds the supported maximum {MAX_DYADIC_EXPONENT}"
            )));
        }
        if e == 0 && n > 1 || e > 0 && n >= 1u64 << e {
            return Err(Error::domain(format!(
                "{numerator}/2^{exponent} lies outside [0, 1]"
            )));
        }
        Ok(Dyadic {
            numerator: n,
            exponent: e,
        })
    }

    pub fn numerator(self) -> u64 {
        self.numerator
    }

    pub fn exponent(self) -> u32 {
        self.exponent
    }

    /// Strictly between 0 and 1.
    pub fn is_interior(self) -> bool {
        self.exponent > 0
    }

    /// `1 - self`, still canonical.
    pub fn reflect(self) -> Self {
        if self.exponent == 0 {
            return Dyadic {
                numerator: 1 - self.numerator,
                exponent: 0,
            };
        }
        Dyadic {
            numerator: (1u64 << self.exponent) - self.numerator,
            exponent: self.exponent,
        }
    }

    pub fn to_rat(self) -> Rat {
        Rat::new(
            BigInt::from(self.numerator),
            BigInt::from(1u128 << self.exponent),
        )
        .expect("power of two is nonzero")
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exponent.max(other.exponent);
        let a = (self.numerator as u128) << (e - self.exponent);
        let b = (other.numerator as u128) << (e - other.exponent);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.numerator, self.exponent)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    /// Parses the canonical `a/2^b` form. Non-canonical input such as `2/2^2`
    /// is rejected so that parsing and rendering are inverse to each other.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (n, e) = s
            .split_once("/2^")
            .ok_or_else(|| Error::parse(format!("expected a/2^b, got {s:?}")))?;
        let n: u64 = n
            .parse()
            .map_err(|_| Error::parse(format!("bad dyadic numerator in {s:?}")))?;
        let e: u32 = e
            .parse()
            .map_err(|_| Error::parse(format!("bad dyadic exponent in {s:?}")))?;
        let d = Dyadic::normalize(n, e)?;
        if d.numerator != n || d.exponent != e {
            return Err(Error::parse(format!(
                "{s:?} is not in canonical form ({d})"
            )));
        }
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn normalize_examples() {
        assert_eq!(Dyadic::normalize(4, 3).unwrap().to_string(), "1/2^1");
        assert_eq!(Dyadic::normalize(3, 2).unwrap().to_string(), "3/2^2");
        assert_eq!(Dyadic::normalize(0, 5).unwrap().to_string(), "0/2^0");
        assert_eq!(Dyadic::normalize(8, 3).unwrap(), Dyadic::ONE);
        assert!(Dyadic::normalize(9, 3).is_err());
        assert!(Dyadic::normalize(2, 0).is_err());
        assert!(Dyadic::normalize(1, 64).is_err());
    }

    #[test]
    fn parse_requires_canonical_form() {
        assert_eq!(
            "3/2^4".parse::<Dyadic>().unwrap(),
            Dyadic::normalize(3, 4).unwrap()
        );
        assert_eq!("0/2^0".parse::<Dyadic>().unwrap(), Dyadic::ZERO);
        assert!("2/2^2".parse::<Dyadic>().is_err());
        assert!("3/4".parse::<Dyadic>().is_err());
        assert!("5/2^2".parse::<Dyadic>().is_err());
    }

    #[test]
    fn reflect_boundaries() {
        assert_eq!(Dyadic::ZERO.reflect(), Dyadic::ONE);
        assert_eq!(Dyadic::ONE.reflect(), Dyadic::ZERO);
        assert_eq!(
            Dyadic::normalize(3, 4).unwrap().reflect(),
            Dyadic::normalize(13, 4).unwrap()
        );
    }

    fn in_range() -> impl Strategy<Value = (u64, u32)> {
        (0u32..=20).prop_flat_map(|e| (0u64..=(1u64 << e), Just(e)))
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent_and_value_preserving((n, e) in in_range()) {
            let d = Dyadic::normalize(n, e).unwrap();
            let again = Dyadic::normalize(d.numerator(), d.exponent()).unwrap();
            prop_assert_eq!(d, again);
            prop_assert_eq!(d.to_rat(), Rat::ratio(n as i64, 1i64 << e));
            prop_assert_eq!(d.to_string().parse::<Dyadic>().unwrap(), d);
        }

        #[test]
        fn order_matches_cross_multiplication((a, e) in in_range(), (b, f) in in_range()) {
            let x = Dyadic::normalize(a, e).unwrap();
            let y = Dyadic::normalize(b, f).unwrap();
            let cross = ((a as u128) << f).cmp(&((b as u128) << e));
            prop_assert_eq!(x.cmp(&y), cross);
            prop_assert_eq!(x.to_rat().cmp(&y.to_rat()), cross);
        }
    }
}
