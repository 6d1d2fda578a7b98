//! Certified real intervals with rational endpoints.
//!
//! Every operation rounds outward, so the true real value always lies inside
//! the returned interval. Precision is counted in significant bits of each
//! endpoint.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rat;

/// A closed interval `[lo, hi]` known to contain some real number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: Rat,
    hi: Rat,
}

impl Interval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn exact(x: Rat) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn into_bounds(self) -> (Rat, Rat) {
        (self.lo, self.hi)
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rat) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().expect("nonempty").clone();
        let hi = products.iter().max().expect("nonempty").clone();
        Interval { lo, hi }
    }

    pub fn scale(&self, k: &Rat) -> Interval {
        self.mul(&Interval::exact(k.clone()))
    }

    /// Division by an interval that excludes zero.
    pub fn div(&self, other: &Interval) -> Interval {
        assert!(
            other.lo.is_positive() || other.hi < Rat::zero(),
            "division by an interval containing zero"
        );
        self.mul(&Interval {
            lo: other.hi.recip(),
            hi: other.lo.recip(),
        })
    }

    /// Rounds both endpoints outward to `prec` significant bits.
    pub fn round_outward(&self, prec: u32) -> Interval {
        Interval {
            lo: round_to_bits(&self.lo, prec, false),
            hi: round_to_bits(&self.hi, prec, true),
        }
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / Rat::from(2)
    }
}

/// Rounds `x` to a dyadic value with `prec` significant bits, downwards or
/// upwards.
pub fn round_to_bits(x: &Rat, prec: u32, up: bool) -> Rat {
    if x.is_zero() {
        return x.clone();
    }
    let shift = prec as i64 - 1 - x.floor_log2();
    let (n, d) = (x.numer(), x.denom());
    let (num, den) = if shift >= 0 {
        (n << shift as usize, d.clone())
    } else {
        (n.clone(), d << (-shift) as usize)
    };
    let q = if up {
        -((-num).div_floor(&den))
    } else {
        num.div_floor(&den)
    };
    if shift >= 0 {
        Rat::new(q, BigInt::one() << shift as usize).expect("nonzero")
    } else {
        Rat::from_integer(q << (-shift) as usize)
    }
}

/// Fixed-point bracket of `atanh(a/b)` for `0 <= a/b <= 1/3`, scaled by
/// `2^bits`: returns `(sum, err)` with the true value in `[sum - err, sum + err]`.
fn atanh_fixed(a: &BigInt, b: &BigInt, bits: u32) -> (BigInt, BigInt) {
    debug_assert!(!a.is_negative() && BigInt::from(3) * a <= *b);
    let mut t = (a << bits as usize).div_floor(b);
    let a2 = a * a;
    let b2 = b * b;
    let mut sum = BigInt::zero();
    let mut terms = 0u64;
    while !t.is_zero() {
        sum += &t / BigInt::from(2 * terms + 1);
        t = (&t * &a2).div_floor(&b2);
        terms += 1;
    }
    // Each truncated power is within 2 ulp of its true value (the recurrence
    // contracts by z^2 <= 1/9) and each division adds 1 ulp; the tail after
    // the first vanishing power is below 3 ulp.
    (sum, BigInt::from(3 * terms + 3))
}

fn fixed_to_interval(sum: BigInt, err: BigInt, bits: u32) -> Interval {
    let scale = BigInt::one() << bits as usize;
    Interval {
        lo: Rat::new(&sum - &err, scale.clone()).expect("nonzero"),
        hi: Rat::new(sum + err, scale).expect("nonzero"),
    }
}

/// Certified `ln 2` to `prec` significant bits.
pub fn ln2(prec: u32) -> Interval {
    let bits = prec + 64;
    let (s, e) = atanh_fixed(&BigInt::from(1), &BigInt::from(3), bits);
    fixed_to_interval(s * 2, e * 2, bits).round_outward(prec)
}

/// Certified natural logarithm of a positive rational.
pub fn ln(x: &Rat, prec: u32) -> Interval {
    assert!(x.is_positive(), "ln of non-positive value {x}");
    if *x == Rat::one() {
        return Interval::exact(Rat::zero());
    }
    // x = 2^m * y with 1 <= y < 2.
    let m = x.floor_log2();
    let y = if m >= 0 {
        x / &Rat::from_integer(BigInt::one() << m as usize)
    } else {
        x * &Rat::from_integer(BigInt::one() << (-m) as usize)
    };
    // ln y = 2 atanh((y - 1) / (y + 1)), argument in [0, 1/3).
    let z = (&y - &Rat::one()) / (&y + &Rat::one());
    let bits = prec + 64 + (64 - (m.unsigned_abs()).leading_zeros());
    let ln_y = if z.is_zero() {
        Interval::exact(Rat::zero())
    } else {
        let (s, e) = atanh_fixed(z.numer(), z.denom(), bits);
        fixed_to_interval(s * 2, e * 2, bits)
    };
    let result = if m == 0 {
        ln_y
    } else {
        let (s, e) = atanh_fixed(&BigInt::from(1), &BigInt::from(3), bits);
        let ln2 = fixed_to_interval(s * 2, e * 2, bits);
        ln2.scale(&Rat::from_integer(BigInt::from(m))).add(&ln_y)
    };
    result.round_outward(prec)
}

/// Certified `log2 x`; exact when `x` is a power of two.
pub fn log2(x: &Rat, prec: u32) -> Interval {
    if let Some(m) = x.power_of_two_exponent() {
        return Interval::exact(Rat::from_integer(BigInt::from(m)));
    }
    let inner = prec + 16;
    ln(x, inner).div(&ln2(inner)).round_outward(prec)
}

/// Certified `log2` of a positive interval.
pub fn log2_interval(x: &Interval, prec: u32) -> Interval {
    let lo = log2(x.lo(), prec);
    let hi = log2(x.hi(), prec);
    Interval {
        lo: lo.lo,
        hi: hi.hi,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dec(s: &str) -> Rat {
        Rat::parse_decimal(s).unwrap()
    }

    #[test]
    fn ln2_brackets_reference_digits() {
        // ln 2 = 0.69314718055994530941723212145817656807550013436025...
        let reference = dec("0.69314718055994530941723212145817656807550013436025");
        let tol = dec("0.00000000000000000000000000000000000000000000000001");
        for prec in [32, 64, 128, 256, 1024] {
            let i = ln2(prec);
            assert!(
                i.lo() <= &(&reference + &tol) && &(&reference - &tol) <= i.hi(),
                "prec {prec}"
            );
            let width = (i.hi() - i.lo()).to_f64();
            assert!(
                width < 2f64.powi(-(prec as i32) + 3),
                "prec {prec} width {width}"
            );
        }
    }

    #[test]
    fn ln_known_values() {
        // ln 132 = 4.88280192258637...; ln 66 = 4.18965474202642...
        let ln132 = ln(&Rat::from(132), 96);
        assert!(ln132.lo() > &dec("4.88280192258637") && ln132.hi() < &dec("4.88280192258638"));
        let ln66 = ln(&Rat::from(66), 96);
        assert!(ln66.lo() > &dec("4.18965474202642") && ln66.hi() < &dec("4.18965474202643"));
        let small = ln(&Rat::ratio(1, 3), 96);
        assert!(small.lo() > &dec("-1.09861228866812") && small.hi() < &dec("-1.09861228866810"));
        assert_eq!(ln(&Rat::one(), 64), Interval::exact(Rat::zero()));
    }

    #[test]
    fn ln_is_additive_within_bounds() {
        let a = Rat::ratio(33, 7);
        let b = Rat::ratio(5, 11);
        let lhs = ln(&(&a * &b), 128);
        let rhs = ln(&a, 128).add(&ln(&b, 128));
        assert!(lhs.lo() <= rhs.hi() && rhs.lo() <= lhs.hi());
    }

    #[test]
    fn log2_exact_for_powers() {
        assert_eq!(log2(&Rat::from(64), 64), Interval::exact(Rat::from(6)));
        assert_eq!(
            log2(&Rat::ratio(1, 4), 64),
            Interval::exact(Rat::ratio(-2, 1))
        );
        let l3 = log2(&Rat::from(3), 64);
        assert!(l3.lo() > &dec("1.5849625007211") && l3.hi() < &dec("1.5849625007212"));
    }

    #[test]
    fn rounding_is_directed() {
        let x = Rat::ratio(1, 3);
        let down = round_to_bits(&x, 10, false);
        let up = round_to_bits(&x, 10, true);
        assert!(down < x && x < up);
        assert!((&up - &down) <= Rat::inv_pow2(11));
        let big = Rat::from(1_000_003);
        assert!(round_to_bits(&big, 4, false) <= big && big <= round_to_bits(&big, 4, true));
        let neg = Rat::ratio(-7, 3);
        assert!(round_to_bits(&neg, 5, false) < neg && neg < round_to_bits(&neg, 5, true));
    }
}
