//! Exact or certified values of point-set size bounds, and their comparison.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use super::certified::{log2, Interval};
use super::Rat;
use crate::error::{Error, Result};

/// How the real value bracketed by a certified interval becomes the reported
/// size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Rounding {
    /// The size is the real value itself.
    None,
    Floor,
    Ceil,
}

/// The value of a size bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SizeValue {
    Exact(BigInt),
    /// The bound's real value lies in `[lower, upper]`; the size is that real
    /// value after `rounding`.
    Certified {
        lower: Rat,
        upper: Rat,
        rounding: Rounding,
    },
    /// For astronomically large values: `log2` of the real value lies in
    /// `[lower, upper]`, and the size is its floor.
    Log2Certified {
        lower: Rat,
        upper: Rat,
    },
}

impl SizeValue {
    pub fn exact(n: impl Into<BigInt>) -> Self {
        SizeValue::Exact(n.into())
    }

    /// An exact rational; collapses to `Exact` when it is an integer.
    pub fn rational(r: Rat) -> Self {
        if r.is_integer() {
            SizeValue::Exact(r.floor())
        } else {
            SizeValue::Certified {
                lower: r.clone(),
                upper: r,
                rounding: Rounding::None,
            }
        }
    }

    /// Wraps a certified interval, collapsing to `Exact` once the rounded
    /// value is determined.
    pub fn certified(interval: Interval, rounding: Rounding) -> Self {
        let (lower, upper) = interval.into_bounds();
        let collapsed = match rounding {
            Rounding::Floor if lower.floor() == upper.floor() => Some(lower.floor()),
            Rounding::Ceil if lower.ceil() == upper.ceil() => Some(lower.ceil()),
            Rounding::None if lower == upper && lower.is_integer() => Some(lower.floor()),
            _ => None,
        };
        match collapsed {
            Some(n) => SizeValue::Exact(n),
            None if lower == upper => SizeValue::Certified {
                lower,
                upper,
                rounding: Rounding::None,
            },
            None => SizeValue::Certified {
                lower,
                upper,
                rounding,
            },
        }
    }

    pub fn as_exact(&self) -> Option<&BigInt> {
        match self {
            SizeValue::Exact(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, SizeValue::Exact(_))
    }

    /// An exactly known value, integral or not.
    pub fn exact_rational(&self) -> Option<Rat> {
        match self {
            SizeValue::Exact(n) => Some(Rat::from_integer(n.clone())),
            SizeValue::Certified { lower, upper, .. } if lower == upper => Some(lower.clone()),
            _ => None,
        }
    }

    /// Approximate `log2` of the value, for display only.
    pub fn approx_log2(&self) -> f64 {
        match self {
            SizeValue::Exact(n) => approx_log2_rat(&Rat::from_integer(n.clone())),
            SizeValue::Certified { lower, upper, .. } => {
                approx_log2_rat(&((lower + upper) / Rat::from(2)))
            }
            SizeValue::Log2Certified { lower, upper } => ((lower + upper) / Rat::from(2)).to_f64(),
        }
    }

    /// Range of possible reported sizes, if not in the log domain.
    fn linear_range(&self) -> Option<(Rat, Rat)> {
        match self {
            SizeValue::Exact(n) => {
                let r = Rat::from_integer(n.clone());
                Some((r.clone(), r))
            }
            SizeValue::Certified {
                lower,
                upper,
                rounding,
            } => Some(match rounding {
                Rounding::None => (lower.clone(), upper.clone()),
                Rounding::Floor => (lower.floor().into(), upper.floor().into()),
                Rounding::Ceil => (lower.ceil().into(), upper.ceil().into()),
            }),
            SizeValue::Log2Certified { .. } => None,
        }
    }

    /// Bracket of `log2` of the underlying real value, for positive values.
    fn log2_range(&self, prec: u32) -> Option<(Rat, Rat)> {
        match self {
            SizeValue::Log2Certified { lower, upper } => Some((lower.clone(), upper.clone())),
            other => {
                let (lo, hi) = other.linear_range()?;
                if !lo.is_positive() {
                    return None;
                }
                Some((log2(&lo, prec).lo().clone(), log2(&hi, prec).hi().clone()))
            }
        }
    }

    /// Compares the reported sizes if the brackets decide it; `None` when
    /// more precision is needed.
    pub fn try_cmp(&self, other: &SizeValue, prec: u32) -> Option<Ordering> {
        if let (Some(a), Some(b)) = (self.linear_range(), other.linear_range()) {
            return cmp_ranges(&a, &b);
        }
        // A non-positive linear value is below any log-domain value, which is
        // at least 1 by construction.
        let nonpositive = |v: &SizeValue| {
            v.linear_range()
                .map(|(_, hi)| !hi.is_positive())
                .unwrap_or(false)
        };
        if nonpositive(self) {
            return Some(Ordering::Less);
        }
        if nonpositive(other) {
            return Some(Ordering::Greater);
        }
        let a = self.log2_range(prec)?;
        let b = other.log2_range(prec)?;
        if floors_separated(&a, &b) {
            Some(Ordering::Less)
        } else if floors_separated(&b, &a) {
            Some(Ordering::Greater)
        } else {
            None
        }
    }
}

fn cmp_ranges(a: &(Rat, Rat), b: &(Rat, Rat)) -> Option<Ordering> {
    if a.1 < b.0 {
        Some(Ordering::Less)
    } else if b.1 < a.0 {
        Some(Ordering::Greater)
    } else if a.0 == a.1 && b.0 == b.1 && a.0 == b.0 {
        Some(Ordering::Equal)
    } else {
        None
    }
}

/// With `log2 X ∈ a` and `log2 Y ∈ b`, decides `floor(X) < floor(Y)` by
/// requiring `Y - X >= 1`. Since `2^g - 1 >= g ln 2`, a log gap `g` with
/// `2^floor(a.hi) * g >= 2` is sufficient.
fn floors_separated(a: &(Rat, Rat), b: &(Rat, Rat)) -> bool {
    if a.1 >= b.0 {
        return false;
    }
    let gap = &b.0 - &a.1;
    let e = a.1.floor();
    if e.is_negative() {
        return false;
    }
    let Some(e) = e.to_usize() else { return true };
    let scale = Rat::from_integer(BigInt::from(1) << e);
    scale * gap >= Rat::from(2)
}

fn approx_log2_rat(r: &Rat) -> f64 {
    if !r.is_positive() {
        return f64::NEG_INFINITY;
    }
    let e = r.floor_log2();
    // Mantissa in [1, 2) from the top bits.
    let shifted = if e >= 0 {
        r / &Rat::from_integer(BigInt::from(1) << e as usize)
    } else {
        r * &Rat::from_integer(BigInt::from(1) << (-e) as usize)
    };
    e as f64 + shifted.to_f64().log2()
}

/// Anything that can produce a [`SizeValue`] at a requested working precision.
pub trait SizeSource {
    fn size_at(&self, prec: u32) -> SizeValue;
}

impl SizeSource for SizeValue {
    fn size_at(&self, _prec: u32) -> SizeValue {
        self.clone()
    }
}

/// Working-precision schedule: start, then double up to the ceiling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub start_bits: u32,
    pub max_bits: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            start_bits: 128,
            max_bits: 8192,
        }
    }
}

impl PrecisionPolicy {
    pub fn steps(self) -> impl Iterator<Item = u32> {
        std::iter::successors(Some(self.start_bits.max(1)), move |&p| {
            (p < self.max_bits).then(|| (p * 2).min(self.max_bits))
        })
    }
}

/// Compares two sizes, refining both sources until the order is certain.
pub fn compare_sizes(
    a: &dyn SizeSource,
    b: &dyn SizeSource,
    policy: PrecisionPolicy,
) -> Result<Ordering> {
    for prec in policy.steps() {
        let (va, vb) = (a.size_at(prec), b.size_at(prec));
        if let Some(ord) = va.try_cmp(&vb, prec) {
            return Ok(ord);
        }
    }
    Err(Error::Indeterminate {
        bits: policy.max_bits,
    })
}
