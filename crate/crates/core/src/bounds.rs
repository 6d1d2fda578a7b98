//! Size bounds for point sets in `[0, 1]^d` with dispersion at most `ε`.
//!
//! | bound | size |
//! |-------|------|
//! | lower bound (Aistleitner–Hinrichs–Rudolf) | `(4ε)^{-1} (1 - 4ε) log2 d` |
//! | Halton–Hammersley (Rote–Tichy) | `⌈2^{d-1} π_d ε^{-1}⌉` |
//! | `(t,m,s)`-nets (Larcher) | `⌈2^{7d+1} ε^{-1}⌉` |
//! | Rudolf | `⌊8d ε^{-1} log(33 ε^{-1})⌋` |
//! | Sosnovec | `⌊q^{q²+2} (1 + 4 log q) log d⌋`, `q = ⌈1/ε⌉` |
//! | sparse grid `P(k(ε), d)` | `2^{k} C(d+k-1, d-1)` |
//!
//! The bare `log` in the Rudolf and Sosnovec bounds is the natural logarithm
//! unless [`LogBase::Two`] is selected.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::certified::{ln, log2, log2_interval, Interval};
use crate::numerics::{
    binomial, compare_sizes, primorial, PrecisionPolicy, Rat, Rounding, SizeSource, SizeValue,
};
use crate::pointset::k_of_epsilon;

/// Largest `q² + 2` for which `q^{q²+2}` is expanded as an exact integer.
pub const SOSNOVEC_EXPONENT_CAP: u64 = 65_536;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum LogBase {
    #[default]
    Natural,
    Two,
}

impl LogBase {
    pub fn label(self) -> &'static str {
        match self {
            LogBase::Natural => "e",
            LogBase::Two => "2",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundKind {
    LowerAhr,
    Hammersley,
    Nets,
    Rudolf,
    Sosnovec,
    Sparse,
    SimplifiedLinear,
    SimplifiedPoly,
}

impl BoundKind {
    pub const ALL: [BoundKind; 8] = [
        BoundKind::LowerAhr,
        BoundKind::Hammersley,
        BoundKind::Nets,
        BoundKind::Rudolf,
        BoundKind::Sosnovec,
        BoundKind::Sparse,
        BoundKind::SimplifiedLinear,
        BoundKind::SimplifiedPoly,
    ];

    /// Upper bounds on the minimal admissible size from other constructions
    /// or existence proofs.
    pub const RIVALS: [BoundKind; 4] = [
        BoundKind::Hammersley,
        BoundKind::Nets,
        BoundKind::Rudolf,
        BoundKind::Sosnovec,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::LowerAhr => "lower_ahr",
            BoundKind::Hammersley => "hammersley",
            BoundKind::Nets => "nets",
            BoundKind::Rudolf => "rudolf",
            BoundKind::Sosnovec => "sosnovec",
            BoundKind::Sparse => "sparse",
            BoundKind::SimplifiedLinear => "simplified_linear",
            BoundKind::SimplifiedPoly => "simplified_poly",
        }
    }

    /// Whether the bound comes with an explicit point set.
    pub fn is_constructive(self) -> bool {
        matches!(
            self,
            BoundKind::Hammersley | BoundKind::Nets | BoundKind::Sparse
        )
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One bound at fixed `(ε, d)`; refinable to any working precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bound {
    kind: BoundKind,
    eps: Rat,
    d: u32,
    log_base: LogBase,
}

impl Bound {
    pub fn new(kind: BoundKind, eps: &Rat, d: u32) -> Result<Self> {
        if !eps.is_positive() || *eps >= Rat::one() {
            return Err(Error::domain(format!("ε = {eps} must lie in (0, 1)")));
        }
        let min_d = match kind {
            BoundKind::Sparse | BoundKind::SimplifiedLinear | BoundKind::SimplifiedPoly => 1,
            _ => 2,
        };
        if d < min_d {
            return Err(Error::domain(format!(
                "{kind} needs d >= {min_d}, got d = {d}"
            )));
        }
        if kind == BoundKind::LowerAhr && *eps > Rat::ratio(1, 4) {
            return Err(Error::domain(format!(
                "the lower bound needs ε <= 1/4, got ε = {eps}"
            )));
        }
        Ok(Bound {
            kind,
            eps: eps.clone(),
            d,
            log_base: LogBase::Natural,
        })
    }

    pub fn with_log_base(mut self, log_base: LogBase) -> Self {
        self.log_base = log_base;
        self
    }

    pub fn kind(&self) -> BoundKind {
        self.kind
    }

    fn eps_inv(&self) -> Rat {
        self.eps.recip()
    }

    fn log(&self, x: &Rat, prec: u32) -> Interval {
        match self.log_base {
            LogBase::Natural => ln(x, prec),
            LogBase::Two => log2(x, prec),
        }
    }

    fn k(&self) -> u32 {
        k_of_epsilon(&self.eps).expect("ε validated in Bound::new")
    }

    /// Rough `log2` of the value, used to skip hopeless floor refinement.
    fn magnitude_bits(&self) -> f64 {
        match self.kind {
            BoundKind::Sosnovec => {
                let q = self.eps_inv().ceil();
                let qf = q.to_string().parse::<f64>().unwrap_or(f64::INFINITY);
                (qf * qf + 2.0) * qf.log2() + 8.0
            }
            _ => 0.0,
        }
    }

    fn evaluate(&self, prec: u32) -> SizeValue {
        let d = self.d;
        match self.kind {
            BoundKind::LowerAhr => {
                let four_eps = &Rat::from(4) * &self.eps;
                let factor = (&Rat::one() - &four_eps) / four_eps;
                if factor.is_zero() {
                    return SizeValue::exact(0);
                }
                let value = log2(&Rat::from(d as u64), prec + 8)
                    .scale(&factor)
                    .round_outward(prec);
                SizeValue::certified(value, Rounding::None)
            }
            BoundKind::Hammersley => {
                let n = Rat::from(primorial(d) << (d as usize - 1)) * self.eps_inv();
                SizeValue::Exact(n.ceil())
            }
            BoundKind::Nets => {
                let n = Rat::from(BigUint::one() << (7 * d as usize + 1)) * self.eps_inv();
                SizeValue::Exact(n.ceil())
            }
            BoundKind::Rudolf => {
                let inv = self.eps_inv();
                let factor = &Rat::from(8 * d as u64) * &inv;
                let log = self.log(&(&Rat::from(33) * &inv), prec + 16);
                SizeValue::certified(log.scale(&factor).round_outward(prec), Rounding::Floor)
            }
            BoundKind::Sosnovec => self.evaluate_sosnovec(prec),
            BoundKind::Sparse => {
                let k = self.k();
                SizeValue::Exact(BigInt::from(
                    binomial((d + k - 1) as u64, (d - 1) as u64) << k as usize,
                ))
            }
            BoundKind::SimplifiedLinear => {
                // ⌈log2(1/ε)⌉ = k(ε) + 1 exactly.
                let base = Rat::from((self.k() + 1) as u64);
                SizeValue::rational(self.eps_inv() * base.pow(d - 1))
            }
            BoundKind::SimplifiedPoly => SizeValue::Exact(num_traits::pow(
                BigInt::from(2 * d as u64),
                self.k() as usize,
            )),
        }
    }

    fn evaluate_sosnovec(&self, prec: u32) -> SizeValue {
        let inner = prec + 16;
        let q = self.eps_inv().ceil();
        let q_rat = Rat::from_integer(q.clone());
        let one = Interval::exact(Rat::one());
        let factor = one
            .add(&self.log(&q_rat, inner).scale(&Rat::from(4)))
            .mul(&self.log(&Rat::from(self.d as u64), inner));
        let exponent = &q * &q + BigInt::from(2);
        if exponent <= BigInt::from(SOSNOVEC_EXPONENT_CAP) {
            let e: u32 = exponent.try_into().expect("below the cap");
            let power = Rat::from_integer(num_traits::pow(q, e as usize));
            SizeValue::certified(factor.scale(&power).round_outward(prec), Rounding::Floor)
        } else {
            let log_power = log2(&q_rat, inner).scale(&Rat::from_integer(exponent));
            let log_value = log_power
                .add(&log2_interval(&factor, inner))
                .round_outward(prec);
            let (lower, upper) = log_value.into_bounds();
            SizeValue::Log2Certified { lower, upper }
        }
    }

    /// Evaluates at the policy's start precision and, for floored bounds,
    /// refines until the integer is determined.
    ///
    /// Values too large to pin down below the precision ceiling are returned
    /// as certified brackets; they still compare against other sizes.
    pub fn resolve(&self, policy: PrecisionPolicy) -> Result<SizeValue> {
        let first = self.evaluate(policy.start_bits);
        let floored = matches!(self.kind, BoundKind::Rudolf | BoundKind::Sosnovec);
        if !floored || first.is_exact() {
            return Ok(first);
        }
        if self.magnitude_bits() + 16.0 > policy.max_bits as f64 {
            return Ok(first);
        }
        for prec in policy.steps().skip(1) {
            let v = self.evaluate(prec);
            if v.is_exact() {
                return Ok(v);
            }
        }
        Err(Error::Indeterminate {
            bits: policy.max_bits,
        })
    }
}

impl SizeSource for Bound {
    fn size_at(&self, prec: u32) -> SizeValue {
        self.evaluate(prec)
    }
}

fn resolve(kind: BoundKind, eps: &Rat, d: u32) -> Result<SizeValue> {
    Bound::new(kind, eps, d)?.resolve(PrecisionPolicy::default())
}

/// `(4ε)^{-1} (1 - 4ε) log2 d`, a lower bound on the size of any point set
/// with dispersion at most `ε`. Requires `ε <= 1/4`.
pub fn lower_bound_ahr(eps: &Rat, d: u32) -> Result<SizeValue> {
    resolve(BoundKind::LowerAhr, eps, d)
}

pub fn size_hammersley(eps: &Rat, d: u32) -> Result<SizeValue> {
    resolve(BoundKind::Hammersley, eps, d)
}

pub fn size_nets(eps: &Rat, d: u32) -> Result<SizeValue> {
    resolve(BoundKind::Nets, eps, d)
}

/// `⌊8d ε^{-1} ln(33/ε)⌋`, with the floor certified by refinement.
pub fn size_rudolf(eps: &Rat, d: u32) -> Result<SizeValue> {
    resolve(BoundKind::Rudolf, eps, d)
}

/// `⌊q^{q²+2} (1 + 4 ln q) ln d⌋`. Exact when the floor can be certified
/// below the precision ceiling, otherwise a certified bracket.
pub fn size_sosnovec(eps: &Rat, d: u32) -> Result<SizeValue> {
    resolve(BoundKind::Sosnovec, eps, d)
}

/// `|P(k(ε), d)|`.
pub fn size_sparse(eps: &Rat, d: u32) -> Result<SizeValue> {
    resolve(BoundKind::Sparse, eps, d)
}

/// The two simple majorants of `|P(k(ε), d)|`: `ε^{-1} ⌈log2 ε^{-1}⌉^{d-1}`
/// and `(2d)^{k(ε)}`.
pub fn simplified_bounds(eps: &Rat, d: u32) -> Result<(SizeValue, SizeValue)> {
    Ok((
        resolve(BoundKind::SimplifiedLinear, eps, d)?,
        resolve(BoundKind::SimplifiedPoly, eps, d)?,
    ))
}

/// Every bound at one `(ε, d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundsReport {
    pub eps: Rat,
    pub d: u32,
    pub log_base: LogBase,
    /// `None` when `ε > 1/4`, outside the lower bound's domain.
    pub lower_ahr: Option<SizeValue>,
    pub hammersley: SizeValue,
    pub nets: SizeValue,
    pub rudolf: SizeValue,
    pub sosnovec: SizeValue,
    pub sparse: SizeValue,
    pub simplified_linear: SizeValue,
    pub simplified_poly: SizeValue,
    /// The smallest known upper bound on the minimal admissible size, and
    /// which bound attains it. Not the minimal size itself, which is unknown.
    pub min_upper: (BoundKind, SizeValue),
}

impl BoundsReport {
    pub fn compute(eps: &Rat, d: u32, log_base: LogBase) -> Result<Self> {
        let policy = PrecisionPolicy::default();
        let bound = |kind| Bound::new(kind, eps, d).map(|b| b.with_log_base(log_base));
        let value = |kind| bound(kind)?.resolve(policy);
        let lower_ahr = if *eps <= Rat::ratio(1, 4) {
            Some(value(BoundKind::LowerAhr)?)
        } else {
            None
        };

        let mut min_kind = BoundKind::Sparse;
        let mut min_bound = bound(BoundKind::Sparse)?;
        for kind in BoundKind::RIVALS {
            let candidate = bound(kind)?;
            if compare_sizes(&candidate, &min_bound, policy)? == Ordering::Less {
                min_kind = kind;
                min_bound = candidate;
            }
        }
        let min_value = min_bound.resolve(policy)?;

        Ok(BoundsReport {
            eps: eps.clone(),
            d,
            log_base,
            lower_ahr,
            hammersley: value(BoundKind::Hammersley)?,
            nets: value(BoundKind::Nets)?,
            rudolf: value(BoundKind::Rudolf)?,
            sosnovec: value(BoundKind::Sosnovec)?,
            sparse: value(BoundKind::Sparse)?,
            simplified_linear: value(BoundKind::SimplifiedLinear)?,
            simplified_poly: value(BoundKind::SimplifiedPoly)?,
            min_upper: (min_kind, min_value),
        })
    }

    pub fn get(&self, kind: BoundKind) -> Option<&SizeValue> {
        Some(match kind {
            BoundKind::LowerAhr => return self.lower_ahr.as_ref(),
            BoundKind::Hammersley => &self.hammersley,
            BoundKind::Nets => &self.nets,
            BoundKind::Rudolf => &self.rudolf,
            BoundKind::Sosnovec => &self.sosnovec,
            BoundKind::Sparse => &self.sparse,
            BoundKind::SimplifiedLinear => &self.simplified_linear,
            BoundKind::SimplifiedPoly => &self.simplified_poly,
        })
    }

    pub fn csv_header() -> String {
        let mut cols = vec!["eps".to_string(), "d".to_string()];
        cols.extend(BoundKind::ALL.iter().map(|k| k.name().to_string()));
        cols.push("min_upper_bound".into());
        cols.push("min_upper_value".into());
        cols.join(",")
    }

    /// One CSV row: exact integers in decimal, exact rationals as `p/q`,
    /// certified brackets as `~2^x`.
    pub fn csv_row(&self) -> String {
        let mut cols = vec![self.eps.to_string(), self.d.to_string()];
        for kind in BoundKind::ALL {
            cols.push(
                self.get(kind)
                    .map(format_size)
                    .unwrap_or_else(|| "n/a".into()),
            );
        }
        cols.push(self.min_upper.0.name().into());
        cols.push(format_size(&self.min_upper.1));
        cols.join(",")
    }

    pub fn to_json(&self) -> String {
        let policy = PrecisionPolicy::default();
        let bounds = BoundKind::ALL
            .iter()
            .map(|&k| (k.name().to_string(), self.get(k).map(SizeRecord::from)))
            .collect::<std::collections::BTreeMap<_, _>>();
        let record = ReportRecord {
            eps: self.eps.to_string(),
            d: self.d,
            log_base: self.log_base.label(),
            start_precision_bits: policy.start_bits,
            max_precision_bits: policy.max_bits,
            bounds,
            min_upper_bound: MinRecord {
                bound: self.min_upper.0.name(),
                value: SizeRecord::from(&self.min_upper.1),
            },
        };
        serde_json::to_string_pretty(&record).expect("strings and integers serialize")
    }
}

/// Text form used by the CSV output.
pub fn format_size(v: &SizeValue) -> String {
    match v {
        SizeValue::Exact(n) => n.to_string(),
        SizeValue::Certified { lower, upper, .. } if lower == upper => lower.to_string(),
        other => format!("~2^{}", six_significant(other.approx_log2())),
    }
}

fn six_significant(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let digits = x.abs().log10().floor() as i32 + 1;
    let decimals = (6 - digits).max(0) as usize;
    format!("{x:.decimals$}")
}

#[derive(Serialize)]
struct ReportRecord {
    eps: String,
    d: u32,
    log_base: &'static str,
    start_precision_bits: u32,
    max_precision_bits: u32,
    bounds: std::collections::BTreeMap<String, Option<SizeRecord>>,
    min_upper_bound: MinRecord,
}

#[derive(Serialize)]
struct MinRecord {
    bound: &'static str,
    value: SizeRecord,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum SizeRecord {
    Exact {
        value: String,
    },
    Certified {
        lower: String,
        upper: String,
        rounding: Rounding,
        approx_log2: f64,
    },
    Log2Certified {
        log2_lower: String,
        log2_upper: String,
        rounding: Rounding,
    },
}

impl From<&SizeValue> for SizeRecord {
    fn from(v: &SizeValue) -> Self {
        match v {
            SizeValue::Exact(n) => SizeRecord::Exact {
                value: n.to_string(),
            },
            SizeValue::Certified {
                lower,
                upper,
                rounding,
            } => SizeRecord::Certified {
                lower: lower.to_string(),
                upper: upper.to_string(),
                rounding: *rounding,
                approx_log2: v.approx_log2(),
            },
            SizeValue::Log2Certified { lower, upper } => SizeRecord::Log2Certified {
                log2_lower: lower.to_string(),
                log2_upper: upper.to_string(),
                rounding: Rounding::Floor,
            },
        }
    }
}
