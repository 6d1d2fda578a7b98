//! Exact arithmetic: dyadic and general rationals, big-integer combinatorics,
//! certified real intervals, and comparison of size values that may be far
//! too large for floating point.

pub mod certified;
mod combinatorics;
mod dyadic;
mod rat;
mod size;

pub use certified::Interval;
pub use combinatorics::{binomial, first_primes, primorial};
pub use dyadic::{Dyadic, MAX_DYADIC_EXPONENT};
pub use rat::Rat;
pub use size::{compare_sizes, PrecisionPolicy, Rounding, SizeSource, SizeValue};

pub(crate) use rat::cmp_fractions;
