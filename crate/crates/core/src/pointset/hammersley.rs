use num_bigint::BigInt;

use super::{Coord, Point, PointSet};
use crate::error::{Error, Result};
use crate::numerics::{first_primes, Rat};

/// Van der Corput radical inverse of `i` in base `b`, exactly.
pub fn radical_inverse(mut i: u64, b: u64) -> Rat {
    assert!(b >= 2, "radical inverse base must be at least 2");
    let mut numer = BigInt::from(0);
    let mut denom = BigInt::from(1);
    while i > 0 {
        numer = numer * b + (i % b);
        denom *= b;
        i /= b;
    }
    Rat::new(numer, denom).expect("positive denominator")
}

/// Smallest `t` with `b^t >= n`.
fn ceil_log(n: u64, b: u64) -> u32 {
    let mut t = 0;
    let mut p = 1u128;
    while p < n as u128 {
        p *= b as u128;
        t += 1;
    }
    t
}

/// The `n`-point Hammersley set in dimension `d`.
///
/// Coordinate 1 of point `i` is the cell midpoint `(2i + 1) / 2n`; coordinate
/// `ℓ + 1` is the radical inverse of `i` in the `ℓ`-th prime base. The single
/// zero radical inverse (at `i = 0`) is replaced by `1 / (2 b^{t+1})` with
/// `b^t >= n`, which lies below every other value in that coordinate and keeps
/// the set inside the open cube.
pub fn hammersley(n: u64, d: u32) -> Result<PointSet> {
    if n == 0 || d == 0 {
        return Err(Error::domain("Hammersley set needs n >= 1 and d >= 1"));
    }
    let bases = first_primes(d as usize - 1);
    let replacements: Vec<Rat> = bases
        .iter()
        .map(|&b| {
            let t = ceil_log(n, b);
            Rat::new(
                1,
                BigInt::from(2) * num_traits::pow(BigInt::from(b), t as usize + 1),
            )
            .expect("nonzero")
        })
        .collect();
    let points = (0..n)
        .map(|i| {
            let first = Rat::new(2 * i + 1, 2 * n).expect("nonzero");
            let rest = bases.iter().zip(&replacements).map(|(&b, zero)| {
                let r = radical_inverse(i, b);
                if r.is_zero() {
                    zero.clone()
                } else {
                    r
                }
            });
            std::iter::once(first)
                .chain(rest)
                .map(Coord::Rational)
                .collect::<Point>()
        })
        .collect();
    let set = PointSet::new(d as usize, points, format!("Hammersley({n},{d})"))?;
    debug_assert_eq!(set.len() as u64, n);
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coords(set: &PointSet, axis: usize) -> Vec<Rat> {
        set.points()
            .iter()
            .map(|p| p.coords()[axis].to_rat())
            .collect()
    }

    #[test]
    fn single_point() {
        let s = hammersley(1, 1).unwrap();
        assert_eq!(coords(&s, 0), vec![Rat::ratio(1, 2)]);
    }

    #[test]
    fn base_two_is_bit_reversal() {
        // Bit reversal of 0..3 over two bits: 0, 2, 1, 3 -> 0, 1/2, 1/4, 3/4.
        let expected = [0, 2, 1, 3].map(|v| Rat::ratio(v, 4));
        for (i, e) in expected.iter().enumerate() {
            assert_eq!(radical_inverse(i as u64, 2), *e);
        }
        let s = hammersley(4, 2).unwrap();
        // ceil(log2 4) = 2, so the zero is replaced by 1/(2·2^3) = 1/16.
        assert_eq!(
            coords(&s, 1),
            vec![
                Rat::ratio(1, 16),
                Rat::ratio(1, 2),
                Rat::ratio(1, 4),
                Rat::ratio(3, 4)
            ]
        );
        assert_eq!(
            coords(&s, 0),
            [1, 3, 5, 7].map(|v| Rat::ratio(v, 8)).to_vec()
        );
    }

    #[test]
    fn two_points_three_dims() {
        let s = hammersley(2, 3).unwrap();
        // i = 0: zeros replaced by 1/(2·2^2) and 1/(2·3^2); i = 1: 1/2 and 1/3.
        assert_eq!(coords(&s, 1), vec![Rat::ratio(1, 8), Rat::ratio(1, 2)]);
        assert_eq!(coords(&s, 2), vec![Rat::ratio(1, 18), Rat::ratio(1, 3)]);
        assert_eq!(radical_inverse(5, 3), Rat::ratio(7, 9));
    }

    #[test]
    fn distinct_interior_points() {
        for n in [1, 2, 3, 7, 16, 50] {
            for d in 1..=5 {
                let s = hammersley(n, d).unwrap();
                assert_eq!(s.len() as u64, n);
                assert_eq!(s.dim(), d as usize);
            }
        }
        assert!(hammersley(0, 2).is_err());
        assert!(hammersley(3, 0).is_err());
    }
}
