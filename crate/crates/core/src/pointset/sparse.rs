use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;

use super::{Coord, Point, PointSet};
use crate::error::{Error, Result};
use crate::numerics::{binomial, Dyadic, Rat, MAX_DYADIC_EXPONENT};

/// Default cap on the number of points `sparse_grid` will materialize.
pub const DEFAULT_POINT_BUDGET: u64 = 10_000_000;

/// The one-dimensional generator `M_j = {(2i - 1) / 2^{j+1} : i = 1..2^j}`,
/// ascending.
///
/// # Panics
///
/// If `j + 1` exceeds the largest supported dyadic exponent.
pub fn m_set(j: u32) -> Vec<Dyadic> {
    assert!(
        j < MAX_DYADIC_EXPONENT,
        "M_{j} is beyond the supported dyadic range"
    );
    let e = j + 1;
    (0..1u64 << j)
        .map(|i| Dyadic::normalize(2 * i + 1, e).expect("odd numerator below 2^e"))
        .collect()
}

/// A level vector `(j_1, …, j_d)` of non-negative integers.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Composition {
    pub parts: Vec<u32>,
}

impl Composition {
    /// `|j| = j_1 + … + j_d`.
    pub fn order(&self) -> u32 {
        self.parts.iter().sum()
    }
}

/// Lexicographic stream of all compositions of `k` into `d` non-negative parts.
#[derive(Clone, Debug)]
pub struct Compositions {
    next: Option<Vec<u32>>,
}

pub fn compositions(k: u32, d: usize) -> Compositions {
    let next = (d > 0).then(|| {
        let mut first = vec![0; d];
        first[d - 1] = k;
        first
    });
    Compositions { next }
}

impl Iterator for Compositions {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        let current = self.next.take()?;
        let d = current.len();
        let mut succ = current.clone();
        let mut tail = 0;
        for i in (0..d.saturating_sub(1)).rev() {
            tail += succ[i + 1];
            if tail > 0 {
                succ[i] += 1;
                succ[i + 1..].iter_mut().for_each(|x| *x = 0);
                succ[d - 1] = tail - 1;
                self.next = Some(succ);
                break;
            }
        }
        Some(Composition { parts: current })
    }
}

/// `|P(k, d)| = 2^k · C(d + k - 1, d - 1)`.
pub fn sparse_cardinality(k: u32, d: u32) -> BigUint {
    assert!(d >= 1, "dimension must be positive");
    binomial((d + k - 1) as u64, (d - 1) as u64) << k as usize
}

/// The sparse grid `P(k, d)` with the default point budget.
pub fn sparse_grid(k: u32, d: u32) -> Result<PointSet> {
    sparse_grid_with_budget(k, d, DEFAULT_POINT_BUDGET)
}

/// `P(k, d) = ⋃_{|j| = k} M_{j_1} × … × M_{j_d}`, sorted.
pub fn sparse_grid_with_budget(k: u32, d: u32, budget: u64) -> Result<PointSet> {
    if d == 0 {
        return Err(Error::domain("dimension must be positive"));
    }
    let requested = sparse_cardinality(k, d);
    if requested > BigUint::from(budget) {
        return Err(Error::PointBudget { requested, budget });
    }
    let count = requested.to_usize().expect("within budget");
    let generators: Vec<Vec<Dyadic>> = (0..=k).map(m_set).collect();
    let mut points = Vec::with_capacity(count);
    for comp in compositions(k, d as usize) {
        let factors: Vec<&[Dyadic]> = comp
            .parts
            .iter()
            .map(|&j| generators[j as usize].as_slice())
            .collect();
        push_product(&factors, &mut Vec::with_capacity(d as usize), &mut points);
    }
    debug_assert_eq!(points.len(), count);
    let set = PointSet::new(d as usize, points, format!("P({k},{d})"))?;
    // Products over distinct level vectors are disjoint: a coordinate from M_j
    // has exact exponent j + 1, so no point was generated twice.
    debug_assert_eq!(set.len(), count, "duplicate points across level vectors");
    Ok(set)
}

fn push_product(factors: &[&[Dyadic]], prefix: &mut Vec<Dyadic>, out: &mut Vec<Point>) {
    let Some((first, rest)) = factors.split_first() else {
        out.push(Point::new(
            prefix.iter().copied().map(Coord::Dyadic).collect(),
        ));
        return;
    };
    for &x in first.iter() {
        prefix.push(x);
        push_product(rest, prefix, out);
        prefix.pop();
    }
}

/// `k(ε) = ⌈log2(1/ε)⌉ - 1`: the smallest `k >= 0` with `2^{-(k+1)} <= ε`,
/// found by exact comparison against powers of two.
pub fn k_of_epsilon(eps: &Rat) -> Result<u32> {
    if !eps.is_positive() || *eps >= Rat::one() {
        return Err(Error::domain(format!("ε = {eps} must lie in (0, 1)")));
    }
    let (num, den) = (eps.numer(), eps.denom());
    // 2^{-(k+1)} <= num/den  <=>  num · 2^{k+1} >= den
    let mut k = 0u32;
    while (num << (k as usize + 1)) < *den {
        k += 1;
    }
    debug_assert!((BigInt::from(1) << k as usize) * num < *den || k == 0);
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn m_set_examples() {
        assert_eq!(m_set(0), vec![Dyadic::normalize(1, 1).unwrap()]);
        assert_eq!(
            m_set(1),
            vec![
                Dyadic::normalize(1, 2).unwrap(),
                Dyadic::normalize(3, 2).unwrap()
            ]
        );
        // Oracle: odd numerators over the full 2^4 grid.
        let oracle: Vec<Dyadic> = (0..=16u64)
            .filter(|n| n % 2 == 1)
            .map(|n| Dyadic::normalize(n, 4).unwrap())
            .collect();
        assert_eq!(m_set(3), oracle);
        for j in 0..12 {
            assert_eq!(m_set(j).len(), 1 << j);
        }
    }

    #[test]
    fn composition_examples() {
        let c: Vec<_> = compositions(0, 3).map(|c| c.parts).collect();
        assert_eq!(c, vec![vec![0, 0, 0]]);
        let c: Vec<_> = compositions(3, 2).map(|c| c.parts).collect();
        assert_eq!(c, vec![vec![0, 3], vec![1, 2], vec![2, 1], vec![3, 0]]);
        // Oracle: triple loop filter.
        let mut brute = Vec::new();
        for a in 0..=2u32 {
            for b in 0..=2u32 {
                for c in 0..=2u32 {
                    if a + b + c == 2 {
                        brute.push(vec![a, b, c]);
                    }
                }
            }
        }
        let c: Vec<_> = compositions(2, 3).map(|c| c.parts).collect();
        assert_eq!(c, brute);
        assert_eq!(compositions(5, 1).count(), 1);
        assert_eq!(compositions(5, 0).count(), 0);
    }

    #[test]
    fn composition_counts_match_binomial() {
        for k in 0..8u32 {
            for d in 1..6usize {
                let all: Vec<_> = compositions(k, d).collect();
                assert!(all.windows(2).all(|w| w[0] < w[1]));
                assert!(all.iter().all(|c| c.order() == k));
                assert_eq!(
                    BigUint::from(all.len()),
                    binomial((d as u64) + k as u64 - 1, d as u64 - 1)
                );
            }
        }
    }

    #[test]
    fn sparse_grid_examples() {
        let p0 = sparse_grid(0, 4).unwrap();
        assert_eq!(p0.len(), 1);
        assert!(p0.points()[0]
            .coords()
            .iter()
            .all(|c| c.to_string() == "1/2^1"));
        assert_eq!(sparse_grid(3, 2).unwrap().len(), 32);
        assert_eq!(sparse_grid(3, 2).unwrap().label(), "P(3,2)");

        // Oracle for P(2,3): enumerate level vectors by brute force, dedup.
        let mut brute = BTreeSet::new();
        for a in 0..=2u32 {
            for b in 0..=2u32 - a {
                let c = 2 - a - b;
                for x in m_set(a) {
                    for y in m_set(b) {
                        for z in m_set(c) {
                            brute.insert(vec![x, y, z]);
                        }
                    }
                }
            }
        }
        let p = sparse_grid(2, 3).unwrap();
        assert_eq!(p.len(), 24);
        let got: BTreeSet<Vec<Dyadic>> = p
            .points()
            .iter()
            .map(|pt| {
                pt.coords()
                    .iter()
                    .map(|c| match c {
                        Coord::Dyadic(d) => *d,
                        Coord::Rational(_) => unreachable!(),
                    })
                    .collect()
            })
            .collect();
        assert_eq!(got, brute);
    }

    #[test]
    fn cardinality_examples() {
        assert_eq!(sparse_cardinality(3, 2), BigUint::from(32u32));
        assert_eq!(sparse_cardinality(0, 7), BigUint::from(1u32));
        assert_eq!(sparse_cardinality(6, 2), BigUint::from(448u32));
        assert_eq!(sparse_grid(6, 2).unwrap().len(), 448);
    }

    #[test]
    fn budget_guard() {
        let err = sparse_grid_with_budget(3, 2, 31).unwrap_err();
        assert!(matches!(err, Error::PointBudget { budget: 31, .. }));
        assert!(sparse_grid_with_budget(3, 2, 32).is_ok());
        assert!(sparse_grid(30, 30).is_err());
    }

    #[test]
    fn sparse_grid_coordinates_are_canonical() {
        for k in 0..=5u32 {
            for d in 1..=3u32 {
                for p in sparse_grid(k, d).unwrap().points() {
                    for c in p.coords() {
                        let Coord::Dyadic(x) = c else {
                            panic!("non-dyadic coordinate")
                        };
                        assert!(x.numerator() % 2 == 1);
                        assert!((1..=k + 1).contains(&x.exponent()));
                    }
                }
            }
        }
    }

    #[test]
    fn sparse_grid_symmetries() {
        for (k, d) in [(3, 2), (2, 3), (3, 3), (2, 4)] {
            let p = sparse_grid(k, d).unwrap();
            let reflected = PointSet::new(
                d as usize,
                p.points().iter().map(Point::reflect).collect(),
                "r",
            )
            .unwrap();
            assert_eq!(reflected.points(), p.points());
            let rotated = PointSet::new(
                d as usize,
                p.points()
                    .iter()
                    .map(|pt| {
                        let mut c = pt.coords().to_vec();
                        c.rotate_left(1);
                        Point::new(c)
                    })
                    .collect(),
                "r",
            )
            .unwrap();
            assert_eq!(rotated.points(), p.points());
            let swapped = PointSet::new(
                d as usize,
                p.points()
                    .iter()
                    .map(|pt| {
                        let mut c = pt.coords().to_vec();
                        c.swap(0, 1);
                        Point::new(c)
                    })
                    .collect(),
                "s",
            )
            .unwrap();
            assert_eq!(swapped.points(), p.points());
        }
    }

    #[test]
    fn k_of_epsilon_examples() {
        assert_eq!(k_of_epsilon(&Rat::ratio(1, 16)).unwrap(), 3);
        assert_eq!(k_of_epsilon(&Rat::ratio(1, 2)).unwrap(), 0);
        assert_eq!(k_of_epsilon(&Rat::ratio(3, 10)).unwrap(), 1);
        assert_eq!(k_of_epsilon(&Rat::ratio(1, 100)).unwrap(), 6);
        assert_eq!(k_of_epsilon(&Rat::ratio(9, 10)).unwrap(), 0);
        assert!(k_of_epsilon(&Rat::one()).is_err());
        assert!(k_of_epsilon(&Rat::zero()).is_err());
        assert!(k_of_epsilon(&Rat::ratio(-1, 4)).is_err());
    }

    #[test]
    fn k_of_epsilon_is_minimal() {
        for den in 2..300i64 {
            for num in 1..den.min(12) {
                let eps = Rat::ratio(num, den);
                let k = k_of_epsilon(&eps).unwrap();
                assert!(Rat::inv_pow2(k + 1) <= eps, "eps {eps}");
                if k >= 1 {
                    assert!(Rat::inv_pow2(k) > eps, "eps {eps}");
                }
            }
        }
    }
}
