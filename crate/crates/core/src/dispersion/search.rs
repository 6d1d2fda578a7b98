//! Branch-and-bound search for the largest empty box.
//!
//! Coordinates on each axis are replaced by their rank in the candidate grid
//! and by an integer numerator over a common per-axis denominator, so the inner
//! loops compare machine integers (or big integers when the product of the
//! denominators does not fit in 120 bits). Widths are numerators, and the
//! volume of a box is the product of its widths over the fixed product of the
//! denominators, so integer products compare like volumes.
//!
//! Axes are fixed one at a time. With the intervals of the first `t` axes
//! fixed, only the points strictly inside all of them (the slab) can still
//! block the box. Once a single axis is left, the best interval on it is the
//! widest gap between consecutive slab coordinates, found by a scan. A partial
//! assignment is cut when even the full unit extent on every unfixed axis
//! cannot reach the best volume found so far. Boxes of equal volume are never
//! cut, so the lexicographically smallest optimal box is always reached no
//! matter how the work is split.

use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use super::{candidate_grid, BoxD, DispersionResult, SearchConfig};
use crate::error::{Error, Result};
use crate::numerics::Rat;
use crate::pointset::PointSet;

/// Integer type for scaled widths and volumes.
trait Measure: Clone + Ord + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn from_big(x: &BigUint) -> Self;
    fn to_big(&self) -> BigUint;
}

impl Measure for u128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn from_big(x: &BigUint) -> Self {
        x.to_u128().expect("checked to fit before choosing u128")
    }
    fn to_big(&self) -> BigUint {
        BigUint::from(*self)
    }
}

impl Measure for BigUint {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn from_big(x: &BigUint) -> Self {
        x.clone()
    }
    fn to_big(&self) -> BigUint {
        self.clone()
    }
}

/// Rank-space view of a point set.
struct Problem<T> {
    dim: usize,
    /// Axes in the order they are fixed.
    order: Vec<usize>,
    grids: Vec<Vec<Rat>>,
    /// Candidate values scaled by the axis denominator.
    nums: Vec<Vec<T>>,
    denominators: Vec<BigUint>,
    /// `ranks[axis][point]`: index of the point's coordinate in `grids[axis]`.
    ranks: Vec<Vec<u32>>,
    /// `rest_full[t]`: product of the full extents of `order[t..]`.
    rest_full: Vec<T>,
    points: usize,
}

struct Prepared {
    grids: Vec<Vec<Rat>>,
    numerators: Vec<Vec<BigUint>>,
    denominators: Vec<BigUint>,
    ranks: Vec<Vec<u32>>,
    points: usize,
}

fn prepare(ps: &PointSet) -> Result<Prepared> {
    let d = ps.dim();
    let mut grids = Vec::with_capacity(d);
    let mut numerators = Vec::with_capacity(d);
    let mut denominators = Vec::with_capacity(d);
    let mut ranks = Vec::with_capacity(d);
    for axis in 0..d {
        let grid = candidate_grid(ps, axis)?;
        let denom = grid.iter().fold(<BigUint as One>::one(), |acc, r| {
            acc.lcm(r.denom().magnitude())
        });
        let nums = grid
            .iter()
            .map(|r| r.numer().magnitude() * (&denom / r.denom().magnitude()))
            .collect();
        let axis_ranks = ps
            .points()
            .iter()
            .map(|p| {
                let x = p.coords()[axis].to_rat();
                grid.binary_search(&x)
                    .expect("coordinate is in its own grid") as u32
            })
            .collect();
        grids.push(grid);
        numerators.push(nums);
        denominators.push(denom);
        ranks.push(axis_ranks);
    }
    Ok(Prepared {
        grids,
        numerators,
        denominators,
        ranks,
        points: ps.len(),
    })
}

impl<T: Measure> Problem<T> {
    fn new(prep: Prepared) -> Self {
        let dim = prep.grids.len();
        let mut order: Vec<usize> = (0..dim).collect();
        // More distinct coordinates first: more slab filtering early on.
        order.sort_by_key(|&a| std::cmp::Reverse(prep.grids[a].len()));
        let nums: Vec<Vec<T>> = prep
            .numerators
            .iter()
            .map(|axis| axis.iter().map(T::from_big).collect())
            .collect();
        let mut rest_full = vec![T::one(); dim + 1];
        for t in (0..dim).rev() {
            rest_full[t] = rest_full[t + 1].mul(&T::from_big(&prep.denominators[order[t]]));
        }
        Problem {
            dim,
            order,
            grids: prep.grids,
            nums,
            denominators: prep.denominators,
            ranks: prep.ranks,
            rest_full,
            points: prep.points,
        }
    }

    fn last_rank(&self, axis: usize) -> u32 {
        (self.grids[axis].len() - 1) as u32
    }

    fn to_result(&self, best: Best<T>, examined: u64, pruned: u64) -> DispersionResult {
        let total: BigUint = self.denominators.iter().product();
        let volume = Rat::new(best.volume.to_big(), total).expect("positive denominator");
        let intervals = best
            .key
            .iter()
            .enumerate()
            .map(|(axis, &(lo, hi))| {
                (
                    self.grids[axis][lo as usize].clone(),
                    self.grids[axis][hi as usize].clone(),
                )
            })
            .collect();
        let witness = BoxD::new(intervals).expect("grid endpoints form a valid box");
        debug_assert_eq!(witness.volume(), volume);
        DispersionResult {
            volume,
            witness,
            boxes_examined: examined,
            pruned,
        }
    }
}

#[derive(Clone)]
struct Best<T> {
    volume: T,
    /// `(lo, hi)` ranks in original axis order.
    key: Vec<(u32, u32)>,
}

impl<T: Measure> Best<T> {
    fn better_than(&self, other: &Best<T>) -> bool {
        self.volume > other.volume || (self.volume == other.volume && self.key < other.key)
    }
}

fn pick_better<T: Measure>(a: Option<Best<T>>, b: Option<Best<T>>) -> Option<Best<T>> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if b.better_than(&a) { b } else { a }),
        (a, None) => a,
        (None, b) => b,
    }
}

struct BudgetExceeded;

/// Shared examined-box counter.
struct Budget {
    limit: u64,
    used: AtomicU64,
}

const FLUSH_EVERY: u64 = 4096;

struct Slice<'p, T> {
    problem: &'p Problem<T>,
    budget: &'p Budget,
    prune: bool,
    best: Option<Best<T>>,
    current: Vec<(u32, u32)>,
    occupancy: Vec<u32>,
    examined: u64,
    unflushed: u64,
    pruned: u64,
}

impl<'p, T: Measure> Slice<'p, T> {
    fn new(problem: &'p Problem<T>, budget: &'p Budget, prune: bool) -> Self {
        let last = *problem.order.last().expect("dimension is positive");
        Slice {
            problem,
            budget,
            prune,
            best: None,
            current: vec![(0, 0); problem.dim],
            occupancy: vec![0; problem.grids[last].len()],
            examined: 0,
            unflushed: 0,
            pruned: 0,
        }
    }

    /// True if no box of volume at most `bound` can be reported.
    fn cut(&self, bound: &T) -> bool {
        self.prune && self.best.as_ref().is_some_and(|b| *bound < b.volume)
    }

    fn record(&mut self, volume: T) -> Result<(), BudgetExceeded> {
        self.examined += 1;
        self.unflushed += 1;
        let improves = match &self.best {
            None => true,
            Some(b) => volume > b.volume || (volume == b.volume && self.current < b.key),
        };
        if improves {
            self.best = Some(Best {
                volume,
                key: self.current.clone(),
            });
        }
        if self.unflushed >= FLUSH_EVERY {
            self.flush()?;
        }
        Ok(())
    }

    fn flush(&mut self) -> Result<(), BudgetExceeded> {
        let used = self
            .budget
            .used
            .fetch_add(self.unflushed, AtomicOrdering::Relaxed)
            + self.unflushed;
        self.unflushed = 0;
        if used > self.budget.limit {
            Err(BudgetExceeded)
        } else {
            Ok(())
        }
    }

    /// Widest gap on `axis` between consecutive occupied ranks (rank 0 and the
    /// last rank always count as occupied). Ties keep the lowest gap.
    fn widest_gap(&self, axis: usize) -> (u32, u32, T) {
        let nums = &self.problem.nums[axis];
        let last = nums.len() - 1;
        let mut prev = 0usize;
        let mut best = (0u32, 0u32, T::zero());
        for r in 1..=last {
            if r == last || self.occupancy[r] > 0 {
                let gap = nums[r].sub(&nums[prev]);
                if gap > best.2 {
                    best = (prev as u32, r as u32, gap);
                }
                prev = r;
            }
        }
        best
    }

    /// One-dimensional problem: a single gap scan over all points.
    fn scan_all(&mut self) -> Result<(), BudgetExceeded> {
        let axis = self.problem.order[0];
        for &r in &self.problem.ranks[axis] {
            self.occupancy[r as usize] += 1;
        }
        let (lo, hi, gap) = self.widest_gap(axis);
        self.current[axis] = (lo, hi);
        self.record(gap)
    }

    /// Fixes the interval of axis `order[depth]` for every candidate pair,
    /// given the points of `slab` and the product `partial` of the widths
    /// fixed so far. Requires `depth + 2 <= dim`.
    fn descend(
        &mut self,
        depth: usize,
        slab: &[u32],
        partial: &T,
        slice: Option<(usize, usize)>,
    ) -> Result<(), BudgetExceeded> {
        let problem = self.problem;
        let axis = problem.order[depth];
        let ranks = &problem.ranks[axis];
        let nums = &problem.nums[axis];
        let m = nums.len();
        let rest = &problem.rest_full[depth + 1];
        let last_level = depth + 2 == problem.dim;
        let last_axis = problem.order[problem.dim - 1];
        let last_ranks = &problem.ranks[last_axis];

        let mut sorted = slab.to_vec();
        sorted.sort_unstable_by_key(|&i| ranks[i as usize]);

        for lo in 0..m - 1 {
            if let Some((index, count)) = slice {
                if lo % count != index {
                    continue;
                }
            }
            // Widths only shrink as lo grows, so one failed bound ends the loop.
            let widest = partial.mul(&nums[m - 1].sub(&nums[lo])).mul(rest);
            if self.cut(&widest) {
                self.pruned += 1;
                break;
            }
            let start = sorted.partition_point(|&i| (ranks[i as usize] as usize) <= lo);
            let mut end = start;
            if last_level {
                self.occupancy.iter_mut().for_each(|c| *c = 0);
            }
            for hi in lo + 1..m {
                while end < sorted.len() && (ranks[sorted[end] as usize] as usize) < hi {
                    if last_level {
                        self.occupancy[last_ranks[sorted[end] as usize] as usize] += 1;
                    }
                    end += 1;
                }
                let fixed = partial.mul(&nums[hi].sub(&nums[lo]));
                if self.cut(&fixed.mul(rest)) {
                    self.pruned += 1;
                    continue;
                }
                self.current[axis] = (lo as u32, hi as u32);
                if start == end {
                    // Nothing left to avoid: the remaining axes span the cube.
                    for &a in &problem.order[depth + 1..] {
                        self.current[a] = (0, problem.last_rank(a));
                    }
                    self.record(fixed.mul(rest))?;
                } else if last_level {
                    let (glo, ghi, gap) = self.widest_gap(last_axis);
                    self.current[last_axis] = (glo, ghi);
                    self.record(fixed.mul(&gap))?;
                } else {
                    self.descend(depth + 1, &sorted[start..end], &fixed, None)?;
                }
            }
        }
        Ok(())
    }

    fn run(mut self, slice: Option<(usize, usize)>) -> SliceOutcome<T> {
        let outcome = if self.problem.dim == 1 {
            self.scan_all()
        } else {
            let all: Vec<u32> = (0..self.problem.points as u32).collect();
            self.descend(0, &all, &T::one(), slice)
        };
        let exceeded = outcome.and_then(|_| self.flush()).is_err();
        SliceOutcome {
            best: self.best,
            examined: self.examined,
            pruned: self.pruned,
            exceeded,
        }
    }
}

struct SliceOutcome<T> {
    best: Option<Best<T>>,
    examined: u64,
    pruned: u64,
    exceeded: bool,
}

fn solve<T: Measure>(problem: Problem<T>, cfg: &SearchConfig) -> Result<DispersionResult> {
    let budget = Budget {
        limit: cfg.budget,
        used: AtomicU64::new(0),
    };
    let slices = if problem.dim == 1 {
        1
    } else {
        cfg.parallel_slices.max(1)
    };
    let outcomes: Vec<SliceOutcome<T>> = if slices == 1 {
        vec![Slice::new(&problem, &budget, cfg.prune).run(None)]
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(slices)
            .build()
            .map_err(|e| Error::domain(format!("cannot start {slices} worker threads: {e}")))?;
        pool.install(|| {
            (0..slices)
                .into_par_iter()
                .map(|s| Slice::new(&problem, &budget, cfg.prune).run(Some((s, slices))))
                .collect()
        })
    };
    let examined = outcomes.iter().map(|o| o.examined).sum();
    let pruned = outcomes.iter().map(|o| o.pruned).sum();
    let exceeded = outcomes.iter().any(|o| o.exceeded);
    let best = outcomes
        .into_iter()
        .fold(None, |acc, o| pick_better(acc, o.best));
    let best = best.expect("the search always records at least one box");
    let result = problem.to_result(best, examined, pruned);
    if exceeded {
        return Err(Error::SearchBudget {
            budget: cfg.budget,
            examined,
            best: result.volume,
        });
    }
    Ok(result)
}

/// Finds the exact largest empty open box of `ps` and a witness for it.
///
/// Fails with [`Error::SearchBudget`] once more than `cfg.budget` complete
/// boxes have been examined; the error carries the best volume found, which
/// is a lower bound on the dispersion.
pub fn largest_empty_box(ps: &PointSet, cfg: &SearchConfig) -> Result<DispersionResult> {
    if cfg.budget == 0 {
        return Err(Error::domain("search budget must be positive"));
    }
    let prep = prepare(ps)?;
    let total_bits: u64 = prep.denominators.iter().map(|d| d.bits()).sum();
    if total_bits <= 120 {
        solve(Problem::<u128>::new(prep), cfg)
    } else {
        solve(Problem::<BigUint>::new(prep), cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::{is_empty, naive_oracle};
    use crate::pointset::{sparse_grid, Coord, Point};

    fn set(dim: usize, pts: &[&[(i64, i64)]]) -> PointSet {
        let points = pts
            .iter()
            .map(|p| {
                Point::new(
                    p.iter()
                        .map(|&(n, d)| Coord::Rational(Rat::ratio(n, d)))
                        .collect(),
                )
            })
            .collect();
        PointSet::new(dim, points, "t").unwrap()
    }

    #[test]
    fn empty_set_has_unit_dispersion() {
        for d in 1..=4 {
            let r =
                largest_empty_box(&PointSet::empty(d).unwrap(), &SearchConfig::default()).unwrap();
            assert_eq!(r.volume, Rat::one());
            assert_eq!(r.witness, BoxD::unit(d));
        }
    }

    #[test]
    fn small_sparse_grids() {
        let cfg = SearchConfig::default();
        let r = largest_empty_box(&sparse_grid(3, 2).unwrap(), &cfg).unwrap();
        assert_eq!(r.volume, Rat::ratio(1, 16));
        // Lexicographically smallest optimal box.
        assert_eq!(r.witness, BoxD::sparse_grid_witness(3, 2));
        assert_eq!(
            largest_empty_box(&sparse_grid(1, 2).unwrap(), &cfg)
                .unwrap()
                .volume,
            Rat::ratio(1, 4)
        );
        assert_eq!(
            largest_empty_box(&sparse_grid(3, 1).unwrap(), &cfg)
                .unwrap()
                .volume,
            Rat::ratio(1, 8)
        );
        assert_eq!(
            largest_empty_box(&sparse_grid(0, 1).unwrap(), &cfg)
                .unwrap()
                .volume,
            Rat::ratio(1, 2)
        );
        assert_eq!(
            largest_empty_box(&sparse_grid(0, 3).unwrap(), &cfg)
                .unwrap()
                .volume,
            Rat::ratio(1, 2)
        );
    }

    #[test]
    fn one_dimensional_gap_scan() {
        let ps = set(1, &[&[(1, 10)], &[(1, 2)], &[(9, 10)]]);
        let r = largest_empty_box(&ps, &SearchConfig::default()).unwrap();
        assert_eq!(r.volume, Rat::ratio(2, 5));
        assert_eq!(
            r.witness.intervals()[0],
            (Rat::ratio(1, 10), Rat::ratio(1, 2))
        );
    }

    #[test]
    fn non_dyadic_coordinates() {
        let ps = set(
            2,
            &[&[(1, 3), (2, 3)], &[(2, 3), (1, 3)], &[(1, 5), (1, 7)]],
        );
        let r = largest_empty_box(&ps, &SearchConfig::default()).unwrap();
        assert_eq!(r.volume, naive_oracle(&ps));
        assert!(is_empty(&r.witness, &ps).unwrap());
        assert_eq!(r.witness.volume(), r.volume);
    }

    #[test]
    fn big_integer_path_matches() {
        // Denominators with 41+ bits per axis push three axes past 120 bits.
        let big = 2_199_023_255_551i64; // 2^41 - 1
        let ps = set(
            3,
            &[
                &[(1, big), (2, 3), (1, 2)],
                &[(5, 7), (big - 1, big), (1, 3)],
                &[(1, 2), (1, 2), (7, big)],
            ],
        );
        let r = largest_empty_box(&ps, &SearchConfig::default()).unwrap();
        assert_eq!(r.volume, naive_oracle(&ps));
        assert!(is_empty(&r.witness, &ps).unwrap());
    }

    #[test]
    fn budget_exceeded_reports_lower_bound() {
        let ps = sparse_grid(3, 2).unwrap();
        let cfg = SearchConfig {
            budget: 5,
            ..SearchConfig::default()
        };
        match largest_empty_box(&ps, &cfg) {
            Err(Error::SearchBudget {
                budget: 5,
                best,
                examined,
            }) => {
                assert!(examined > 5);
                assert!(best.is_positive() && best <= Rat::ratio(1, 16));
            }
            other => panic!("expected a budget error, got {other:?}"),
        }
        let zero = SearchConfig {
            budget: 0,
            ..SearchConfig::default()
        };
        assert!(largest_empty_box(&ps, &zero).is_err());
    }

    #[test]
    fn settings_do_not_change_the_answer() {
        let ps = sparse_grid(3, 3).unwrap();
        let reference = largest_empty_box(&ps, &SearchConfig::default()).unwrap();
        for prune in [true, false] {
            for slices in [1, 2, 3, 8] {
                let cfg = SearchConfig {
                    prune,
                    parallel_slices: slices,
                    ..SearchConfig::default()
                };
                let r = largest_empty_box(&ps, &cfg).unwrap();
                assert_eq!(r.volume, reference.volume);
                assert_eq!(r.witness, reference.witness);
            }
        }
        let unpruned = largest_empty_box(
            &ps,
            &SearchConfig {
                prune: false,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(unpruned.pruned, 0);
        assert!(reference.pruned > 0);
        assert!(reference.boxes_examined < unpruned.boxes_examined);
    }
}
