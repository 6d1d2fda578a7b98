//! Exact dispersion: the volume of the largest axis-parallel open box in
//! `[0, 1]^d` that contains no point of a given set.
//!
//! Every inclusion-maximal empty box has each of its facets either on the
//! boundary of the cube or touching a point, so on every axis its endpoints
//! come from the candidate grid of that axis (the point coordinates plus 0 and
//! 1). [`largest_empty_box`] searches these endpoint pairs with
//! branch-and-bound; [`naive_oracle`] enumerates all of them.

mod naive;
mod search;

use std::fmt;

use serde::Serialize;

pub use naive::naive_oracle;
pub use search::largest_empty_box;

use crate::error::{Error, Result};
use crate::numerics::Rat;
use crate::pointset::PointSet;

/// Default cap on the number of complete boxes the search may examine.
pub const DEFAULT_SEARCH_BUDGET: u64 = 100_000_000;

/// An open axis-parallel box `(lo_1, hi_1) × … × (lo_d, hi_d)` inside the unit
/// cube.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BoxD {
    intervals: Vec<(Rat, Rat)>,
}

impl BoxD {
    pub fn new(intervals: Vec<(Rat, Rat)>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::domain("a box needs at least one axis"));
        }
        for (lo, hi) in &intervals {
            if *lo < Rat::zero() || lo >= hi || *hi > Rat::one() {
                return Err(Error::domain(format!("invalid box interval ({lo}, {hi})")));
            }
        }
        Ok(BoxD { intervals })
    }

    /// `(0, 1)^d`.
    pub fn unit(d: usize) -> Self {
        BoxD {
            intervals: vec![(Rat::zero(), Rat::one()); d],
        }
    }

    /// `(0, 2^{-(k+1)}) × (0, 1)^{d-1}`, an empty box for `P(k, d)`.
    pub fn sparse_grid_witness(k: u32, d: usize) -> Self {
        let mut b = BoxD::unit(d);
        b.intervals[0].1 = Rat::inv_pow2(k + 1);
        b
    }

    pub fn dim(&self) -> usize {
        self.intervals.len()
    }

    pub fn intervals(&self) -> &[(Rat, Rat)] {
        &self.intervals
    }

    pub fn volume(&self) -> Rat {
        self.intervals.iter().map(|(lo, hi)| hi - lo).product()
    }
}

impl fmt::Display for BoxD {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (lo, hi)) in self.intervals.iter().enumerate() {
            if i > 0 {
                f.write_str(" × ")?;
            }
            write!(f, "({lo}, {hi})")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BoxD {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// True iff no point of `ps` lies strictly inside `b` on every axis.
pub fn is_empty(b: &BoxD, ps: &PointSet) -> Result<bool> {
    if b.dim() != ps.dim() {
        return Err(Error::DimensionMismatch {
            expected: ps.dim(),
            found: b.dim(),
        });
    }
    let inside = |p: &crate::pointset::Point| {
        p.coords().iter().zip(b.intervals()).all(|(c, (lo, hi))| {
            let x = c.to_rat();
            *lo < x && x < *hi
        })
    };
    Ok(!ps.points().iter().any(inside))
}

/// The sorted distinct coordinates of `ps` on `axis`, together with 0 and 1.
pub fn candidate_grid(ps: &PointSet, axis: usize) -> Result<Vec<Rat>> {
    if axis >= ps.dim() {
        return Err(Error::domain(format!(
            "axis {axis} out of range for dimension {}",
            ps.dim()
        )));
    }
    let mut grid: Vec<Rat> = ps
        .points()
        .iter()
        .map(|p| p.coords()[axis].to_rat())
        .collect();
    grid.push(Rat::zero());
    grid.push(Rat::one());
    grid.sort_unstable();
    grid.dedup();
    Ok(grid)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Maximum number of complete candidate boxes to examine.
    pub budget: u64,
    /// Number of independent slices of the outermost axis, each run on its
    /// own worker thread.
    pub parallel_slices: usize,
    pub prune: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: DEFAULT_SEARCH_BUDGET,
            parallel_slices: 1,
            prune: true,
        }
    }
}

impl SearchConfig {
    pub fn with_threads(self, threads: usize) -> Self {
        SearchConfig {
            parallel_slices: threads.max(1),
            ..self
        }
    }
}

/// A largest empty box together with search statistics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DispersionResult {
    pub volume: Rat,
    /// Among all empty boxes of maximal volume, the one whose endpoint
    /// sequence `(lo_1, hi_1, lo_2, …)` is lexicographically smallest.
    pub witness: BoxD,
    pub boxes_examined: u64,
    pub pruned: u64,
}

#[derive(Serialize)]
struct DispersionRecord {
    volume: String,
    witness: Vec<[String; 2]>,
    boxes_examined: u64,
    pruned: u64,
}

impl DispersionResult {
    /// `{"volume": "p/q", "witness": [["lo","hi"], …], "boxes_examined": n, "pruned": n}`.
    pub fn to_json(&self) -> String {
        let record = DispersionRecord {
            volume: self.volume.to_string(),
            witness: self
                .witness
                .intervals()
                .iter()
                .map(|(lo, hi)| [lo.to_string(), hi.to_string()])
                .collect(),
            boxes_examined: self.boxes_examined,
            pruned: self.pruned,
        };
        serde_json::to_string(&record).expect("plain strings and integers serialize")
    }
}

/// The dispersion of `ps`: the volume of its largest empty box.
pub fn dispersion(ps: &PointSet, cfg: &SearchConfig) -> Result<Rat> {
    largest_empty_box(ps, cfg).map(|r| r.volume)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointset::{sparse_grid, Coord, Point};

    #[test]
    fn box_validation() {
        assert!(BoxD::new(vec![(Rat::zero(), Rat::one())]).is_ok());
        assert!(BoxD::new(vec![(Rat::ratio(1, 2), Rat::ratio(1, 2))]).is_err());
        assert!(BoxD::new(vec![(Rat::ratio(-1, 2), Rat::ratio(1, 2))]).is_err());
        assert!(BoxD::new(vec![(Rat::zero(), Rat::from(2))]).is_err());
        assert!(BoxD::new(vec![]).is_err());
        assert_eq!(BoxD::sparse_grid_witness(3, 2).volume(), Rat::ratio(1, 16));
    }

    #[test]
    fn emptiness_examples() {
        let p32 = sparse_grid(3, 2).unwrap();
        assert!(is_empty(&BoxD::unit(2), &PointSet::empty(2).unwrap()).unwrap());
        assert!(is_empty(&BoxD::sparse_grid_witness(3, 2), &p32).unwrap());
        assert!(!is_empty(&BoxD::unit(2), &p32).unwrap());
        assert!(matches!(
            is_empty(&BoxD::unit(3), &p32),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 3
            })
        ));
        // Points on the boundary of a box do not lie inside it.
        let half = BoxD::new(vec![(Rat::zero(), Rat::ratio(1, 2)); 2]).unwrap();
        assert!(is_empty(&half, &sparse_grid(0, 2).unwrap()).unwrap());
    }

    #[test]
    fn candidate_grid_examples() {
        let single = sparse_grid(0, 2).unwrap();
        assert_eq!(
            candidate_grid(&single, 0).unwrap(),
            vec![Rat::zero(), Rat::ratio(1, 2), Rat::one()]
        );
        let p12 = sparse_grid(1, 2).unwrap();
        assert_eq!(
            candidate_grid(&p12, 0).unwrap(),
            [0, 1, 2, 3, 4].map(|i| Rat::ratio(i, 4)).to_vec()
        );
        assert_eq!(
            candidate_grid(&PointSet::empty(3).unwrap(), 0).unwrap(),
            vec![Rat::zero(), Rat::one()]
        );
        assert!(candidate_grid(&p12, 2).is_err());
    }

    #[test]
    fn json_record() {
        let ps = PointSet::new(
            1,
            vec![Point::new(vec![Coord::Rational(Rat::ratio(1, 3))])],
            "t",
        )
        .unwrap();
        let r = largest_empty_box(&ps, &SearchConfig::default()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["volume"], "2/3");
        assert_eq!(v["witness"][0][0], "1/3");
        assert_eq!(v["witness"][0][1], "1/1");
        assert!(v["boxes_examined"].is_u64());
    }
}
