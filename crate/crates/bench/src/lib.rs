//! Shared inputs for the benchmarks.

use lowdisp_core::{sparse_grid, PointSet, Rat};

/// Sparse grids used by the search benchmarks, as `(k, d)`.
pub const SEARCH_CASES: [(u32, u32); 5] = [(6, 2), (8, 2), (4, 3), (5, 3), (2, 4)];

pub fn sparse_case(k: u32, d: u32) -> PointSet {
    sparse_grid(k, d).expect("benchmark sizes are within the point budget")
}

/// `ε = 1/q` samples from the default classification grid.
pub fn eps_samples() -> Vec<Rat> {
    [4, 10, 17, 50, 100]
        .iter()
        .map(|&q| Rat::ratio(1, q))
        .collect()
}
