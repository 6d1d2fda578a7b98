//! Low-dispersion sparse-grid point sets.
//!
//! The sets `P(k, d)` are unions of anisotropic dyadic grids
//! `M_{j_1} × … × M_{j_d}` over all level vectors with `|j| = k`, where
//! `M_j = {1, 3, …, 2^{j+1} - 1} / 2^{j+1}`. This crate builds them, computes
//! the exact dispersion (largest empty axis-parallel open box) of any finite
//! point set, and evaluates the known size bounds for point sets whose
//! dispersion is at most `ε`.
//!
//! All arithmetic is exact: coordinates are dyadic or general rationals, box
//! volumes are rationals, and size bounds involving logarithms are compared
//! through certified intervals.
//!
//! ```
//! use lowdisp_core::{classify, dispersion, sparse_grid, Rat, Region, SearchConfig};
//!
//! let p = sparse_grid(3, 2).unwrap();
//! assert_eq!(p.len(), 32);
//! assert_eq!(dispersion(&p, &SearchConfig::default()).unwrap(), Rat::ratio(1, 16));
//! assert_eq!(classify(&Rat::ratio(1, 4), 2).unwrap(), Region::Black);
//! ```

pub mod bounds;
pub mod classify;
pub mod dispersion;
mod error;
pub mod numerics;
pub mod pointset;
pub mod suites;

pub use bounds::{BoundKind, BoundsReport, LogBase};
pub use classify::{
    classify, classify_grid, classify_with, grid_to_long_csv, render_figure, FigureFormat,
    GridSpec, Region,
};
pub use dispersion::{
    dispersion, is_empty, largest_empty_box, naive_oracle, BoxD, DispersionResult, SearchConfig,
};
pub use error::{Error, Result};
pub use numerics::{Dyadic, PrecisionPolicy, Rat, SizeValue};
pub use pointset::{
    hammersley, k_of_epsilon, m_set, sparse_cardinality, sparse_grid, Composition, Coord, Point,
    PointSet,
};
