//! Three-way comparison of the sparse-grid size against the other bounds over
//! a grid of `(ε, d)` pairs, and rendering of the resulting region map.

use std::cmp::Ordering;
use std::fmt;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::bounds::{Bound, BoundKind};
use crate::error::{Error, Result};
use crate::numerics::{compare_sizes, PrecisionPolicy, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    /// The sparse grid is strictly smaller than every other upper bound.
    Black,
    /// The sparse grid is the smallest explicit set, but some
    /// nonconstructive bound is at most its size.
    DarkGray,
    /// An explicit Hammersley set or net is strictly smaller.
    LightGray,
}

impl Region {
    pub fn tag(self) -> &'static str {
        match self {
            Region::Black => "black",
            Region::DarkGray => "dark_gray",
            Region::LightGray => "light_gray",
        }
    }

    pub fn rgb(self) -> [u8; 3] {
        match self {
            Region::Black => [0, 0, 0],
            Region::DarkGray => [105, 105, 105],
            Region::LightGray => [211, 211, 211],
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Rows are `eps_values`, columns are `d_values`, both in the given order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    d_values: Vec<u32>,
    eps_values: Vec<Rat>,
}

impl Default for GridSpec {
    /// `ε ∈ {1/4, 1/5, …, 1/100}`, `d ∈ {2, …, 100}`.
    fn default() -> Self {
        GridSpec {
            d_values: (2..=100).collect(),
            eps_values: (4..=100).map(|q| Rat::ratio(1, q)).collect(),
        }
    }
}

impl GridSpec {
    pub fn new(d_values: Vec<u32>, eps_values: Vec<Rat>) -> Result<Self> {
        if d_values.is_empty() || eps_values.is_empty() {
            return Err(Error::domain("grid needs at least one d and one ε"));
        }
        if let Some(d) = d_values.iter().find(|&&d| d < 2) {
            return Err(Error::domain(format!(
                "grid dimensions must be >= 2, got {d}"
            )));
        }
        let quarter = Rat::ratio(1, 4);
        if let Some(e) = eps_values
            .iter()
            .find(|e| !e.is_positive() || **e > quarter)
        {
            return Err(Error::domain(format!(
                "grid ε must lie in (0, 1/4], got {e}"
            )));
        }
        Ok(GridSpec {
            d_values,
            eps_values,
        })
    }

    /// `d ∈ [d_min, d_max]` and `ε = 1/q` for `q ∈ [q_min, q_max]`.
    pub fn ranges(d_min: u32, d_max: u32, q_min: u32, q_max: u32) -> Result<Self> {
        GridSpec::new(
            (d_min..=d_max).collect(),
            (q_min..=q_max).map(|q| Rat::ratio(1, q as i64)).collect(),
        )
    }

    pub fn d_values(&self) -> &[u32] {
        &self.d_values
    }

    pub fn eps_values(&self) -> &[Rat] {
        &self.eps_values
    }
}

pub fn classify(eps: &Rat, d: u32) -> Result<Region> {
    classify_with(eps, d, PrecisionPolicy::default())
}

pub fn classify_with(eps: &Rat, d: u32, policy: PrecisionPolicy) -> Result<Region> {
    let bound = |kind| Bound::new(kind, eps, d);
    let sparse = bound(BoundKind::Sparse)?;
    let cmp = |kind| compare_sizes(&bound(kind)?, &sparse, policy);

    for kind in [BoundKind::Hammersley, BoundKind::Nets] {
        if cmp(kind)? == Ordering::Less {
            return Ok(Region::LightGray);
        }
    }
    for kind in BoundKind::RIVALS {
        if cmp(kind)? != Ordering::Greater {
            return Ok(Region::DarkGray);
        }
    }
    Ok(Region::Black)
}

/// One row per `ε`, one column per `d`. Cells are evaluated in parallel on
/// the current rayon pool; the result does not depend on scheduling.
pub fn classify_grid(spec: &GridSpec) -> Result<Vec<Vec<Region>>> {
    classify_grid_with(spec, PrecisionPolicy::default())
}

pub fn classify_grid_with(spec: &GridSpec, policy: PrecisionPolicy) -> Result<Vec<Vec<Region>>> {
    let cols = spec.d_values.len();
    let cells: Vec<Region> = (0..spec.eps_values.len() * cols)
        .into_par_iter()
        .map(|i| classify_with(&spec.eps_values[i / cols], spec.d_values[i % cols], policy))
        .collect::<Result<_>>()?;
    Ok(cells.chunks(cols).map(<[Region]>::to_vec).collect())
}

/// Long-form CSV with columns `d,eps_num,eps_den,region`, row-major over the
/// matrix.
pub fn grid_to_long_csv(spec: &GridSpec, matrix: &[Vec<Region>]) -> String {
    let mut out = String::from("d,eps_num,eps_den,region\n");
    for (eps, row) in spec.eps_values.iter().zip(matrix) {
        for (d, region) in spec.d_values.iter().zip(row) {
            writeln!(out, "{d},{},{},{region}", eps.numer(), eps.denom()).unwrap();
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigureFormat {
    Ppm,
    Svg,
    Csv,
}

const ORIENTATION: &str = "columns: d increasing left to right; rows: eps decreasing top to bottom";

/// One pixel (or unit square, or CSV field) per cell, row `i` of the matrix
/// drawn as image row `i`.
pub fn render_figure(matrix: &[Vec<Region>], format: FigureFormat) -> Vec<u8> {
    let height = matrix.len();
    let width = matrix.first().map_or(0, Vec::len);
    match format {
        FigureFormat::Ppm => {
            let mut out =
                format!("P6\n# region map; {ORIENTATION}\n# palette: black 0 0 0, dark_gray 105 105 105, light_gray 211 211 211\n{width} {height}\n255\n")
                    .into_bytes();
            for region in matrix.iter().flatten() {
                out.extend_from_slice(&region.rgb());
            }
            out
        }
        FigureFormat::Svg => {
            let mut s = String::new();
            writeln!(
                s,
                r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {width} {height}" shape-rendering="crispEdges">"#,
                width * 6,
                height * 6
            )
            .unwrap();
            writeln!(s, "<desc>region map; {ORIENTATION}</desc>").unwrap();
            for (y, row) in matrix.iter().enumerate() {
                for (x, region) in row.iter().enumerate() {
                    let [r, g, b] = region.rgb();
                    writeln!(
                        s,
                        r#"<rect x="{x}" y="{y}" width="1" height="1" fill="rgb({r},{g},{b})" class="{region}"/>"#
                    )
                    .unwrap();
                }
            }
            s.push_str("</svg>\n");
            s.into_bytes()
        }
        FigureFormat::Csv => {
            let mut s = String::new();
            for row in matrix {
                let tags: Vec<&str> = row.iter().map(|r| r.tag()).collect();
                s.push_str(&tags.join(","));
                s.push('\n');
            }
            s.into_bytes()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_checks() {
        assert_eq!(classify(&Rat::ratio(1, 4), 2).unwrap(), Region::Black);
        assert_eq!(classify(&Rat::ratio(1, 100), 2).unwrap(), Region::LightGray);
        assert_eq!(
            classify(&Rat::ratio(1, 100), 100).unwrap(),
            Region::DarkGray
        );
        assert!(classify(&Rat::one(), 2).is_err());
        assert!(classify(&Rat::ratio(1, 4), 1).is_err());
    }

    #[test]
    fn single_cell_grid() {
        let spec = GridSpec::new(vec![2], vec![Rat::ratio(1, 4)]).unwrap();
        assert_eq!(classify_grid(&spec).unwrap(), vec![vec![Region::Black]]);
        let ppm = render_figure(&[vec![Region::Black]], FigureFormat::Ppm);
        assert!(ppm.starts_with(b"P6\n#"));
        assert_eq!(&ppm[ppm.len() - 3..], &[0, 0, 0]);
        assert!(String::from_utf8_lossy(&ppm).contains("\n1 1\n255\n"));
    }

    #[test]
    fn dimension_two_column() {
        // ε = 1/q: sparse size 2^k (k + 1) is constant while q runs through
        // (2^k, 2^{k+1}], Hammersley 4q grows, so the column sawtooths.
        let spec = GridSpec::ranges(2, 2, 4, 100).unwrap();
        let column: Vec<Region> = classify_grid(&spec)
            .unwrap()
            .into_iter()
            .map(|r| r[0])
            .collect();
        let at = |q: usize| column[q - 4];
        assert!((4..=16).all(|q| at(q) == Region::Black));
        assert!((17..=19).all(|q| at(q) == Region::LightGray));
        assert_eq!(at(20), Region::DarkGray); // 80 = 80
        assert!((21..=32).all(|q| at(q) == Region::Black));
        assert!((33..=47).all(|q| at(q) == Region::LightGray));
        assert_eq!(at(48), Region::DarkGray);
        assert!((65..=100).all(|q| at(q) == Region::LightGray));
    }

    #[test]
    fn spec_validation() {
        assert!(GridSpec::new(vec![], vec![Rat::ratio(1, 4)]).is_err());
        assert!(GridSpec::new(vec![1], vec![Rat::ratio(1, 4)]).is_err());
        assert!(GridSpec::new(vec![2], vec![Rat::ratio(1, 3)]).is_err());
        let def = GridSpec::default();
        assert_eq!((def.eps_values().len(), def.d_values().len()), (97, 99));
    }

    #[test]
    fn renderings_have_matrix_shape() {
        let m = vec![
            vec![Region::Black, Region::DarkGray],
            vec![Region::LightGray, Region::LightGray],
        ];
        let csv = String::from_utf8(render_figure(&m, FigureFormat::Csv)).unwrap();
        assert_eq!(csv, "black,dark_gray\nlight_gray,light_gray\n");
        let svg = String::from_utf8(render_figure(&m, FigureFormat::Svg)).unwrap();
        assert_eq!(svg.matches("<rect").count(), 4);
        assert!(svg.contains("rgb(105,105,105)"));
        let spec = GridSpec::new(vec![2, 3], vec![Rat::ratio(1, 4), Rat::ratio(1, 5)]).unwrap();
        let long = grid_to_long_csv(&spec, &m);
        assert_eq!(long.lines().nth(3), Some("2,1,5,light_gray"));
    }
}
