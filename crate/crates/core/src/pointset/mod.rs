//! Point sets in the open unit cube, their text and CSV formats, and the
//! generators for sparse grids and Hammersley sets.

mod hammersley;
mod sparse;

use std::cmp::Ordering;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

pub use hammersley::{hammersley, radical_inverse};
pub use sparse::{
    compositions, k_of_epsilon, m_set, sparse_cardinality, sparse_grid, sparse_grid_with_budget,
    Composition, Compositions, DEFAULT_POINT_BUDGET,
};

use crate::error::{Error, Result};
use crate::numerics::{cmp_fractions, Dyadic, Rat};

/// One coordinate: a dyadic rational for sparse-grid points, or a general
/// rational. Equality and order are by value across both variants.
#[derive(Clone)]
pub enum Coord {
    Dyadic(Dyadic),
    Rational(Rat),
}

impl Coord {
    pub fn to_rat(&self) -> Rat {
        match self {
            Coord::Dyadic(d) => d.to_rat(),
            Coord::Rational(r) => r.clone(),
        }
    }

    fn is_interior(&self) -> bool {
        match self {
            Coord::Dyadic(d) => d.is_interior(),
            Coord::Rational(r) => r.is_positive() && *r < Rat::one(),
        }
    }

    /// Decimal expansion when finite (always, for dyadic values), else `p/q`.
    pub fn to_csv_field(&self) -> String {
        let r = self.to_rat();
        r.to_decimal_string().unwrap_or_else(|| r.to_string())
    }
}

impl Ord for Coord {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Coord::Dyadic(a), Coord::Dyadic(b)) => a.cmp(b),
            _ => {
                let (a, b) = (self.to_rat(), other.to_rat());
                cmp_fractions(a.numer(), a.denom(), b.numer(), b.denom())
            }
        }
    }
}

impl PartialOrd for Coord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Coord {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Coord {}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::Dyadic(d) => d.fmt(f),
            Coord::Rational(r) => r.fmt(f),
        }
    }
}

impl fmt::Debug for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Coord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.contains("/2^") {
            s.parse().map(Coord::Dyadic)
        } else {
            s.parse().map(Coord::Rational)
        }
    }
}

impl From<Dyadic> for Coord {
    fn from(d: Dyadic) -> Self {
        Coord::Dyadic(d)
    }
}

impl From<Rat> for Coord {
    fn from(r: Rat) -> Self {
        Coord::Rational(r)
    }
}

/// A point of the unit cube.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Point(Vec<Coord>);

impl Point {
    pub fn new(coords: Vec<Coord>) -> Self {
        Point(coords)
    }

    pub fn coords(&self) -> &[Coord] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Maps every coordinate `x` to `1 - x`.
    pub fn reflect(&self) -> Point {
        Point(
            self.0
                .iter()
                .map(|c| match c {
                    Coord::Dyadic(d) => Coord::Dyadic(d.reflect()),
                    Coord::Rational(r) => Coord::Rational(&Rat::one() - r),
                })
                .collect(),
        )
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            c.fmt(f)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl<C: Into<Coord>> FromIterator<C> for Point {
    fn from_iter<I: IntoIterator<Item = C>>(iter: I) -> Self {
        Point(iter.into_iter().map(Into::into).collect())
    }
}

/// A finite point set in `(0, 1)^dim`: sorted lexicographically and free of
/// duplicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    dim: usize,
    points: Vec<Point>,
    label: String,
}

impl PointSet {
    /// Validates, sorts and deduplicates.
    pub fn new(dim: usize, mut points: Vec<Point>, label: impl Into<String>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("point set dimension must be positive"));
        }
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
            if let Some(c) = p.coords().iter().find(|c| !c.is_interior()) {
                return Err(Error::domain(format!(
                    "coordinate {c} of point {p:?} is not strictly inside (0, 1)"
                )));
            }
        }
        points.sort_unstable();
        points.dedup();
        Ok(PointSet {
            dim,
            points,
            label: label.into(),
        })
    }

    pub fn empty(dim: usize) -> Result<Self> {
        PointSet::new(dim, Vec::new(), "empty")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.points.binary_search(p).is_ok()
    }

    /// The set with the point at `index` removed.
    pub fn without(&self, index: usize) -> PointSet {
        let mut points = self.points.clone();
        points.remove(index);
        PointSet {
            dim: self.dim,
            points,
            label: format!("{} minus #{index}", self.label),
        }
    }

    /// The set with `p` added.
    pub fn with_point(&self, p: Point) -> Result<PointSet> {
        let mut points = self.points.clone();
        points.push(p);
        PointSet::new(self.dim, points, self.label.clone())
    }

    /// Writes the text format: a `# dim=<d> label=<label> n=<count>` header,
    /// then one point per line with space-separated exact coordinates.
    pub fn write_text<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(
            w,
            "# dim={} label={} n={}",
            self.dim,
            self.label,
            self.points.len()
        )?;
        for p in &self.points {
            writeln!(w, "{p}")?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_text(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("text format is ASCII")
    }

    /// Reads the text format. Blank lines are skipped; the point count must
    /// match the header.
    pub fn read_text<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::parse("empty point-set file"))??;
        let (dim, label, n) = parse_header(&header)?;
        let mut points = Vec::with_capacity(n);
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let p = line
                .split_whitespace()
                .map(str::parse::<Coord>)
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::parse(format!("line {}: {e}", lineno + 2)))?;
            points.push(Point(p));
        }
        if points.len() != n {
            return Err(Error::parse(format!(
                "header announces {n} points, found {}",
                points.len()
            )));
        }
        let set = PointSet::new(dim, points, label)?;
        if set.len() != n {
            return Err(Error::parse("point-set file contains duplicate points"));
        }
        Ok(set)
    }

    /// CSV with a `x1,…,xd` header and exact decimal coordinates.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let header: Vec<String> = (1..=self.dim).map(|i| format!("x{i}")).collect();
        writeln!(w, "{}", header.join(","))?;
        for p in &self.points {
            let row: Vec<String> = p.coords().iter().map(Coord::to_csv_field).collect();
            writeln!(w, "{}", row.join(","))?;
        }
        w.flush()?;
        Ok(())
    }
}

fn parse_header(line: &str) -> Result<(usize, String, usize)> {
    let bad = || Error::parse(format!("malformed header {line:?}"));
    let rest = line.strip_prefix("# dim=").ok_or_else(bad)?;
    let (dim, rest) = rest.split_once(" label=").ok_or_else(bad)?;
    let (label, n) = rest.rsplit_once(" n=").ok_or_else(bad)?;
    let dim = dim.trim().parse().map_err(|_| bad())?;
    let n = n.trim().parse().map_err(|_| bad())?;
    Ok((dim, label.to_string(), n))
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a Point;
    type IntoIter = std::slice::Iter<'a, Point>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}
