//! Experimental designs: sets of distinct points in Z_p^n.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Point};

/// Grid sizes up to this many points get a bitmask fast path.
pub const MASK_BITS: usize = 128;

/// `m` distinct points of Z_p^n, stored in ascending lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DataSet {
    field: FieldSpec,
    n: usize,
    points: Vec<Point>,
}

impl DataSet {
    pub fn new(mut points: Vec<Point>, field: FieldSpec) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::invalid("a data set needs at least one point"));
        };
        let n = first.dim();
        if points.iter().any(|pt| pt.dim() != n) {
            return Err(Error::invalid("points have different dimensions"));
        }
        if points
            .iter()
            .any(|pt| pt.coords().iter().any(|&c| c as u32 >= field.p()))
        {
            return Err(Error::invalid("coordinate is not a canonical residue"));
        }
        points.sort();
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePoint(w[0].encode(field.p())));
        }
        Ok(DataSet { field, n, points })
    }

    /// Points must already be sorted, distinct, reduced, and of dimension `n`.
    pub(crate) fn from_sorted_unchecked(points: Vec<Point>, field: FieldSpec, n: usize) -> Self {
        debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
        DataSet { field, n, points }
    }

    #[inline]
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.field.p()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn contains(&self, x: &Point) -> bool {
        self.points.binary_search(x).is_ok()
    }

    /// `self ∪ {x}`; fails if `x` is already present.
    pub fn with_point(&self, x: Point) -> Result<DataSet> {
        if x.dim() != self.n {
            return Err(Error::invalid(
                "point dimension does not match the data set",
            ));
        }
        if self.contains(&x) {
            return Err(Error::DuplicatePoint(x.encode(self.p())));
        }
        let mut pts = self.points.clone();
        pts.push(x);
        DataSet::new(pts, self.field)
    }

    /// Number of points of the ambient grid Z_p^n.
    pub fn grid_size(&self) -> usize {
        (self.p() as usize).pow(self.n as u32)
    }

    /// Comma-separated point encodings, e.g. `000,001,010`.
    pub fn encode(&self) -> String {
        let p = self.p();
        self.points
            .iter()
            .map(|pt| pt.encode(p))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse(text: &str, field: FieldSpec, n: usize) -> Result<Self> {
        let pts = text
            .split(',')
            .map(|s| Point::parse(s, &field, n))
            .collect::<Result<Vec<_>>>()?;
        DataSet::new(pts, field).map_err(|e| match e {
            Error::DuplicatePoint(_) => e,
            other => Error::parse(other.to_string()),
        })
    }

    /// Bit `i` set iff the grid point with lexicographic index `i` is present.
    pub fn to_mask(&self) -> Option<u128> {
        if self.grid_size() > MASK_BITS {
            return None;
        }
        let p = self.p();
        Some(
            self.points
                .iter()
                .fold(0u128, |acc, pt| acc | (1u128 << pt.grid_index(p))),
        )
    }

    pub fn from_mask(mask: u128, field: FieldSpec, n: usize) -> Self {
        let p = field.p();
        let mut pts = Vec::with_capacity(mask.count_ones() as usize);
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            pts.push(Point::from_grid_index(i, p, n));
            rest &= rest - 1;
        }
        DataSet::from_sorted_unchecked(pts, field, n)
    }

    /// The whole grid Z_p^n.
    pub fn full_grid(field: FieldSpec, n: usize) -> Self {
        let size = (field.p() as usize).pow(n as u32);
        let pts = (0..size)
            .map(|i| Point::from_grid_index(i, field.p(), n))
            .collect();
        DataSet::from_sorted_unchecked(pts, field, n)
    }
}

impl PartialOrd for DataSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Point lists compared entry by entry, each point lexicographically.
impl Ord for DataSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.points.cmp(&other.points)
    }
}

impl fmt::Display for DataSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}
