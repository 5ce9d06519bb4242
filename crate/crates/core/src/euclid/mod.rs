//! Compact subsets of Q = [-1,1]^d represented as point clouds with a resolution tag.

mod boxdim;
mod grid;
mod hausdorff;
pub mod io;
mod porosity;
mod similar;
mod zoom;

pub use boxdim::{box_dimension, BoxCountReport};
pub use grid::{FullCube, UniformGrid};
pub use hausdorff::{directed_sq, hausdorff_distance, hausdorff_points, HausdorffDistance};
pub use porosity::{harmonic_radii, porosity_profile, PorosityProfile, PorosityRow, PorositySettings};
pub use similar::{similar_up_to, similar_up_to_with, SimilarityMatch, SimilarityOutcome, SimilaritySettings};
pub use zoom::{geometric_grid, tangent_photograph_scan, zoom, zoom_points, ScanProfile, ScanRow};

use crate::rational::{to_f64, Rational};
use num::traits::{One, Signed, Zero};

pub type Point = Vec<Rational>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EuclidError {
    #[error("dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("point set is empty")]
    Empty,
    #[error("coordinate outside [-1,1] in point {0}")]
    OutsideCube(usize),
    #[error("no point survives the zoom")]
    EmptyZoom,
    #[error("zoom centre is not within resolution of the set")]
    CenterNotInSet,
    #[error("scale must be positive")]
    NonPositiveScale,
    #[error("scales must be strictly monotone")]
    NonMonotoneScales,
    #[error("{0} points exceed the budget of {1}")]
    BudgetExceeded(u128, usize),
    #[error("window leaves the constructed frame")]
    OutsideFrame,
    #[error("{0}")]
    Invalid(String),
}

/// Q(center, half) = center + [-half, half]^d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cube {
    pub center: Point,
    pub half: Rational,
}

impl Cube {
    pub fn new(center: Point, half: Rational) -> Self {
        Cube { center, half }
    }

    /// Q itself.
    pub fn unit(dim: usize) -> Self {
        Cube { center: vec![Rational::zero(); dim], half: Rational::one() }
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        p.iter().zip(&self.center).all(|(a, c)| (a - c).abs() <= self.half)
    }

    pub fn intersects(&self, other: &Cube) -> bool {
        let reach = &self.half + &other.half;
        self.center.iter().zip(&other.center).all(|(a, b)| (a - b).abs() <= reach)
    }

    /// Cube containment (closed).
    pub fn contains_cube(&self, other: &Cube) -> bool {
        if other.half > self.half {
            return false;
        }
        let slack = &self.half - &other.half;
        self.center.iter().zip(&other.center).all(|(a, b)| (a - b).abs() <= slack)
    }
}

/// Points of a construction inside a window; the points need not lie in Q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowSample {
    pub points: Vec<Point>,
    pub resolution: Rational,
}

/// Lazy stand-in for an infinite compact set: points inside a window at a requested resolution.
pub trait WindowGenerator {
    fn dim(&self) -> usize;

    /// Points of the construction inside `window`, at the coarsest available depth whose
    /// resolution is at most `resolution`, or the finest depth if none is fine enough.
    fn sample(&self, window: &Cube, resolution: &Rational) -> Result<WindowSample, EuclidError>;

    /// Resolution of the deepest level this generator can produce.
    fn finest_resolution(&self) -> Rational;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointCloudSet {
    dim: usize,
    points: Vec<Point>,
    resolution: Rational,
}

impl PointCloudSet {
    /// Sorts and deduplicates; rejects empty sets and coordinates outside [-1,1].
    pub fn new(dim: usize, mut points: Vec<Point>, resolution: Rational) -> Result<Self, EuclidError> {
        if points.is_empty() {
            return Err(EuclidError::Empty);
        }
        let one = Rational::one();
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(EuclidError::DimensionMismatch(p.len(), dim));
            }
            if p.iter().any(|c| c.abs() > one) {
                return Err(EuclidError::OutsideCube(i));
            }
        }
        if resolution.is_negative() {
            return Err(EuclidError::Invalid("negative resolution".into()));
        }
        points.sort();
        points.dedup();
        Ok(PointCloudSet { dim, points, resolution })
    }

    pub fn from_f64(dim: usize, pts: &[Vec<f64>], resolution: Rational) -> Result<Self, EuclidError> {
        let mut out = Vec::with_capacity(pts.len());
        for p in pts {
            let mut q = Vec::with_capacity(p.len());
            for &c in p {
                q.push(crate::rational::from_f64_decimal(c).ok_or_else(|| EuclidError::Invalid("non-finite".into()))?);
            }
            out.push(q);
        }
        PointCloudSet::new(dim, out, resolution)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn resolution(&self) -> &Rational {
        &self.resolution
    }

    pub fn with_resolution(mut self, r: Rational) -> Self {
        self.resolution = r;
        self
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.points.iter().map(|p| p.iter().map(to_f64).collect()).collect()
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        self.points.binary_search_by(|q| q.as_slice().cmp(p)).is_ok()
    }
}

impl WindowGenerator for PointCloudSet {
    fn dim(&self) -> usize {
        self.dim
    }

    fn sample(&self, window: &Cube, _resolution: &Rational) -> Result<WindowSample, EuclidError> {
        if window.dim() != self.dim {
            return Err(EuclidError::DimensionMismatch(window.dim(), self.dim));
        }
        Ok(WindowSample {
            points: self.points.iter().filter(|p| window.contains(p)).cloned().collect(),
            resolution: self.resolution.clone(),
        })
    }

    fn finest_resolution(&self) -> Rational {
        self.resolution.clone()
    }
}

/// Squared Euclidean distance, exact.
pub fn dist_sq(a: &[Rational], b: &[Rational]) -> Rational {
    let mut s = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        s += &d * &d;
    }
    s
}

pub fn dist_sq_f64(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Nearest-point queries in f64, points kept sorted by their first coordinate.
pub(crate) struct SweepIndex {
    pts: Vec<Vec<f64>>,
    order: Vec<usize>,
    keys: Vec<f64>,
}

impl SweepIndex {
    pub fn new(pts: Vec<Vec<f64>>) -> Self {
        let mut order: Vec<usize> = (0..pts.len()).collect();
        order.sort_by(|&a, &b| pts[a][0].total_cmp(&pts[b][0]).then(a.cmp(&b)));
        let keys = order.iter().map(|&i| pts[i][0]).collect();
        SweepIndex { pts, order, keys }
    }

    pub fn is_empty(&self) -> bool {
        self.pts.is_empty()
    }

    /// Squared distance to the nearest point (infinite when empty).
    pub fn nearest_sq(&self, q: &[f64]) -> f64 {
        let mut best = f64::INFINITY;
        self.visit_within(q, |d2, _| {
            if d2 < best {
                best = d2;
            }
            best
        });
        best
    }

    /// Calls `f(d², index)` on points in order of increasing |Δx₀|, stopping once |Δx₀|²
    /// exceeds the bound returned by `f`.
    pub fn visit_within(&self, q: &[f64], mut f: impl FnMut(f64, usize) -> f64) {
        if self.pts.is_empty() {
            return;
        }
        let start = self.keys.partition_point(|&k| k < q[0]);
        let mut lo = start as isize - 1;
        let mut hi = start;
        let mut bound = f64::INFINITY;
        loop {
            let dl = if lo >= 0 { q[0] - self.keys[lo as usize] } else { f64::INFINITY };
            let dh = if hi < self.keys.len() { self.keys[hi] - q[0] } else { f64::INFINITY };
            let (gap, idx) = if dl <= dh {
                if lo < 0 {
                    break;
                }
                let i = lo as usize;
                lo -= 1;
                (dl, i)
            } else {
                let i = hi;
                hi += 1;
                (dh, i)
            };
            if !gap.is_finite() || gap * gap > bound {
                break;
            }
            let p = self.order[idx];
            bound = f(dist_sq_f64(q, &self.pts[p]), p);
        }
    }
}
