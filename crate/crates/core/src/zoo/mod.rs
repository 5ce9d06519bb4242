//! Concrete compact sets: C₀ and its self-similar closures, homogeneous Cantor sets,
//! sets that tangent out {0}, the global set A and Whitney gluing; plus the Moran solver.

mod c0;
mod cantor;
mod global;
mod ifs;
mod moran;
mod whitney;
mod zero_tangent;

pub use c0::{c0_theorem_scan, C0Generator, C0Params, C0ScanRow};
pub use cantor::{cantor_build, cantor_dimension, gap_ratio, CantorDimension, CantorGenerator, CantorParams, Interval};
pub use global::{global_photograph_scan, GlobalMode, GlobalParams, GlobalRich, PhotoRow};
pub use ifs::{cylinder_diam_sq, delta_tilde, kinf_cover_sum, kinf_predicted_k, periodic_point, IfsKind, IfsSystem, LevelMaps};
pub use moran::{moran_dimension, GeometricRatios, LevelRatios, MoranResult, RatioSource};
pub use whitney::{glue_scale, whitney_decomposition, whitney_glue, WhitneyCube};
pub use zero_tangent::{zero_tangent_construction, zero_tangent_scales, ZeroTangent};

use crate::euclid::{Cube, EuclidError, Point, WindowGenerator, WindowSample};
use crate::pisigma::PiError;
use crate::rational::Rational;
use std::rc::Rc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ZooError {
    #[error("condition {0} fails at n = {1}")]
    ConditionViolation(String, usize),
    #[error("schedule violation: {0}")]
    ScheduleViolation(String),
    #[error("{0} points exceed the budget of {1}")]
    BudgetExceeded(u128, usize),
    #[error("bisection did not settle within {0} steps")]
    NoConvergence(usize),
    #[error("decomposition needs more than {0} cubes")]
    DecompositionBudget(usize),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Euclid(#[from] EuclidError),
    #[error(transparent)]
    Pi(#[from] PiError),
}

pub const DEFAULT_ZOO_BUDGET: usize = 1 << 20;

/// A piece c + s·P of a union, with P ⊂ Q.
#[derive(Clone)]
pub struct Piece {
    pub center: Point,
    pub scale: Rational,
    pub base: Rc<dyn WindowGenerator>,
}

/// Finitely many scaled copies of generators plus loose points.
#[derive(Clone)]
pub struct Copies {
    dim: usize,
    /// resolution of the loose points
    pub resolution: Rational,
    pub points: Vec<Point>,
    pub copies: Vec<Piece>,
}

impl Copies {
    pub fn new(dim: usize, points: Vec<Point>, copies: Vec<Piece>) -> Self {
        Copies { dim, resolution: Rational::from_integer(0.into()), points, copies }
    }

    pub fn with_resolution(mut self, r: Rational) -> Self {
        self.resolution = r;
        self
    }

    /// Bounding cubes c + s·Q of all copies.
    pub fn boxes(&self) -> Vec<Cube> {
        self.copies.iter().map(|c| Cube::new(c.center.clone(), c.scale.clone())).collect()
    }
}

impl WindowGenerator for Copies {
    fn dim(&self) -> usize {
        self.dim
    }

    fn sample(&self, window: &Cube, resolution: &Rational) -> Result<WindowSample, EuclidError> {
        let mut pts: Vec<Point> = self.points.iter().filter(|p| window.contains(p)).cloned().collect();
        let mut res = self.resolution.clone();
        for c in &self.copies {
            if !window.intersects(&Cube::new(c.center.clone(), c.scale.clone())) {
                continue;
            }
            let local = Cube::new(window.center.iter().zip(&c.center).map(|(w, o)| (w - o) / &c.scale).collect(), &window.half / &c.scale);
            let s = c.base.sample(&local, &(resolution / &c.scale))?;
            res = res.max(&s.resolution * &c.scale);
            for p in s.points {
                pts.push(p.iter().zip(&c.center).map(|(v, o)| v * &c.scale + o).collect());
            }
        }
        Ok(WindowSample { points: pts, resolution: res })
    }

    fn finest_resolution(&self) -> Rational {
        self.copies
            .iter()
            .map(|c| c.base.finest_resolution() * &c.scale)
            .fold(self.resolution.clone(), |a, b| a.max(b))
    }
}
