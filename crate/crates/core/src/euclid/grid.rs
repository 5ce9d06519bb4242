use super::{Cube, EuclidError, Point, WindowGenerator, WindowSample};
use crate::rational::{pow2, sqrt_upper, Rational};
use num::traits::{One, ToPrimitive, Zero};
use num::BigInt;

const GRID_POINT_BUDGET: usize = 1 << 20;

/// Grid points of step h inside window ∩ Q.
fn grid_points(window: &Cube, h: &Rational) -> Result<Vec<Point>, EuclidError> {
    let one = Rational::one();
    let mut ranges = Vec::with_capacity(window.dim());
    let mut total: u128 = 1;
    for c in &window.center {
        let lo = (c - &window.half).max(-one.clone());
        let hi = (c + &window.half).min(one.clone());
        if lo > hi {
            return Ok(Vec::new());
        }
        let klo = (lo / h).ceil().to_integer();
        let khi = (hi / h).floor().to_integer();
        if klo > khi {
            return Ok(Vec::new());
        }
        let n = (&khi - &klo + BigInt::one()).to_u128().unwrap_or(u128::MAX);
        total = total.saturating_mul(n);
        ranges.push((klo, khi));
    }
    if total > GRID_POINT_BUDGET as u128 {
        return Err(EuclidError::BudgetExceeded(total, GRID_POINT_BUDGET));
    }
    let mut out: Vec<Point> = vec![Vec::new()];
    for (klo, khi) in ranges {
        let mut next = Vec::with_capacity(out.len());
        for p in &out {
            let mut k = klo.clone();
            while k <= khi {
                let mut q = p.clone();
                q.push(Rational::from_integer(k.clone()) * h);
                next.push(q);
                k += 1;
            }
        }
        out = next;
    }
    Ok(out)
}

/// Covering radius h·√d/2 of a step-h grid, rounded up.
fn grid_resolution(dim: usize, h: &Rational) -> Rational {
    h * sqrt_upper(&Rational::from_integer(dim.into()), 40) / Rational::from_integer(2.into())
}

/// Q itself, sampled on dyadic grids as fine as requested (down to step 2^-max_level).
#[derive(Debug, Clone)]
pub struct FullCube {
    dim: usize,
    max_level: u32,
}

impl FullCube {
    pub fn new(dim: usize, max_level: u32) -> Self {
        FullCube { dim, max_level }
    }

    fn step_for(&self, resolution: &Rational) -> Rational {
        let mut j = 0;
        while j < self.max_level && grid_resolution(self.dim, &pow2(-(j as i64))) > *resolution {
            j += 1;
        }
        pow2(-(j as i64))
    }
}

impl WindowGenerator for FullCube {
    fn dim(&self) -> usize {
        self.dim
    }

    fn sample(&self, window: &Cube, resolution: &Rational) -> Result<WindowSample, EuclidError> {
        if window.dim() != self.dim {
            return Err(EuclidError::DimensionMismatch(window.dim(), self.dim));
        }
        let h = self.step_for(resolution);
        Ok(WindowSample { points: grid_points(window, &h)?, resolution: grid_resolution(self.dim, &h) })
    }

    fn finest_resolution(&self) -> Rational {
        grid_resolution(self.dim, &pow2(-(self.max_level as i64)))
    }
}

/// hℤ^d ∩ Q at a fixed step, ignoring the requested resolution.
#[derive(Debug, Clone)]
pub struct UniformGrid {
    dim: usize,
    step: Rational,
}

impl UniformGrid {
    pub fn new(dim: usize, step: Rational) -> Result<Self, EuclidError> {
        if step <= Rational::zero() {
            return Err(EuclidError::NonPositiveScale);
        }
        Ok(UniformGrid { dim, step })
    }

    pub fn to_cloud(&self) -> Result<super::PointCloudSet, EuclidError> {
        super::PointCloudSet::new(self.dim, grid_points(&Cube::unit(self.dim), &self.step)?, self.finest_resolution())
    }
}

impl WindowGenerator for UniformGrid {
    fn dim(&self) -> usize {
        self.dim
    }

    fn sample(&self, window: &Cube, _resolution: &Rational) -> Result<WindowSample, EuclidError> {
        if window.dim() != self.dim {
            return Err(EuclidError::DimensionMismatch(window.dim(), self.dim));
        }
        Ok(WindowSample { points: grid_points(window, &self.step)?, resolution: self.finest_resolution() })
    }

    fn finest_resolution(&self) -> Rational {
        grid_resolution(self.dim, &self.step)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn full_cube_levels() {
        let q = FullCube::new(1, 10);
        let s = q.sample(&Cube::unit(1), &rat(1, 8)).unwrap();
        assert_eq!(s.resolution, rat(1, 8));
        assert_eq!(s.points.len(), 9);
        let s = q.sample(&Cube::new(vec![rat(1, 2)], rat(1, 8)), &rat(1, 64)).unwrap();
        assert_eq!(s.points.len(), 9);
        assert_eq!(s.points[0], vec![rat(3, 8)]);
        let s = q.sample(&Cube::unit(1), &int(0)).unwrap();
        assert_eq!(s.resolution, pow2(-11));
    }

    #[test]
    fn window_outside_q_is_empty() {
        let q = FullCube::new(2, 4);
        let s = q.sample(&Cube::new(vec![int(3), int(0)], rat(1, 2)), &rat(1, 4)).unwrap();
        assert!(s.points.is_empty());
    }

    #[test]
    fn uniform_grid_cloud() {
        let g = UniformGrid::new(2, rat(1, 2)).unwrap().to_cloud().unwrap();
        assert_eq!(g.len(), 25);
        assert!(g.resolution() * g.resolution() * int(2) >= rat(1, 8));
    }

    #[test]
    fn budget_guard() {
        let q = FullCube::new(3, 20);
        assert!(matches!(q.sample(&Cube::unit(3), &int(0)), Err(EuclidError::BudgetExceeded(..))));
    }
}
