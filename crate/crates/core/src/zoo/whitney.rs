use super::{Copies, Piece, ZooError};
use crate::euclid::{Cube, Point, PointCloudSet, WindowGenerator};
use crate::rational::{int, sqrt_lower, Rational};
use num::traits::{One, Signed, Zero};
use std::rc::Rc;

/// A closed dyadic cube of Q∖F with diam ≤ dist(cube, F) ≤ 4·diam.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WhitneyCube {
    pub center: Point,
    pub side: Rational,
    pub level: u32,
    pub dist_sq: Rational,
}

impl WhitneyCube {
    pub fn diam_sq(&self) -> Rational {
        int(self.center.len() as i64) * &self.side * &self.side
    }

    /// diam² ≤ dist² ≤ 16·diam², decided exactly.
    pub fn certified(&self) -> bool {
        let d2 = self.diam_sq();
        d2 <= self.dist_sq && self.dist_sq <= int(16) * d2
    }

    pub fn cube(&self) -> Cube {
        Cube::new(self.center.clone(), &self.side / int(2))
    }
}

/// Squared distance from a closed cube to a point.
fn box_dist_sq(c: &Cube, p: &[Rational]) -> Rational {
    let mut s = Rational::zero();
    for (x, o) in p.iter().zip(&c.center) {
        let gap = (x - o).abs() - &c.half;
        if gap > Rational::zero() {
            s += &gap * &gap;
        }
    }
    s
}

/// Top-down dyadic scheme on Q: a cube is kept once diam ≤ dist(cube, F), otherwise split,
/// down to `max_level` (side 2^{1−level}). Cubes still too close at the last level are dropped.
pub fn whitney_decomposition(f: &PointCloudSet, max_level: u32, budget: usize) -> Result<Vec<WhitneyCube>, ZooError> {
    let dim = f.dim();
    if !(1..=2).contains(&dim) {
        return Err(ZooError::Invalid(format!("Whitney decomposition needs d ≤ 2, got {dim}")));
    }
    if f.is_empty() {
        return Err(ZooError::Invalid("F is empty".into()));
    }
    let mut out = Vec::new();
    let mut stack = vec![(vec![Rational::zero(); dim], int(2), 0u32)];
    while let Some((center, side, level)) = stack.pop() {
        let c = Cube::new(center.clone(), &side / int(2));
        let dist_sq = f.points().iter().map(|p| box_dist_sq(&c, p)).min().expect("nonempty");
        let diam_sq = int(dim as i64) * &side * &side;
        if diam_sq <= dist_sq {
            let w = WhitneyCube { center, side, level, dist_sq };
            if !w.certified() {
                return Err(ZooError::ConditionViolation("Whitney sandwich".into(), level as usize));
            }
            out.push(w);
            if out.len() > budget {
                return Err(ZooError::DecompositionBudget(budget));
            }
            continue;
        }
        if level == max_level {
            continue;
        }
        let q = &side / int(4);
        for corner in 0..(1u32 << dim) {
            let child: Point = center
                .iter()
                .enumerate()
                .map(|(i, x)| if corner >> i & 1 == 1 { x + &q } else { x - &q })
                .collect();
            stack.push((child, &side / int(2), level + 1));
        }
    }
    out.sort_by(|a, b| a.level.cmp(&b.level).then_with(|| a.center.cmp(&b.center)));
    Ok(out)
}

/// ⅕·diam, with √2 rounded down in the plane so the copy stays inside its cube.
pub fn glue_scale(c: &WhitneyCube) -> Rational {
    let root = if c.center.len() == 1 { Rational::one() } else { sqrt_lower(&int(c.center.len() as i64), 32) };
    &c.side * root / int(5)
}

/// F ∪ ⋃ (x_n + ⅕·diam(Q_n)·K) over the Whitney cube centres x_n.
pub fn whitney_glue(f: &PointCloudSet, k: Rc<dyn WindowGenerator>, cubes: &[WhitneyCube]) -> Result<Copies, ZooError> {
    if k.dim() != f.dim() {
        return Err(crate::euclid::EuclidError::DimensionMismatch(k.dim(), f.dim()).into());
    }
    let copies = cubes.iter().map(|c| Piece { center: c.center.clone(), scale: glue_scale(c), base: k.clone() }).collect();
    Ok(Copies::new(f.dim(), f.points().to_vec(), copies).with_resolution(f.resolution().clone()))
}
