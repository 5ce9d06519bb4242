use super::{dist_sq, EuclidError, Point, PointCloudSet, SweepIndex};
use crate::rational::{sqrt_exact, sqrt_upper, to_f64, Rational};
use num::traits::{Signed, Zero};

/// Hausdorff distance between two point sets, kept as an exact square,
/// together with the resolution slack of the sets it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HausdorffDistance {
    pub squared: Rational,
    pub slack: Rational,
}

impl HausdorffDistance {
    /// The distance itself when it is rational.
    pub fn exact(&self) -> Option<Rational> {
        sqrt_exact(&self.squared)
    }

    pub fn value(&self) -> f64 {
        to_f64(&self.squared).sqrt()
    }

    /// Rational upper bound of the point-set distance (within 2^-60 when irrational).
    pub fn upper(&self) -> Rational {
        sqrt_upper(&self.squared, 60)
    }

    /// Point-set distance ≤ b, decided exactly.
    pub fn at_most(&self, b: &Rational) -> bool {
        !b.is_negative() && self.squared <= b * b
    }

    /// Point-set distance < b, decided exactly.
    pub fn below(&self, b: &Rational) -> bool {
        !b.is_negative() && self.squared < b * b
    }
}

fn to_f64_points(ps: &[Point]) -> Vec<Vec<f64>> {
    ps.iter().map(|p| p.iter().map(to_f64).collect()).collect()
}

/// max over a of min over b of |a − b|², exact. Candidates come from an f64 sweep and the
/// minimum is settled in rationals among all points within rounding reach of the f64 optimum.
pub fn directed_sq(a: &[Point], b: &[Point]) -> Rational {
    if a.is_empty() {
        return Rational::zero();
    }
    let bf = to_f64_points(b);
    let scale = bf.iter().flatten().fold(1.0f64, |m, v| m.max(v.abs()));
    let idx = SweepIndex::new(bf);
    let mut worst = Rational::zero();
    for p in a {
        let q: Vec<f64> = p.iter().map(to_f64).collect();
        let best = idx.nearest_sq(&q);
        let reach = best * (1.0 + 1e-9) + 1e-18 * scale * scale + f64::MIN_POSITIVE;
        let mut exact_best: Option<Rational> = None;
        idx.visit_within(&q, |d2, i| {
            if d2 <= reach {
                let e = dist_sq(p, &b[i]);
                if exact_best.as_ref().map_or(true, |x| &e < x) {
                    exact_best = Some(e);
                }
            }
            reach
        });
        let e = exact_best.unwrap_or_else(|| b.iter().map(|y| dist_sq(p, y)).min().expect("non-empty"));
        if e > worst {
            worst = e;
        }
    }
    worst
}

/// Exact squared Hausdorff distance between two non-empty point lists.
pub fn hausdorff_points(a: &[Point], b: &[Point]) -> Rational {
    let ab = directed_sq(a, b);
    let ba = directed_sq(b, a);
    ab.max(ba)
}

pub fn hausdorff_distance(a: &PointCloudSet, b: &PointCloudSet) -> Result<HausdorffDistance, EuclidError> {
    if a.dim() != b.dim() {
        return Err(EuclidError::DimensionMismatch(a.dim(), b.dim()));
    }
    Ok(HausdorffDistance { squared: hausdorff_points(a.points(), b.points()), slack: a.resolution() + b.resolution() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn set1(v: &[Rational]) -> PointCloudSet {
        PointCloudSet::new(1, v.iter().map(|x| vec![x.clone()]).collect(), int(0)).unwrap()
    }

    #[test]
    fn examples() {
        let a = set1(&[int(0), rat(1, 3)]);
        assert_eq!(hausdorff_distance(&a, &a).unwrap().exact(), Some(int(0)));
        let h = hausdorff_distance(&set1(&[int(0)]), &set1(&[int(0), int(1)])).unwrap();
        assert_eq!(h.exact(), Some(int(1)));
        let h = hausdorff_distance(&set1(&[int(-1), int(1)]), &set1(&[int(0)])).unwrap();
        assert_eq!(h.exact(), Some(int(1)));
        assert!(h.at_most(&int(1)) && !h.below(&int(1)));
    }

    #[test]
    fn irrational_values_stay_exact() {
        let a = PointCloudSet::new(2, vec![vec![int(0), int(0)]], int(0)).unwrap();
        let b = PointCloudSet::new(2, vec![vec![int(1), int(1)]], rat(1, 8)).unwrap();
        let h = hausdorff_distance(&a, &b).unwrap();
        assert_eq!(h.squared, int(2));
        assert_eq!(h.exact(), None);
        assert!((h.value() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(h.slack, rat(1, 8));
        assert!(h.upper() * h.upper() >= int(2));
    }

    #[test]
    fn tiny_separations_resolved_exactly() {
        // points far below f64 spacing around 1/2 still get the right nearest neighbour
        let eps = crate::rational::pow2(-80);
        let a = vec![vec![rat(1, 2) + &eps]];
        let b = vec![vec![rat(1, 2)], vec![rat(1, 2) + &eps * int(3)]];
        assert_eq!(directed_sq(&a, &b), &eps * &eps);
    }

    #[test]
    fn dimension_mismatch() {
        let a = set1(&[int(0)]);
        let b = PointCloudSet::new(2, vec![vec![int(0), int(0)]], int(0)).unwrap();
        assert_eq!(hausdorff_distance(&a, &b), Err(EuclidError::DimensionMismatch(1, 2)));
    }
}
