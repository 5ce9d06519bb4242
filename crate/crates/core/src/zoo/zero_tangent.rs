use super::{CantorGenerator, CantorParams, Copies, Piece, ZooError};
use crate::euclid::{Cube, EuclidError, PointCloudSet, WindowGenerator, WindowSample};
use crate::rational::{int, pow2, sqrt_upper, Rational};
use num::traits::Zero;
use std::rc::Rc;

/// A compact set of dimension s whose only tangent at every point is {0}.
pub enum ZeroTangent {
    /// s = 0: {0, e₁/2}
    Finite(PointCloudSet),
    /// 0 < s < d: the d-fold product of a Cantor set of dimension s/d
    Product(CantorGenerator),
    /// s = d: {0} ∪ ⋃ (a_n·e₁ + λ_n·E_n) with a_n = 2^{−n²}, λ_n = n·a_n and dim E_n ↗ d
    Union { copies: Copies, parts: Vec<CantorGenerator>, a: Vec<Rational>, lam: Vec<Rational>, tail: Rational },
}

/// Per-axis dimension of E_n in the s = d union.
fn union_axis_dimension(n: usize) -> f64 {
    1.0 - 1.0 / (n as f64 + 1.0)
}

pub fn zero_tangent_construction(s: f64, dim: usize, depth: usize) -> Result<ZeroTangent, ZooError> {
    let d = dim as f64;
    if dim == 0 || !(0.0..=d).contains(&s) {
        return Err(ZooError::Invalid(format!("dimension {s} outside [0, {dim}]")));
    }
    if s == 0.0 {
        let zero = vec![Rational::zero(); dim];
        let mut half = zero.clone();
        half[0] = Rational::new(1.into(), 2.into());
        return Ok(ZeroTangent::Finite(PointCloudSet::new(dim, vec![zero, half], Rational::zero())?));
    }
    if s < d {
        let p = CantorParams::power_family(s / d, depth)?;
        return Ok(ZeroTangent::Product(CantorGenerator::new(p, dim, depth)?));
    }
    let pieces = depth.max(1);
    let a: Vec<Rational> = (1..=pieces as i64 + 1).map(|n| pow2(-n * n)).collect();
    let lam: Vec<Rational> = a.iter().enumerate().map(|(i, x)| x * int(i as i64 + 1)).collect();
    let mut parts = Vec::with_capacity(pieces);
    let mut copies = Vec::with_capacity(pieces);
    for n in 1..=pieces {
        let p = CantorParams::power_family(union_axis_dimension(n), depth)?;
        let g = CantorGenerator::new(p, dim, depth)?;
        let mut center = vec![Rational::zero(); dim];
        center[0] = a[n - 1].clone();
        copies.push(Piece { center, scale: lam[n - 1].clone(), base: Rc::new(g.clone()) });
        parts.push(g);
    }
    let tail = &a[pieces] + sqrt_upper(&int(dim as i64), 32) * &lam[pieces];
    let copies = Copies::new(dim, vec![vec![Rational::zero(); dim]], copies);
    Ok(ZeroTangent::Union { copies, parts, a, lam, tail })
}

/// Level-k gap of a homogeneous Cantor set: (L_{k−1} − m_k·L_k)/(m_k − 1).
fn gap(p: &CantorParams, k: usize) -> Rational {
    let prev = p.length(k - 1);
    let len = &prev * &p.lam[k - 1];
    (prev - int(p.m[k - 1] as i64) * len) / int(p.m[k - 1] as i64 - 1)
}

fn cantor_scales(g: &CantorGenerator) -> Vec<Rational> {
    (1..g.depth).map(|k| gap(&g.params, k) / int(2)).collect()
}

/// Decreasing scales along which T_{x,t}(E) → {0} for a construction point x.
pub fn zero_tangent_scales(e: &ZeroTangent, x: &[Rational]) -> Result<Vec<Rational>, ZooError> {
    match e {
        ZeroTangent::Finite(_) => Ok((2..6).map(|j| pow2(-j)).collect()),
        ZeroTangent::Product(g) => Ok(cantor_scales(g)),
        ZeroTangent::Union { copies, parts, a, .. } => {
            if x.iter().all(Zero::is_zero) {
                return Ok(a[..parts.len()].iter().map(|v| v / int(2)).collect());
            }
            for (c, g) in copies.copies.iter().zip(parts) {
                if Cube::new(c.center.clone(), c.scale.clone()).contains(x) {
                    return Ok(cantor_scales(g).into_iter().map(|t| t * &c.scale).collect());
                }
            }
            Err(ZooError::Invalid("point lies in no piece".into()))
        }
    }
}

impl ZeroTangent {
    pub fn dim(&self) -> usize {
        WindowGenerator::dim(self)
    }
}

impl WindowGenerator for ZeroTangent {
    fn dim(&self) -> usize {
        match self {
            ZeroTangent::Finite(s) => s.dim(),
            ZeroTangent::Product(g) => g.dim,
            ZeroTangent::Union { copies, .. } => copies.dim(),
        }
    }

    fn sample(&self, window: &Cube, resolution: &Rational) -> Result<WindowSample, EuclidError> {
        match self {
            ZeroTangent::Finite(s) => s.sample(window, resolution),
            ZeroTangent::Product(g) => g.sample(window, resolution),
            ZeroTangent::Union { copies, tail, .. } => {
                let mut s = copies.sample(window, resolution)?;
                // the omitted pieces lie within `tail` of 0
                if window.intersects(&Cube::new(vec![Rational::zero(); copies.dim()], tail.clone())) {
                    s.resolution = s.resolution.max(tail.clone());
                }
                Ok(s)
            }
        }
    }

    fn finest_resolution(&self) -> Rational {
        match self {
            ZeroTangent::Finite(s) => s.finest_resolution(),
            ZeroTangent::Product(g) => g.finest_resolution(),
            ZeroTangent::Union { copies, tail, .. } => copies.finest_resolution().max(tail.clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euclid::tangent_photograph_scan;
    use crate::rational::rat;

    fn origin_set(dim: usize) -> PointCloudSet {
        PointCloudSet::new(dim, vec![vec![Rational::zero(); dim]], Rational::zero()).unwrap()
    }

    #[test]
    fn finite_case() {
        let e = zero_tangent_construction(0.0, 1, 3).unwrap();
        match &e {
            ZeroTangent::Finite(s) => assert_eq!(s.points(), &[vec![int(0)], vec![rat(1, 2)]]),
            _ => panic!("expected a finite set"),
        }
        let scan = tangent_photograph_scan(&e, &[rat(1, 2)], &origin_set(1), &zero_tangent_scales(&e, &[rat(1, 2)]).unwrap(), None).unwrap();
        assert!(scan.rows.iter().all(|r| r.dh.squared.is_zero()));
    }

    #[test]
    fn half_dimensional_family() {
        match zero_tangent_construction(0.5, 1, 4).unwrap() {
            ZeroTangent::Product(g) => {
                assert_eq!(g.params.m, vec![2, 3, 4, 5]);
                assert_eq!(g.params.lam[2], rat(1, 16));
            }
            _ => panic!("expected a Cantor set"),
        }
    }

    #[test]
    fn cantor_profile_shrinks() {
        let e = zero_tangent_construction(0.5, 1, 7).unwrap();
        let x = vec![int(0)];
        let scales = zero_tangent_scales(&e, &x).unwrap();
        let scan = tangent_photograph_scan(&e, &x, &origin_set(1), &scales, None).unwrap();
        let v: Vec<f64> = scan.rows.iter().map(|r| r.dh.value()).collect();
        assert!(v.windows(2).all(|w| w[1] <= w[0]), "{v:?}");
        assert!(*v.last().unwrap() < 0.3, "{v:?}");
    }

    #[test]
    fn full_dimensional_union_at_origin() {
        let e = zero_tangent_construction(1.0, 1, 4).unwrap();
        let x = vec![int(0)];
        let scales = zero_tangent_scales(&e, &x).unwrap();
        assert_eq!(scales[0], rat(1, 4));
        let scan = tangent_photograph_scan(&e, &x, &origin_set(1), &scales, None).unwrap();
        let v: Vec<f64> = scan.rows.iter().map(|r| r.dh.value()).collect();
        assert!(v.windows(2).all(|w| w[1] <= w[0]), "{v:?}");
    }
}
