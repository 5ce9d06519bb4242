use super::{Copies, Piece, ZooError};
use crate::euclid::{hausdorff_points, zoom, Cube, EuclidError, HausdorffDistance, Point, WindowGenerator, WindowSample};
use crate::pisigma::{enumerate_patterns, pattern_delta_sq, PiSchedule, PiSigma};
use crate::rational::{int, pow2, sqrt_le_sqrt_plus, sqrt_lower, Rational};
use num::traits::{One, Signed, Zero};
use std::rc::Rc;

/// a_n, λ_n for n = 1..N+1 and patterns γ_1..γ_N from K₀⁺, on an unbounded frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalParams {
    pub dim: usize,
    pub a: Vec<Rational>,
    pub lam: Vec<Rational>,
    pub gammas: Vec<Vec<Point>>,
}

impl GlobalParams {
    /// a_n = 2^{n²}, λ_n = n·a_n.
    pub fn defaults(dim: usize, gammas: Vec<Vec<Point>>) -> Self {
        let n = gammas.len() + 1;
        let a: Vec<Rational> = (1..=n as i64).map(|k| pow2(k * k)).collect();
        let lam = a.iter().enumerate().map(|(i, x)| x * int(i as i64 + 1)).collect();
        GlobalParams { dim, a, lam, gammas }
    }

    pub fn levels(&self) -> usize {
        self.gammas.len()
    }

    /// (1) a_n + λ_n + 1 ≤ a_{n+1} and (2) a_n/(a_n + λ_n) ≤ 1/n, plus γ_n in K₀⁺.
    pub fn check(&self) -> Result<(), ZooError> {
        let n = self.levels();
        if self.a.len() != n + 1 || self.lam.len() != n + 1 {
            return Err(ZooError::Invalid(format!("need {} values of a and λ", n + 1)));
        }
        if self.a.iter().chain(&self.lam).any(|x| !x.is_positive()) {
            return Err(ZooError::ConditionViolation("positivity".into(), 0));
        }
        for k in 1..=n {
            if &self.a[k - 1] + &self.lam[k - 1] + int(1) > self.a[k] {
                return Err(ZooError::ConditionViolation("(1)".into(), k));
            }
            if &self.a[k - 1] * int(k as i64) > &self.a[k - 1] + &self.lam[k - 1] {
                return Err(ZooError::ConditionViolation("(2)".into(), k));
            }
        }
        for (k, g) in self.gammas.iter().enumerate() {
            let ok = g.iter().any(|p| p.iter().all(Zero::is_zero))
                && g.iter().all(|p| p.len() == self.dim && !p[0].is_negative() && p.iter().all(|c| c.abs() <= Rational::one()));
            if !ok {
                return Err(ZooError::ConditionViolation("γ in K0+".into(), k + 1));
            }
        }
        Ok(())
    }

    /// γ̃_n = a_n·e₁ + λ_n·γ_n.
    pub fn piece(&self, n: usize) -> Vec<Point> {
        self.gammas[n - 1]
            .iter()
            .map(|p| {
                let mut q: Point = p.iter().map(|c| c * &self.lam[n - 1]).collect();
                q[0] += &self.a[n - 1];
                q
            })
            .collect()
    }

    /// Smallest gap within γ̃_n (λ_n for a singleton).
    pub fn delta(&self, n: usize) -> Rational {
        let g = &self.gammas[n - 1];
        let sep = if g.len() < 2 { Rational::one() } else { sqrt_lower(&pattern_delta_sq(g), 32) };
        &self.lam[n - 1] * sep
    }
}

#[derive(Clone)]
pub enum GlobalMode {
    /// A = ⋃ γ̃_n
    Points,
    /// every x ∈ γ̃_n replaced by x + 2^{−n}δ_n·R/4
    Composite(Rc<dyn WindowGenerator>),
}

impl GlobalMode {
    /// R = a πΣ prefix over the two-point patterns with denominator 2.
    pub fn default_composite(dim: usize) -> Result<Self, ZooError> {
        let pats = enumerate_patterns(dim, 2, 2, false);
        let s = PiSchedule::cyclic(dim, pats, 3, 2)?;
        Ok(GlobalMode::Composite(Rc::new(PiSigma::new(s, 3)?)))
    }
}

pub struct GlobalRich {
    pub params: GlobalParams,
    body: Copies,
    /// first coordinate from which the frame is incomplete
    frame: Rational,
    composite: bool,
}

impl GlobalRich {
    pub fn new(params: GlobalParams, mode: GlobalMode) -> Result<Self, ZooError> {
        params.check()?;
        let n = params.levels();
        let frame = params.a[n].clone();
        let (body, composite) = match mode {
            GlobalMode::Points => {
                let pts = (1..=n).flat_map(|k| params.piece(k)).collect();
                (Copies::new(params.dim, pts, Vec::new()), false)
            }
            GlobalMode::Composite(r) => {
                if r.dim() != params.dim {
                    return Err(EuclidError::DimensionMismatch(r.dim(), params.dim).into());
                }
                let mut copies = Vec::new();
                for k in 1..=n {
                    let scale = pow2(-(k as i64) - 2) * params.delta(k);
                    for x in params.piece(k) {
                        copies.push(Piece { center: x, scale: scale.clone(), base: r.clone() });
                    }
                }
                (Copies::new(params.dim, Vec::new(), copies), true)
            }
        };
        let g = GlobalRich { params, body, frame, composite };
        g.check_disjoint()?;
        Ok(g)
    }

    /// Bounding cubes of distinct composite pieces are pairwise disjoint.
    pub fn check_disjoint(&self) -> Result<(), ZooError> {
        let boxes = self.body.boxes();
        for i in 0..boxes.len() {
            for j in i + 1..boxes.len() {
                if boxes[i].intersects(&boxes[j]) {
                    return Err(ZooError::ConditionViolation("piece disjointness".into(), i + 1));
                }
            }
        }
        Ok(())
    }

    pub fn piece_count(&self) -> usize {
        self.body.copies.len()
    }

    pub fn is_composite(&self) -> bool {
        self.composite
    }

    /// a_1·e₁, or the least point of the composite piece placed there.
    pub fn anchor(&self) -> Result<Point, ZooError> {
        let mut x = vec![Rational::zero(); self.params.dim];
        x[0] = self.params.a[0].clone();
        match self.body.copies.iter().find(|c| c.center == x) {
            None => Ok(x),
            Some(c) => {
                let s = c.base.sample(&Cube::unit(self.params.dim), &Rational::zero())?;
                let p = s.points.into_iter().min().ok_or(EuclidError::Empty)?;
                Ok(p.iter().zip(&c.center).map(|(v, o)| v * &c.scale + o).collect())
            }
        }
    }
}

impl WindowGenerator for GlobalRich {
    fn dim(&self) -> usize {
        self.params.dim
    }

    fn sample(&self, window: &Cube, resolution: &Rational) -> Result<WindowSample, EuclidError> {
        if &window.center[0] + &window.half >= self.frame {
            return Err(EuclidError::OutsideFrame);
        }
        self.body.sample(window, resolution)
    }

    fn finest_resolution(&self) -> Rational {
        self.body.finest_resolution()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhotoRow {
    pub n: usize,
    pub t: Rational,
    pub dh: HausdorffDistance,
    /// d·a_n/t_n
    pub bound: Rational,
    /// d/(1+n)
    pub target: Rational,
    pub pass: bool,
}

/// d_H(T_{x,t_n}(A), γ_n) at t_n = a_n + λ_n for the anchor x, against d·a_n/t_n + slack.
/// In composite mode the pieces' own size 2^{−n}δ_n/4·√d enters the slack.
pub fn global_photograph_scan(g: &GlobalRich, levels: &[usize]) -> Result<Vec<PhotoRow>, ZooError> {
    let p = &g.params;
    let x = g.anchor()?;
    let d = int(p.dim as i64);
    let mut rows = Vec::new();
    for &n in levels {
        if n == 0 || n > p.levels() {
            return Err(ZooError::Invalid(format!("level {n} outside 1..{}", p.levels())));
        }
        let t = &p.a[n - 1] + &p.lam[n - 1];
        let z = zoom(g, &x, &t, None)?;
        let mut slack = z.resolution().clone();
        if g.composite {
            // x is off-centre and every piece is spread out by its own radius
            let spread = (1..=p.levels()).map(|k| pow2(-(k as i64) - 2) * p.delta(k)).max().unwrap_or_else(Rational::zero);
            slack += int(2) * &d * spread / &t;
        }
        let dh = HausdorffDistance { squared: hausdorff_points(z.points(), &p.gammas[n - 1]), slack };
        let bound = &d * &p.a[n - 1] / &t;
        let target = &d / int(n as i64 + 1);
        let pass = bound <= target && sqrt_le_sqrt_plus(&dh.squared, &(&bound * &bound), &dh.slack);
        rows.push(PhotoRow { n, t, dh, bound, target, pass });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::zoo::C0Params;

    fn gammas(dim: usize, levels: usize) -> Vec<Vec<Point>> {
        C0Params::default_gammas(dim, levels, 2, 2)
    }

    #[test]
    fn default_conditions() {
        let p = GlobalParams::defaults(1, gammas(1, 4));
        assert_eq!(p.a[0], int(2));
        assert_eq!(p.a[1], int(16));
        assert!(&p.a[0] + &p.lam[0] + int(1) <= p.a[1]);
        p.check().unwrap();
    }

    #[test]
    fn condition_one_violation() {
        let mut p = GlobalParams::defaults(1, gammas(1, 3));
        p.a[1] = int(4);
        assert_eq!(p.check(), Err(ZooError::ConditionViolation("(1)".into(), 1)));
    }

    #[test]
    fn photographs_recover_patterns() {
        let g = GlobalRich::new(GlobalParams::defaults(1, gammas(1, 4)), GlobalMode::Points).unwrap();
        let rows = global_photograph_scan(&g, &[1, 2, 3, 4]).unwrap();
        for r in &rows {
            assert!(r.pass, "{r:?}");
            assert_eq!(r.target, rat(1, r.n as i64 + 1));
        }
    }

    #[test]
    fn frame_is_enforced() {
        let g = GlobalRich::new(GlobalParams::defaults(1, gammas(1, 2)), GlobalMode::Points).unwrap();
        let far = Cube::new(vec![int(505)], int(10));
        assert_eq!(g.sample(&far, &int(0)), Err(EuclidError::OutsideFrame));
    }

    #[test]
    fn composite_pieces_disjoint() {
        let g = GlobalRich::new(GlobalParams::defaults(1, gammas(1, 3)), GlobalMode::default_composite(1).unwrap()).unwrap();
        g.check_disjoint().unwrap();
        assert!(g.piece_count() >= 3);
        let rows = global_photograph_scan(&g, &[1, 2, 3]).unwrap();
        assert!(rows.iter().all(|r| r.pass), "{rows:?}");
    }
}
