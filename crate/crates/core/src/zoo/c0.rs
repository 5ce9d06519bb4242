use super::ZooError;
use crate::euclid::{hausdorff_points, zoom, Cube, EuclidError, HausdorffDistance, Point, WindowGenerator, WindowSample};
use crate::pisigma::enumerate_patterns;
use crate::rational::{int, pow2, sqrt_le_sqrt_plus, sqrt_upper, Rational};
use num::traits::{One, Signed, Zero};

/// a_n, λ_n for n = 1..N+1 and patterns γ_1..γ_N from K₀⁺.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct C0Params {
    pub dim: usize,
    pub a: Vec<Rational>,
    pub lam: Vec<Rational>,
    pub gammas: Vec<Vec<Point>>,
}

impl C0Params {
    /// a_n = 2^{−n²}, λ_n = n·a_n.
    pub fn defaults(dim: usize, gammas: Vec<Vec<Point>>) -> Self {
        let n = gammas.len() + 1;
        let a: Vec<Rational> = (1..=n as i64).map(|k| pow2(-k * k)).collect();
        let lam = a.iter().enumerate().map(|(i, x)| x * int(i as i64 + 1)).collect();
        C0Params { dim, a, lam, gammas }
    }

    /// Levels cycle through the K₀⁺ patterns with denominator ≤ q and ≤ m points.
    pub fn default_gammas(dim: usize, levels: usize, q: u32, m: usize) -> Vec<Vec<Point>> {
        let pats = enumerate_patterns(dim, q, m, true);
        (0..levels).map(|n| pats[n % pats.len()].clone()).collect()
    }

    pub fn levels(&self) -> usize {
        self.gammas.len()
    }

    /// (1) a_1+λ_1 ≤ 1, (2) a_{n+1}+λ_{n+1} < a_n/n, (3) a_n/λ_n strictly decreasing on the prefix,
    /// and every γ_n in K₀⁺ ∩ Q.
    pub fn check(&self) -> Result<(), ZooError> {
        let n = self.levels();
        if self.a.len() != n + 1 || self.lam.len() != n + 1 {
            return Err(ZooError::Invalid(format!("need {} values of a and λ", n + 1)));
        }
        if self.a.iter().chain(&self.lam).any(|x| !x.is_positive()) {
            return Err(ZooError::ConditionViolation("positivity".into(), 0));
        }
        if &self.a[0] + &self.lam[0] > Rational::one() {
            return Err(ZooError::ConditionViolation("(1)".into(), 1));
        }
        for k in 1..=n {
            if &self.a[k] + &self.lam[k] >= &self.a[k - 1] / int(k as i64) {
                return Err(ZooError::ConditionViolation("(2)".into(), k));
            }
            if &self.a[k] / &self.lam[k] >= &self.a[k - 1] / &self.lam[k - 1] {
                return Err(ZooError::ConditionViolation("(3)".into(), k));
            }
        }
        let one = Rational::one();
        for (k, g) in self.gammas.iter().enumerate() {
            let ok = g.iter().any(|p| p.iter().all(Zero::is_zero))
                && g.iter().all(|p| p.len() == self.dim && !p[0].is_negative() && p.iter().all(|c| c.abs() <= one));
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
}

/// {0} ∪ ⋃_{n≤N} γ̃_n; the tail pieces lie within a_{N+1} + √d·λ_{N+1} of 0.
#[derive(Debug, Clone)]
pub struct C0Generator {
    pub params: C0Params,
    points: Vec<Point>,
    resolution: Rational,
}

impl C0Generator {
    pub fn new(params: C0Params) -> Result<Self, ZooError> {
        params.check()?;
        let n = params.levels();
        let mut points = vec![vec![Rational::zero(); params.dim]];
        for k in 1..=n {
            points.extend(params.piece(k));
        }
        points.sort();
        points.dedup();
        let resolution = &params.a[n] + sqrt_upper(&int(params.dim as i64), 48) * &params.lam[n];
        Ok(C0Generator { params, points, resolution })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }
}

impl WindowGenerator for C0Generator {
    fn dim(&self) -> usize {
        self.params.dim
    }

    fn sample(&self, window: &Cube, _resolution: &Rational) -> Result<WindowSample, EuclidError> {
        if window.dim() != self.params.dim {
            return Err(EuclidError::DimensionMismatch(window.dim(), self.params.dim));
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

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct C0ScanRow {
    pub n: usize,
    pub t: Rational,
    pub dh: HausdorffDistance,
    /// d·a_n/t_n
    pub bound: Rational,
    pub pass: bool,
}

/// d_H(T_{0,t_n}(C₀), γ_n) at t_n = a_n + λ_n against d·a_n/t_n + slack.
pub fn c0_theorem_scan(c0: &C0Generator, levels: &[usize]) -> Result<Vec<C0ScanRow>, ZooError> {
    let p = &c0.params;
    let origin = vec![Rational::zero(); p.dim];
    let mut rows = Vec::new();
    for &n in levels {
        if n == 0 || n > p.levels() {
            return Err(ZooError::Invalid(format!("level {n} outside 1..{}", p.levels())));
        }
        let t = &p.a[n - 1] + &p.lam[n - 1];
        let z = zoom(c0, &origin, &t, None)?;
        let dh = HausdorffDistance { squared: hausdorff_points(z.points(), &p.gammas[n - 1]), slack: z.resolution().clone() };
        let bound = int(p.dim as i64) * &p.a[n - 1] / &t;
        let pass = sqrt_le_sqrt_plus(&dh.squared, &(&bound * &bound), &dh.slack);
        rows.push(C0ScanRow { n, t, dh, bound, pass });
    }
    Ok(rows)
}
