use super::{C0Params, ZooError, DEFAULT_ZOO_BUDGET};
use crate::euclid::{dist_sq, hausdorff_points, zoom, Cube, EuclidError, HausdorffDistance, Point, WindowGenerator, WindowSample};
use crate::pisigma::pattern_delta_sq;
use crate::rational::{int, pow2, sqrt_lower, sqrt_upper, to_f64, Rational};
use num::traits::{One, Signed, Zero};

/// Maps f_{n,m}(x) = r_n·x + ξ_{n,m} of one level; ξ runs over γ̃_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelMaps {
    pub xi: Vec<Point>,
    pub ratio: Rational,
}

/// Whether the map used at word position j is further scaled by 2^{−j}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IfsKind {
    Cinf,
    Kinf,
}

/// The level-capped system {f_{n,m} : n ≤ nMax} ∪ {f_{0,1} ≡ 0}.
#[derive(Debug, Clone)]
pub struct IfsSystem {
    pub dim: usize,
    pub kind: IfsKind,
    pub levels: Vec<LevelMaps>,
    /// distance bound from 0 to any image f_{n,m}(Q) with n > nMax
    pub truncation: Rational,
    pub depth: usize,
    pub budget: usize,
}

/// Rational lower bound of (8√d)^{−1}·min{|x−y| : x ≠ y ∈ γ}; 1/(8√d) for a singleton.
pub fn delta_tilde(dim: usize, gamma: &[Point]) -> Rational {
    let root_d = sqrt_upper(&int(dim as i64), 32);
    let sep = if gamma.len() < 2 { Rational::one() } else { sqrt_lower(&pattern_delta_sq(gamma), 32) };
    sep / (int(8) * root_d)
}

impl IfsSystem {
    fn build(p: &C0Params, kind: IfsKind, depth: usize) -> Result<Self, ZooError> {
        p.check()?;
        let n_max = p.levels();
        let mut levels = Vec::with_capacity(n_max);
        for n in 1..=n_max {
            let gamma = &p.gammas[n - 1];
            let mut r = &p.lam[n - 1] * delta_tilde(p.dim, gamma) * pow2(-(n as i64));
            if kind == IfsKind::Kinf {
                let cap = Rational::one() / num::pow(int(2 * gamma.len() as i64), n);
                r = r.min(cap);
            }
            levels.push(LevelMaps { xi: p.piece(n), ratio: r });
        }
        // a level-(N+1) image lies within a + √d(λ + r) of 0; later levels are smaller
        // δ̃ ≤ 1/4 since γ ⊂ Q
        let root_d = sqrt_upper(&int(p.dim as i64), 32);
        let next_r = &p.lam[n_max] * pow2(-(n_max as i64 + 3));
        let truncation = &p.a[n_max] + root_d * (&p.lam[n_max] + next_r);
        let sys = IfsSystem { dim: p.dim, kind, levels, truncation, depth, budget: DEFAULT_ZOO_BUDGET };
        sys.check_cylinders()?;
        Ok(sys)
    }

    /// C_∞: r_n = λ_n·δ̃_n·ε_n with ε_n = 2^{−n}.
    pub fn cinf(p: &C0Params, depth: usize) -> Result<Self, ZooError> {
        Self::build(p, IfsKind::Cinf, depth)
    }

    /// K_∞: r_n = min(λ_n·δ̃_n·2^{−n}, (2#γ_n)^{−n}) and position-j scaling 2^{−j}.
    pub fn kinf(p: &C0Params, depth: usize) -> Result<Self, ZooError> {
        Self::build(p, IfsKind::Kinf, depth)
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn map_count(&self) -> usize {
        self.levels.iter().map(|l| l.xi.len()).sum()
    }

    fn alpha(&self, position: usize) -> Rational {
        match self.kind {
            IfsKind::Cinf => Rational::one(),
            IfsKind::Kinf => pow2(-(position as i64)),
        }
    }

    fn max_ratio(&self) -> Rational {
        self.levels.iter().map(|l| l.ratio.clone()).max().unwrap_or_else(Rational::zero)
    }

    /// Resolution of the depth-k point set.
    pub fn resolution(&self, k: usize) -> Rational {
        let root_d = sqrt_upper(&int(self.dim as i64), 32);
        let mut s = Rational::one();
        let rm = self.max_ratio();
        for j in 1..=k {
            s *= &rm * self.alpha(j);
        }
        (root_d * s).max(self.truncation.clone())
    }

    /// The nonzero maps (level n, index m) with their image cubes ξ + r·Q pairwise disjoint
    /// and inside Q; 0 lies in no cube.
    pub fn check_cylinders(&self) -> Result<(), ZooError> {
        let cubes: Vec<(usize, Cube)> = self
            .levels
            .iter()
            .enumerate()
            .flat_map(|(n, l)| l.xi.iter().map(move |x| (n + 1, Cube::new(x.clone(), l.ratio.clone()))))
            .collect();
        let q = Cube::unit(self.dim);
        let origin = vec![Rational::zero(); self.dim];
        for (i, (n, c)) in cubes.iter().enumerate() {
            if !q.contains_cube(c) || c.contains(&origin) {
                return Err(ZooError::ConditionViolation("cylinder in Q∖{0}".into(), *n));
            }
            for (m, d) in &cubes[i + 1..] {
                if c.intersects(d) {
                    return Err(ZooError::ConditionViolation("cylinder disjointness".into(), (*n).max(*m)));
                }
            }
        }
        Ok(())
    }

    /// f_w(0) for a word of (level, index) pairs, 1-based levels, outermost map first.
    pub fn word_point(&self, word: &[(usize, usize)]) -> Result<(Point, Rational), ZooError> {
        let mut p = vec![Rational::zero(); self.dim];
        let mut s = Rational::one();
        for (j, &(n, m)) in word.iter().enumerate() {
            let l = self.levels.get(n.wrapping_sub(1)).ok_or_else(|| ZooError::Invalid(format!("level {n} outside the cap")))?;
            let xi = l.xi.get(m).ok_or_else(|| ZooError::Invalid(format!("map {m} outside level {n}")))?;
            for (c, x) in p.iter_mut().zip(xi) {
                *c += &s * x;
            }
            s *= &l.ratio * self.alpha(j + 1);
        }
        Ok((p, s))
    }

    /// {f_w(0) : |w| ≤ k} inside a window, pruning cylinders f_w(Q) that miss it.
    pub fn points_in(&self, window: &Cube, k: usize) -> Result<Vec<Point>, ZooError> {
        let mut out = Vec::new();
        let mut stack = vec![(vec![Rational::zero(); self.dim], Rational::one(), 0usize)];
        while let Some((p, s, depth)) = stack.pop() {
            if !window.intersects(&Cube::new(p.clone(), s.clone())) {
                continue;
            }
            if window.contains(&p) {
                out.push(p.clone());
                if out.len() > self.budget {
                    return Err(ZooError::BudgetExceeded(out.len() as u128, self.budget));
                }
            }
            if depth == k {
                continue;
            }
            let a = self.alpha(depth + 1);
            for l in &self.levels {
                let child = &s * &l.ratio * &a;
                for xi in &l.xi {
                    let q: Point = p.iter().zip(xi).map(|(c, x)| c + &s * x).collect();
                    stack.push((q, child.clone(), depth + 1));
                }
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Depth-k set restricted to Q as a generator.
    pub fn at_depth(&self, k: usize) -> IfsSystem {
        IfsSystem { depth: k, ..self.clone() }
    }

    /// d_H(T_{f_w(0), r_w·t}(C_k), T_{0,t}(C_{k−|w|})), which vanishes when the cylinders are disjoint.
    pub fn self_similarity_check(&self, word: &[(usize, usize)], t: &Rational) -> Result<HausdorffDistance, ZooError> {
        if word.len() > self.depth {
            return Err(ZooError::Invalid("word longer than depth".into()));
        }
        if *t > Rational::one() || !t.is_positive() {
            return Err(ZooError::Invalid("scale must lie in (0, 1]".into()));
        }
        let (x, r) = self.word_point(word)?;
        let outer = zoom(self, &x, &(&r * t), None)?;
        let inner = zoom(&self.at_depth(self.depth - word.len()), &vec![Rational::zero(); self.dim], t, None)?;
        Ok(HausdorffDistance { squared: hausdorff_points(outer.points(), inner.points()), slack: Rational::zero() })
    }
}

impl WindowGenerator for IfsSystem {
    fn dim(&self) -> usize {
        self.dim
    }

    fn sample(&self, window: &Cube, resolution: &Rational) -> Result<WindowSample, EuclidError> {
        if window.dim() != self.dim {
            return Err(EuclidError::DimensionMismatch(window.dim(), self.dim));
        }
        let k = (0..=self.depth).find(|&j| self.resolution(j) <= *resolution).unwrap_or(self.depth);
        let points = self.points_in(window, k).map_err(|e| match e {
            ZooError::BudgetExceeded(n, b) => EuclidError::BudgetExceeded(n, b),
            other => EuclidError::Invalid(other.to_string()),
        })?;
        Ok(WindowSample { points, resolution: self.resolution(k) })
    }

    fn finest_resolution(&self) -> Rational {
        self.resolution(self.depth)
    }
}

/// Fixed point of f_w iterated forever: ξ_w/(1 − r_w) for the C_∞ system.
pub fn periodic_point(sys: &IfsSystem, word: &[(usize, usize)]) -> Result<Point, ZooError> {
    if sys.kind != IfsKind::Cinf || word.is_empty() {
        return Err(ZooError::Invalid("periodic points need a nonempty C_∞ word".into()));
    }
    let (p, r) = sys.word_point(word)?;
    let inv = Rational::one() / (Rational::one() - r);
    Ok(p.iter().map(|c| c * &inv).collect())
}

/// Σ_{|w|=k} diam(f_w(Q))^t = (2√d)^t·2^{−k(k+1)t/2}·S(t)^k with S(t) = Σ_n #γ_n r_n^t
/// (partial sum over the cap plus the tail bound Σ_{n>N} 2^{−nt}).
pub fn kinf_cover_sum(sys: &IfsSystem, k: usize, t: f64) -> Result<f64, ZooError> {
    if sys.kind != IfsKind::Kinf || !(t > 0.0) {
        return Err(ZooError::Invalid("cover sums need the K_∞ system and t > 0".into()));
    }
    for (i, l) in sys.levels.iter().enumerate() {
        let n = i + 1;
        if l.ratio > Rational::one() / num::pow(int(2 * l.xi.len() as i64), n) {
            return Err(ZooError::ScheduleViolation(format!("r_{n} exceeds (2#γ_{n})^-{n}")));
        }
    }
    let n_max = sys.levels.len();
    if (n_max as f64 + 1.0) * t < 1.0 {
        return Err(ZooError::ScheduleViolation("level cap too small for the tail bound".into()));
    }
    let log_c = kinf_log2_c(sys, t);
    let kf = k as f64;
    let log2 = t * (2.0 * (sys.dim as f64).sqrt()).log2() - kf * (kf + 1.0) * t / 2.0 + kf * log_c;
    Ok(log2.exp2())
}

fn kinf_log2_c(sys: &IfsSystem, t: f64) -> f64 {
    let n_max = sys.levels.len() as i32;
    let partial: f64 = sys.levels.iter().map(|l| l.xi.len() as f64 * to_f64(&l.ratio).powf(t)).sum();
    let tail = 2f64.powf(-(n_max as f64 + 1.0) * t) / (1.0 - 2f64.powf(-t));
    (partial + tail).log2()
}

/// First k ≥ 1 where (2√d)^t·2^{−k(k−1)t/2}·c(t)^k < ε.
pub fn kinf_predicted_k(sys: &IfsSystem, t: f64, eps: f64) -> usize {
    let log_c = kinf_log2_c(sys, t);
    let lead = t * (2.0 * (sys.dim as f64).sqrt()).log2();
    (1..)
        .find(|&k| {
            let kf = k as f64;
            lead - kf * (kf - 1.0) * t / 2.0 + kf * log_c < eps.log2()
        })
        .unwrap_or(usize::MAX)
}

/// Cylinder diameters in the exact form 2√d·r_w, squared.
pub fn cylinder_diam_sq(sys: &IfsSystem, word: &[(usize, usize)]) -> Result<Rational, ZooError> {
    let (_, r) = sys.word_point(word)?;
    let z = vec![Rational::zero(); sys.dim];
    let corner = vec![r.clone(); sys.dim];
    Ok(int(4) * dist_sq(&z, &corner))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn params(levels: usize) -> C0Params {
        C0Params::defaults(1, C0Params::default_gammas(1, levels, 2, 2))
    }

    #[test]
    fn depth_one_is_c0_prefix() {
        let p = params(4);
        let sys = IfsSystem::cinf(&p, 1).unwrap();
        let got = sys.points_in(&Cube::unit(1), 1).unwrap();
        let mut want = vec![vec![Rational::zero()]];
        for n in 1..=4 {
            want.extend(p.piece(n));
        }
        want.sort();
        want.dedup();
        assert_eq!(got, want);
    }

    #[test]
    fn level_ratios_are_uniform_and_small() {
        let sys = IfsSystem::cinf(&params(4), 2).unwrap();
        assert_eq!(sys.levels[0].xi, vec![vec![rat(1, 2)]]);
        assert!(sys.levels[0].ratio <= rat(1, 32));
        sys.check_cylinders().unwrap();
    }

    #[test]
    fn kinf_ratio_bound() {
        let sys = IfsSystem::kinf(&params(5), 2).unwrap();
        for (i, l) in sys.levels.iter().enumerate() {
            let bound = Rational::one() / num::pow(int(2 * l.xi.len() as i64), i + 1);
            assert!(l.ratio <= bound);
        }
        // two-point levels need r_n ≤ 4^{-n}
        let two = sys.levels.iter().position(|l| l.xi.len() == 2).unwrap();
        assert!(sys.levels[two].ratio <= Rational::one() / num::pow(int(4), two + 1));
    }

    #[test]
    fn self_similarity_is_exact() {
        let sys = IfsSystem::cinf(&params(3), 3).unwrap();
        for w in [vec![(1, 0)], vec![(2, 1)], vec![(2, 0), (1, 0)]] {
            let dh = sys.self_similarity_check(&w, &rat(1, 2)).unwrap();
            assert_eq!(dh.squared, Rational::zero(), "{w:?}");
        }
    }

    #[test]
    fn periodic_point_is_fixed() {
        let sys = IfsSystem::cinf(&params(3), 2).unwrap();
        let x = periodic_point(&sys, &[(1, 0)]).unwrap();
        let l = &sys.levels[0];
        let fx: Point = x.iter().zip(&l.xi[0]).map(|(c, xi)| c * &l.ratio + xi).collect();
        assert_eq!(fx, x);
    }

    #[test]
    fn cover_sums_decrease() {
        let sys = IfsSystem::kinf(&params(6), 2).unwrap();
        let sums: Vec<f64> = (1..=6).map(|k| kinf_cover_sum(&sys, k, 0.5).unwrap()).collect();
        assert!(sums.windows(2).all(|w| w[1] < w[0]), "{sums:?}");
        let k = kinf_predicted_k(&sys, 0.5, 1e-6);
        assert!(kinf_cover_sum(&sys, k, 0.5).unwrap() < 1e-6);
    }

    #[test]
    fn windowed_sampling_prunes() {
        let sys = IfsSystem::cinf(&params(3), 3).unwrap();
        let all = sys.points_in(&Cube::unit(1), 3).unwrap();
        let w = Cube::new(vec![rat(1, 2)], rat(1, 64));
        let part = sys.points_in(&w, 3).unwrap();
        let want: Vec<Point> = all.into_iter().filter(|p| w.contains(p)).collect();
        assert_eq!(part, want);
    }
}
