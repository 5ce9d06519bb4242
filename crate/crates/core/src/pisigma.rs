//! Projections πΣ ⊂ Q of symbol spaces whose levels are finite point patterns γ_n ⊂ (−1,1)^d,
//! πi = Σ ρ(k) i(k), with radii small enough that the nested cubes stay 8√d-separated.

use crate::euclid::{
    dist_sq, hausdorff_points, similar_up_to_with, zoom, zoom_points, Cube, EuclidError, HausdorffDistance, Point,
    PointCloudSet, SimilarityMatch, SimilaritySettings, WindowGenerator, WindowSample,
};
use crate::rational::{int, rat, sqrt_exact, sqrt_le_sqrt_plus, sqrt_lower, sqrt_upper, to_f64, Rational};
use num::integer::Integer;
use num::traits::{One, Signed, Zero};
use num::BigInt;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PiError {
    #[error("invalid patterns: {0}")]
    InvalidGammas(String),
    #[error("schedule violates the separation constraint: {0}")]
    ScheduleViolation(String),
    #[error("{0} nodes exceed the budget of {1}")]
    BudgetExceeded(u128, usize),
    #[error("pattern {0} is not in the occurrence plan")]
    PatternUnknown(usize),
    #[error("bad coding: {0}")]
    BadCoding(String),
    #[error("set is not within the block radius: {0}")]
    NotInBall(String),
    #[error(transparent)]
    Euclid(#[from] EuclidError),
}

pub const DEFAULT_NODE_BUDGET: usize = 1 << 20;

/// Finite sets S ∋ 0 of points of (1/q)ℤ^d ∩ (−1,1)^d with at most `max_points` points,
/// ordered by exact common denominator, then size, then lexicographically.
/// With `nonnegative_first` only points with first coordinate ≥ 0 are used.
pub fn enumerate_patterns(dim: usize, max_denominator: u32, max_points: usize, nonnegative_first: bool) -> Vec<Vec<Point>> {
    let mut out = Vec::new();
    if dim == 0 || max_points == 0 {
        return out;
    }
    let origin = vec![Rational::zero(); dim];
    for q in 1..=max_denominator.max(1) {
        let qi = q as i64;
        // lattice (1/q)ℤ^d ∩ (−1,1)^d minus the origin
        let mut lattice: Vec<Point> = vec![Vec::new()];
        for axis in 0..dim {
            let lo = if nonnegative_first && axis == 0 { 0 } else { -(qi - 1) };
            let mut next = Vec::new();
            for p in &lattice {
                for k in lo..qi {
                    let mut p2 = p.clone();
                    p2.push(rat(k, qi));
                    next.push(p2);
                }
            }
            lattice = next;
        }
        lattice.retain(|p| *p != origin);
        lattice.sort();
        let mut group: Vec<Vec<Point>> = Vec::new();
        let qb = BigInt::from(q);
        for size in 0..max_points.min(lattice.len() + 1) {
            for combo in combinations(lattice.len(), size) {
                let mut set: Vec<Point> = combo.iter().map(|&i| lattice[i].clone()).collect();
                let den = set.iter().flatten().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
                if den != qb {
                    continue;
                }
                set.push(origin.clone());
                set.sort();
                group.push(set);
            }
        }
        group.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out.extend(group);
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// δ² for a pattern: squared min distance between distinct points and from each point to ∂Q.
pub fn pattern_delta_sq(gamma: &[Point]) -> Rational {
    let one = Rational::one();
    let mut best: Option<Rational> = None;
    let mut take = |v: Rational| {
        if best.as_ref().map_or(true, |b| v < *b) {
            best = Some(v);
        }
    };
    for (i, x) in gamma.iter().enumerate() {
        let to_edge = x.iter().map(|c| &one - c.abs()).min().expect("dim ≥ 1");
        take(&to_edge * &to_edge);
        for y in &gamma[i + 1..] {
            take(dist_sq(x, y));
        }
    }
    best.expect("non-empty pattern")
}

/// Rational lower bound of √x, exact for rational roots.
fn root_lower(x: &Rational) -> Rational {
    sqrt_exact(x).unwrap_or_else(|| sqrt_lower(x, 48))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiConfig {
    pub dim: usize,
    pub gamma_denominator: u32,
    pub max_points: usize,
    #[serde(default = "default_margin")]
    pub rule_margin: u32,
    pub depth: usize,
    #[serde(default)]
    pub nonnegative_first: bool,
}

fn default_margin() -> u32 {
    2
}

/// Levels γ_1..γ_L, δ_n, and r_1..r_{L+1}; pattern p of the base list sits at levels p+1+jP.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiSchedule {
    pub dim: usize,
    pub patterns: Vec<Vec<Point>>,
    /// base pattern index of each level
    pub plan: Vec<usize>,
    pub gammas: Vec<Vec<Point>>,
    pub delta_sq: Vec<Rational>,
    pub rs: Vec<Rational>,
    pub rhos: Vec<Rational>,
}

impl PiSchedule {
    /// Cyclic plan over `patterns` for `levels` levels; r_{n+1} = min(δ_n/(8√d·margin), r_n/2).
    pub fn cyclic(dim: usize, patterns: Vec<Vec<Point>>, levels: usize, margin: u32) -> Result<Self, PiError> {
        if patterns.is_empty() {
            return Err(PiError::InvalidGammas("no patterns".into()));
        }
        let plan: Vec<usize> = (0..levels).map(|n| n % patterns.len()).collect();
        Self::with_plan(dim, patterns, plan, None, margin)
    }

    pub fn from_config(c: &PiConfig) -> Result<Self, PiError> {
        let pats = enumerate_patterns(c.dim, c.gamma_denominator, c.max_points, c.nonnegative_first);
        Self::cyclic(c.dim, pats, c.depth, c.rule_margin.max(1))
    }

    /// Explicit radii (r_1..r_{L+1}) are validated; otherwise the default rule is used.
    pub fn with_plan(
        dim: usize,
        patterns: Vec<Vec<Point>>,
        plan: Vec<usize>,
        explicit_rs: Option<Vec<Rational>>,
        margin: u32,
    ) -> Result<Self, PiError> {
        if dim == 0 || plan.is_empty() {
            return Err(PiError::InvalidGammas("need dim ≥ 1 and at least one level".into()));
        }
        let origin = vec![Rational::zero(); dim];
        for (i, g) in patterns.iter().enumerate() {
            if g.iter().any(|p| p.len() != dim) {
                return Err(PiError::InvalidGammas(format!("pattern {i} has wrong dimension")));
            }
            if !g.contains(&origin) {
                return Err(PiError::InvalidGammas(format!("pattern {i} misses the origin")));
            }
            if g.iter().flatten().any(|c| c.abs() >= Rational::one()) {
                return Err(PiError::InvalidGammas(format!("pattern {i} leaves (-1,1)^d")));
            }
            let mut s = g.clone();
            s.sort();
            s.dedup();
            if s.len() != g.len() {
                return Err(PiError::InvalidGammas(format!("pattern {i} repeats a point")));
            }
        }
        if let Some(&p) = plan.iter().find(|&&p| p >= patterns.len()) {
            return Err(PiError::PatternUnknown(p));
        }
        let gammas: Vec<Vec<Point>> = plan.iter().map(|&p| patterns[p].clone()).collect();
        let delta_sq: Vec<Rational> = gammas.iter().map(|g| pattern_delta_sq(g)).collect();
        let rs = match explicit_rs {
            Some(rs) => rs,
            None => {
                let sd = sqrt_upper(&int(dim as i64), 48);
                let denom = int(8) * sd * int(margin.max(1) as i64);
                let mut rs = vec![Rational::one()];
                for d2 in &delta_sq {
                    let cap = root_lower(d2) / &denom;
                    let half = rs.last().expect("r_1") / int(2);
                    rs.push(cap.min(half));
                }
                rs
            }
        };
        let mut rhos = Vec::with_capacity(rs.len());
        let mut acc = Rational::one();
        for r in &rs {
            acc *= r;
            rhos.push(acc.clone());
        }
        let s = PiSchedule { dim, patterns, plan, gammas, delta_sq, rs, rhos };
        s.check()?;
        Ok(s)
    }

    /// r_1 = 1, strictly decreasing, positive, and 64·d·r_{n+1}² ≤ δ_n².
    pub fn check(&self) -> Result<(), PiError> {
        if self.rs.len() != self.gammas.len() + 1 {
            return Err(PiError::ScheduleViolation(format!("{} radii for {} levels", self.rs.len(), self.gammas.len())));
        }
        if !self.rs[0].is_one() {
            return Err(PiError::ScheduleViolation("r_1 must be 1".into()));
        }
        for n in 1..self.rs.len() {
            if !self.rs[n].is_positive() || self.rs[n] >= self.rs[n - 1] {
                return Err(PiError::ScheduleViolation(format!("r_{} is not below r_{}", n + 1, n)));
            }
            let lhs = int(64) * int(self.dim as i64) * &self.rs[n] * &self.rs[n];
            if lhs > self.delta_sq[n - 1] {
                return Err(PiError::ScheduleViolation(format!("8√d·r_{} > δ_{}", n + 1, n)));
            }
        }
        Ok(())
    }

    pub fn levels(&self) -> usize {
        self.gammas.len()
    }

    /// r_n for 1-based n ≤ L+1.
    pub fn r(&self, n: usize) -> &Rational {
        &self.rs[n - 1]
    }

    /// ρ(n) with ρ(0) = 1.
    pub fn rho(&self, n: usize) -> Rational {
        if n == 0 {
            Rational::one()
        } else {
            self.rhos[n - 1].clone()
        }
    }

    pub fn gamma(&self, n: usize) -> &[Point] {
        &self.gammas[n - 1]
    }

    /// Levels ≤ depth carrying base pattern p.
    pub fn occurrences(&self, p: usize, depth: usize) -> Vec<usize> {
        (1..=depth.min(self.levels())).filter(|&n| self.plan[n - 1] == p).collect()
    }

    pub fn pattern_index(&self, pattern: &[Point]) -> Option<usize> {
        let mut s = pattern.to_vec();
        s.sort();
        self.patterns.iter().position(|p| *p == s)
    }

    pub fn origin_index(&self, n: usize) -> usize {
        self.gamma(n).iter().position(|p| p.iter().all(Zero::is_zero)).expect("origin checked")
    }

    /// Resolution tag of depth-n points: 2√d·ρ(n+1), rounded up.
    pub fn resolution(&self, n: usize) -> Rational {
        int(2) * sqrt_upper(&int(self.dim as i64), 48) * self.rho(n + 1)
    }

    pub fn point_count(&self, depth: usize) -> u128 {
        self.gammas[..depth].iter().map(|g| g.len() as u128).product()
    }

    /// Σ_{k≤n} ρ(k)·i(k) for a coding of length n.
    pub fn project(&self, coding: &[usize]) -> Result<Point, PiError> {
        self.check_coding(coding)?;
        let mut s = vec![Rational::zero(); self.dim];
        for (k, &c) in coding.iter().enumerate() {
            let rho = self.rho(k + 1);
            for (a, b) in s.iter_mut().zip(&self.gammas[k][c]) {
                *a += &rho * b;
            }
        }
        Ok(s)
    }

    pub fn check_coding(&self, coding: &[usize]) -> Result<(), PiError> {
        if coding.len() > self.levels() {
            return Err(PiError::BadCoding(format!("length {} exceeds {} levels", coding.len(), self.levels())));
        }
        for (k, &c) in coding.iter().enumerate() {
            if c >= self.gammas[k].len() {
                return Err(PiError::BadCoding(format!("label {c} at level {}", k + 1)));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        use crate::rational::fmt_rational;
        let pt = |p: &Point| p.iter().map(fmt_rational).collect::<Vec<_>>();
        serde_json::json!({
            "dim": self.dim,
            "patterns": self.patterns.iter().map(|g| g.iter().map(pt).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "plan": self.plan,
            "delta_sq": self.delta_sq.iter().map(fmt_rational).collect::<Vec<_>>(),
            "rs": self.rs.iter().map(fmt_rational).collect::<Vec<_>>(),
        })
    }
}

/// Depth-n points Σρ(k)i(k), generated with cylinder pruning against query windows.
#[derive(Debug, Clone)]
pub struct PiSigma {
    pub schedule: PiSchedule,
    pub depth: usize,
    pub budget: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthPoint {
    pub coding: Vec<usize>,
    pub point: Point,
}

impl PiSigma {
    pub fn new(schedule: PiSchedule, depth: usize) -> Result<Self, PiError> {
        if depth == 0 || depth > schedule.levels() {
            return Err(PiError::BadCoding(format!("depth {depth} outside 1..{}", schedule.levels())));
        }
        Ok(PiSigma { schedule, depth, budget: DEFAULT_NODE_BUDGET })
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    /// Depth-n points whose cube s_n + ρ(n+1)Q meets the window, in coding order.
    pub fn window_points(&self, window: &Cube, n: usize) -> Result<Vec<DepthPoint>, PiError> {
        let s = &self.schedule;
        if n == 0 || n > s.levels() {
            return Err(PiError::BadCoding(format!("depth {n} outside 1..{}", s.levels())));
        }
        if window.dim() != s.dim {
            return Err(EuclidError::DimensionMismatch(window.dim(), s.dim).into());
        }
        let mut out = Vec::new();
        let mut visited: usize = 0;
        let mut stack: Vec<(Vec<usize>, Point)> = vec![(Vec::new(), vec![Rational::zero(); s.dim])];
        while let Some((coding, sum)) = stack.pop() {
            let m = coding.len();
            if !window.intersects(&Cube::new(sum.clone(), s.rho(m + 1))) {
                continue;
            }
            visited += 1;
            if visited > self.budget {
                return Err(PiError::BudgetExceeded(s.point_count(n), self.budget));
            }
            if m == n {
                out.push(DepthPoint { coding, point: sum });
                continue;
            }
            let rho = s.rho(m + 1);
            for (c, g) in s.gammas[m].iter().enumerate().rev() {
                let mut child = coding.clone();
                child.push(c);
                let p: Point = sum.iter().zip(g).map(|(a, b)| a + &rho * b).collect();
                stack.push((child, p));
            }
        }
        Ok(out)
    }

    pub fn all_points(&self, n: usize) -> Result<Vec<DepthPoint>, PiError> {
        self.window_points(&Cube::unit(self.schedule.dim), n)
    }

    pub fn cloud(&self, n: usize) -> Result<PointCloudSet, PiError> {
        let pts = self.all_points(n)?.into_iter().map(|d| d.point).collect();
        Ok(PointCloudSet::new(self.schedule.dim, pts, self.schedule.resolution(n))?)
    }

    fn depth_for(&self, resolution: &Rational) -> usize {
        (1..=self.depth).find(|&n| self.schedule.resolution(n) <= *resolution).unwrap_or(self.depth)
    }
}

impl WindowGenerator for PiSigma {
    fn dim(&self) -> usize {
        self.schedule.dim
    }

    fn sample(&self, window: &Cube, resolution: &Rational) -> Result<WindowSample, EuclidError> {
        let n = self.depth_for(resolution);
        let pts = self.window_points(window, n).map_err(|e| match e {
            PiError::Euclid(e) => e,
            PiError::BudgetExceeded(a, b) => EuclidError::BudgetExceeded(a, b),
            other => EuclidError::Invalid(other.to_string()),
        })?;
        Ok(WindowSample { points: pts.into_iter().map(|d| d.point).collect(), resolution: self.schedule.resolution(n) })
    }

    fn finest_resolution(&self) -> Rational {
        self.schedule.resolution(self.depth)
    }
}

/// 0 at every level carrying `pattern`, the first label elsewhere.
pub fn special_point_coding(s: &PiSchedule, pattern: usize, depth: usize) -> Result<Vec<usize>, PiError> {
    if pattern >= s.patterns.len() {
        return Err(PiError::PatternUnknown(pattern));
    }
    if depth > s.levels() {
        return Err(PiError::BadCoding(format!("depth {depth} exceeds {} levels", s.levels())));
    }
    Ok((1..=depth).map(|n| if s.plan[n - 1] == pattern { s.origin_index(n) } else { 0 }).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TangentMode {
    Dense,
    AllPoints,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PiTangentReport {
    pub level: usize,
    pub mode: TangentMode,
    pub scale: Rational,
    /// distance to γ_k (dense) or to ½γ_k + b (all points)
    pub dh: HausdorffDistance,
    /// squared bound without slack: (2√d·r_{k+1})² dense, (√d·r_{k+1})² all points
    pub bound_sq: Rational,
    pub similarity: Option<SimilarityMatch>,
    pub pass: bool,
}

/// Dense mode: d_H(T_{x,ρ(k)}(πΣ), γ_k) ≤ 2√d·r_{k+1} + slack, needs coding(k) = 0.
/// All-points mode: zoom with the doubled screen 2ρ(k); the view is ½γ_k + b with b = −i(k)/2
/// up to √d·r_{k+1}, and the similarity search must recover λ ∈ [1.9, 2.1] with residual ≤ 2√d·r_{k+1}.
pub fn verify_pisigma_tangent(gen: &PiSigma, coding: &[usize], k: usize, mode: TangentMode) -> Result<PiTangentReport, PiError> {
    let s = &gen.schedule;
    if coding.len() != gen.depth {
        return Err(PiError::BadCoding(format!("coding length {} but depth {}", coding.len(), gen.depth)));
    }
    if k == 0 || k > gen.depth {
        return Err(PiError::BadCoding(format!("level {k} outside 1..{}", gen.depth)));
    }
    let x = s.project(coding)?;
    let gamma = s.gamma(k).to_vec();
    let d = int(s.dim as i64);
    let r = s.r(k + 1).clone();
    match mode {
        TangentMode::Dense => {
            if coding[k - 1] != s.origin_index(k) {
                return Err(PiError::BadCoding(format!("coordinate {k} is not the origin")));
            }
            let t = s.rho(k);
            let z = zoom(gen, &x, &t, None)?;
            let dh = HausdorffDistance { squared: hausdorff_points(z.points(), &gamma), slack: z.resolution().clone() };
            let bound_sq = int(4) * &d * &r * &r;
            let pass = sqrt_le_sqrt_plus(&dh.squared, &bound_sq, &dh.slack);
            Ok(PiTangentReport { level: k, mode, scale: t, dh, bound_sq, similarity: None, pass })
        }
        TangentMode::AllPoints => {
            let t = s.rho(k) * int(2);
            let z = zoom(gen, &x, &t, None)?;
            let ik = &gamma[coding[k - 1]];
            let half = rat(1, 2);
            let target: Vec<Point> = gamma.iter().map(|y| y.iter().zip(ik).map(|(a, b)| (a - b) * &half).collect()).collect();
            let dh = HausdorffDistance { squared: hausdorff_points(z.points(), &target), slack: z.resolution().clone() };
            let bound_sq = &d * &r * &r;
            let tol_rat = int(2) * sqrt_upper(&d, 48) * &r + z.resolution() * int(2);
            let tol = to_f64(&tol_rat);
            let e = PointCloudSet::new(s.dim, gamma.clone(), Rational::zero())?;
            let settings = SimilaritySettings {
                anchors_a: Some(vec![vec![Rational::zero(); s.dim]]),
                anchors_b: Some(vec![ik.clone()]),
                ..Default::default()
            };
            let m = similar_up_to_with(&z, &e, 0.25, tol, &settings);
            let similarity = m.matched().cloned();
            // a one-point pattern fixes no ratio, so only the distance bound is informative
            let sim_ok = gamma.len() == 1 || similarity.as_ref().is_some_and(|m| (1.9..=2.1).contains(&m.lambda) && m.residual <= tol);
            let pass = sim_ok && sqrt_le_sqrt_plus(&dh.squared, &bound_sq, &dh.slack);
            Ok(PiTangentReport { level: k, mode, scale: t, dh, bound_sq, similarity, pass })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationReport {
    pub depth: usize,
    pub points: usize,
    pub pairs: usize,
    pub nested: bool,
    pub injection: bool,
    pub continuity: bool,
    /// min over pairs of |πi−πj|² / (16·d·ρ(n₀+1)²)
    pub min_injection_ratio: Rational,
}

/// Nestedness of all cubes up to `depth`, and the injection and continuity bounds over all
/// pairs of depth points, decided in exact rationals.
pub fn separation_check(gen: &PiSigma, depth: usize) -> Result<SeparationReport, PiError> {
    let s = &gen.schedule;
    let mut nested = true;
    for n in 1..=depth {
        for p in gen.all_points(n)? {
            let parent = s.project(&p.coding[..n - 1])?;
            let outer = Cube::new(parent, s.rho(n));
            if !outer.contains_cube(&Cube::new(p.point.clone(), s.rho(n + 1))) {
                nested = false;
            }
        }
    }
    let pts = gen.all_points(depth)?;
    let d = int(s.dim as i64);
    let mut injection = true;
    let mut continuity = true;
    let mut min_ratio: Option<Rational> = None;
    let mut pairs = 0;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            pairs += 1;
            let n0 = pts[i].coding.iter().zip(&pts[j].coding).position(|(a, b)| a != b).expect("distinct codings") + 1;
            let d2 = dist_sq(&pts[i].point, &pts[j].point);
            let rho = s.rho(n0 + 1);
            let need = int(16) * &d * &rho * &rho;
            let ratio = &d2 / &need;
            if min_ratio.as_ref().map_or(true, |m| ratio < *m) {
                min_ratio = Some(ratio);
            }
            if d2 < need {
                injection = false;
            }
            let cap = s.rho(n0 - 1) * int(2);
            let maxn = pts[i].point.iter().zip(&pts[j].point).map(|(a, b)| (a - b).abs()).max().expect("dim ≥ 1");
            if maxn > cap {
                continuity = false;
            }
        }
    }
    Ok(SeparationReport {
        depth,
        points: pts.len(),
        pairs,
        nested,
        injection,
        continuity,
        min_injection_ratio: min_ratio.unwrap_or_else(Rational::zero),
    })
}

/// Centres of the 3^{nd} subcubes of side 2·3^{−n}: −1 + 3^{−n}(2j+1) per axis.
pub fn block_centre(n: u32, index: &[u64]) -> Point {
    let scale = Rational::new(BigInt::one(), BigInt::from(3u32).pow(n));
    index.iter().map(|&j| -Rational::one() + &scale * int(2 * j as i64 + 1)).collect()
}

/// A_{n,k} = ∪_{a∈A_n} (a + 3^{−(n+1)}γ_k).
pub fn block_set(n: u32, gamma: &[Point], centres: &[Vec<u64>]) -> Vec<Point> {
    let small = Rational::new(BigInt::one(), BigInt::from(3u32).pow(n + 1));
    let mut out = Vec::new();
    for idx in centres {
        let a = block_centre(n, idx);
        for y in gamma {
            out.push(a.iter().zip(y).map(|(c, v)| c + &small * v).collect());
        }
    }
    out.sort();
    out.dedup();
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaireReport {
    pub points: usize,
    /// max over x of d_H(T_{x,2·3^{−(n+1)}}(E), ½γ_k + b(x))²
    pub max_sq: Rational,
    /// (3^{−n}δ_k)²
    pub bound_sq: Rational,
    pub pass: bool,
}

/// For every x ∈ E: the nearest block centre a gives b(x) = (a − x)·3^{n+1}/2 ∈ Q(0,1/2), and
/// d_H(T_{x,2·3^{−(n+1)}}(E), ½γ_k + b(x)) must be strictly below 3^{−n}δ_k.
pub fn baire_block_check(n: u32, gamma: &[Point], centres: &[Vec<u64>], e: &PointCloudSet) -> Result<BaireReport, PiError> {
    if n == 0 || gamma.is_empty() || centres.is_empty() {
        return Err(PiError::InvalidGammas("need n ≥ 1, a pattern and at least one centre".into()));
    }
    let d = e.dim();
    let side = BigInt::from(3u32).pow(n);
    if centres.iter().any(|c| c.len() != d || c.iter().any(|&j| BigInt::from(j) >= side)) {
        return Err(PiError::InvalidGammas("centre index outside the subcube grid".into()));
    }
    let delta_sq = pattern_delta_sq(gamma);
    let three_n = Rational::from_integer(side.clone());
    let ball_sq = &delta_sq / (&three_n * &three_n * &three_n * &three_n);
    let a_set = block_set(n, gamma, centres);
    let h = hausdorff_points(e.points(), &a_set);
    if h >= ball_sq {
        return Err(PiError::NotInBall(format!("d_H² = {} ≥ {}", to_f64(&h), to_f64(&ball_sq))));
    }
    let bound_sq = &delta_sq / (&three_n * &three_n);
    let t = int(2) / (&three_n * int(3));
    let half = rat(1, 2);
    let mut max_sq = Rational::zero();
    for x in e.points() {
        let idx: Vec<u64> = x
            .iter()
            .map(|c| {
                let j = ((c + Rational::one()) * &three_n / int(2)).floor().to_integer();
                let j = j.clamp(BigInt::zero(), &side - BigInt::one());
                u64::try_from(j).expect("index fits")
            })
            .collect();
        if !centres.contains(&idx) {
            return Err(PiError::NotInBall(format!("point {:?} is in no chosen subcube", x.iter().map(to_f64).collect::<Vec<_>>())));
        }
        let a = block_centre(n, &idx);
        let b: Point = a.iter().zip(x).map(|(ac, xc)| (ac - xc) / &t).collect();
        if b.iter().any(|c| c.abs() > half) {
            return Err(PiError::NotInBall("b(x) outside Q(0,1/2)".into()));
        }
        let z = zoom_points(e.points(), x, &t);
        let target: Vec<Point> = gamma.iter().map(|y| y.iter().zip(&b).map(|(v, o)| v * &half + o).collect()).collect();
        let v = hausdorff_points(&z, &target);
        if v > max_sq {
            max_sq = v;
        }
    }
    let pass = max_sq < bound_sq;
    Ok(BaireReport { points: e.len(), max_sq, bound_sq, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1(v: &[Rational]) -> Vec<Point> {
        v.iter().map(|x| vec![x.clone()]).collect()
    }

    fn example_schedule() -> PiSchedule {
        let pats = enumerate_patterns(1, 2, 3, false);
        PiSchedule::cyclic(1, pats, 8, 2).unwrap()
    }

    #[test]
    fn pattern_order() {
        let pats = enumerate_patterns(1, 2, 3, false);
        assert_eq!(
            pats,
            vec![
                p1(&[int(0)]),
                p1(&[rat(-1, 2), int(0)]),
                p1(&[int(0), rat(1, 2)]),
                p1(&[rat(-1, 2), int(0), rat(1, 2)]),
            ]
        );
        let pos = enumerate_patterns(1, 2, 3, true);
        assert_eq!(pos.len(), 2);
        // d = 2, q ≤ 2, ≤ 2 points: {0} plus 8 lattice neighbours
        assert_eq!(enumerate_patterns(2, 2, 2, false).len(), 9);
    }

    #[test]
    fn delta_and_constraint() {
        let g = p1(&[int(0), rat(1, 2)]);
        assert_eq!(pattern_delta_sq(&g), rat(1, 4));
        let s = PiSchedule::with_plan(1, vec![g.clone()], vec![0], None, 1).unwrap();
        assert_eq!(s.r(2), &rat(1, 16));
        let bad = PiSchedule::with_plan(1, vec![g], vec![0], Some(vec![int(1), rat(1, 15)]), 1);
        assert!(matches!(bad, Err(PiError::ScheduleViolation(_))));
    }

    #[test]
    fn depth_one_points() {
        let g = p1(&[int(0), rat(1, 2)]);
        let s = PiSchedule::with_plan(1, vec![g.clone()], vec![0, 0], None, 2).unwrap();
        let gen = PiSigma::new(s, 1).unwrap();
        assert_eq!(gen.cloud(1).unwrap().points(), &g[..]);
    }

    #[test]
    fn window_matches_brute_force() {
        let s = example_schedule();
        let gen = PiSigma::new(s.clone(), 6).unwrap();
        let all = gen.all_points(6).unwrap();
        assert_eq!(all.len() as u128, s.point_count(6));
        let w = Cube::new(vec![rat(1, 2)], s.rho(3));
        let win = gen.window_points(&w, 6).unwrap();
        let brute: Vec<DepthPoint> =
            all.iter().filter(|p| w.intersects(&Cube::new(p.point.clone(), s.rho(7)))).cloned().collect();
        assert_eq!(win, brute);
        // Q(0, ρ(2)) keeps only i(1) = 0
        let near = gen.window_points(&Cube::new(vec![int(0)], s.rho(2)), 6).unwrap();
        assert!(near.iter().all(|p| p.coding[0] == s.origin_index(1)));
    }

    #[test]
    fn separation_bounds_hold() {
        let gen = PiSigma::new(example_schedule(), 5).unwrap();
        let r = separation_check(&gen, 5).unwrap();
        assert!(r.nested && r.injection && r.continuity, "{r:?}");
        assert!(r.min_injection_ratio >= int(1));
    }

    #[test]
    fn special_coding_and_dense_tangent() {
        let s = example_schedule();
        let e = s.pattern_index(&p1(&[int(0), rat(1, 2)])).unwrap();
        let depth = 8;
        let coding = special_point_coding(&s, e, depth).unwrap();
        let occ = s.occurrences(e, depth);
        assert_eq!(occ, vec![3, 7]);
        assert!(occ.iter().all(|&k| coding[k - 1] == s.origin_index(k)));
        let gen = PiSigma::new(s, depth).unwrap();
        for k in occ {
            let rep = verify_pisigma_tangent(&gen, &coding, k, TangentMode::Dense).unwrap();
            assert!(rep.pass, "{rep:?}");
        }
    }

    #[test]
    fn all_points_tangent_recovers_doubling() {
        let s = example_schedule();
        let depth = 8;
        let mut coding = special_point_coding(&s, 0, depth).unwrap();
        coding[2] = 1; // the point 1/2 of γ_3 = {0, 1/2}
        let gen = PiSigma::new(s, depth).unwrap();
        let rep = verify_pisigma_tangent(&gen, &coding, 3, TangentMode::AllPoints).unwrap();
        assert!(rep.pass, "{rep:?}");
        let l = rep.similarity.unwrap().lambda;
        assert!((1.9..=2.1).contains(&l));
    }

    #[test]
    fn all_points_singleton_needs_only_distance() {
        let s = example_schedule();
        let e = s.pattern_index(&p1(&[int(0)])).unwrap();
        let k = s.occurrences(e, 4)[0];
        let gen = PiSigma::new(s.clone(), 4).unwrap();
        let coding = special_point_coding(&s, e, 4).unwrap();
        let rep = verify_pisigma_tangent(&gen, &coding, k, TangentMode::AllPoints).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn dense_mode_needs_origin() {
        let s = example_schedule();
        let gen = PiSigma::new(s, 4).unwrap();
        let r = verify_pisigma_tangent(&gen, &[0, 0, 1, 0], 3, TangentMode::Dense);
        assert!(matches!(r, Err(PiError::BadCoding(_))));
    }

    #[test]
    fn baire_blocks() {
        assert_eq!(
            (0..3).map(|j| block_centre(1, &[j])).collect::<Vec<_>>(),
            vec![vec![rat(-2, 3)], vec![int(0)], vec![rat(2, 3)]]
        );
        let gamma = p1(&[rat(-1, 2), int(0), rat(1, 2)]);
        let centres = vec![vec![0u64], vec![2], vec![5]];
        let a = block_set(2, &gamma, &centres);
        let e = PointCloudSet::new(1, a.clone(), int(0)).unwrap();
        let rep = baire_block_check(2, &gamma, &centres, &e).unwrap();
        assert!(rep.pass && rep.max_sq.is_zero());
        // jitter by half the admissible radius 3^{-2n}δ_k, alternating sign
        let delta = rat(1, 2);
        let j = &delta / int(81) / int(2);
        let jittered: Vec<Point> =
            a.iter().enumerate().map(|(i, p)| vec![&p[0] + if i % 2 == 0 { j.clone() } else { -j.clone() }]).collect();
        let e = PointCloudSet::new(1, jittered, int(0)).unwrap();
        assert!(baire_block_check(2, &gamma, &centres, &e).unwrap().pass);
        let far = PointCloudSet::new(1, vec![vec![int(0)]], int(0)).unwrap();
        assert!(matches!(baire_block_check(2, &gamma, &centres, &far), Err(PiError::NotInBall(_))));
    }
}
