use super::{ZooError, DEFAULT_ZOO_BUDGET};
use crate::euclid::{Cube, EuclidError, Point, WindowGenerator, WindowSample};
use crate::rational::{from_f64_decimal, int, sqrt_upper, Rational};
use num::traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Homogeneous Cantor set: at level k every interval gets m_k equally spaced children of
/// relative length λ_k, the outer children flush with the parent's ends.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CantorParams {
    pub m: Vec<u32>,
    #[serde(with = "crate::rational::serde_rational::vec")]
    pub lam: Vec<Rational>,
}

impl CantorParams {
    pub fn new(m: Vec<u32>, lam: Vec<Rational>) -> Result<Self, ZooError> {
        let p = CantorParams { m, lam };
        p.check()?;
        Ok(p)
    }

    /// m_k = 2, λ_k = 1/3.
    pub fn ternary(levels: usize) -> Self {
        CantorParams { m: vec![2; levels], lam: vec![Rational::new(1.into(), 3.into()); levels] }
    }

    /// m_j = j+1, λ_j = (j+1)^{−1/s}: the family with dimension s. Exact when 1/s is an
    /// integer, otherwise λ_j is the shortest decimal of the f64 value.
    pub fn power_family(s: f64, levels: usize) -> Result<Self, ZooError> {
        if !(s > 0.0 && s < 1.0) {
            return Err(ZooError::Invalid(format!("dimension {s} outside (0, 1)")));
        }
        let inv = 1.0 / s;
        let exact = (inv - inv.round()).abs() < 1e-12;
        let mut lam = Vec::with_capacity(levels);
        for j in 1..=levels as u64 {
            let k = j + 1;
            let l = if exact {
                Rational::one() / num::pow(int(k as i64), inv.round() as usize)
            } else {
                from_f64_decimal((k as f64).powf(-inv)).ok_or_else(|| ZooError::Invalid("λ underflow".into()))?
            };
            lam.push(l);
        }
        Self::new((2..=levels as u32 + 1).collect(), lam)
    }

    pub fn levels(&self) -> usize {
        self.m.len()
    }

    pub fn check(&self) -> Result<(), ZooError> {
        if self.m.len() != self.lam.len() {
            return Err(ZooError::Invalid("m and λ differ in length".into()));
        }
        for (k, (m, l)) in self.m.iter().zip(&self.lam).enumerate() {
            if *m < 2 {
                return Err(ZooError::ConditionViolation("m_k ≥ 2".into(), k + 1));
            }
            if !l.is_positive() || int(*m as i64) * l >= Rational::one() {
                return Err(ZooError::ConditionViolation("m_k·λ_k < 1".into(), k + 1));
            }
        }
        Ok(())
    }

    /// ∏_{i≤k} λ_i.
    pub fn length(&self, k: usize) -> Rational {
        self.lam[..k].iter().fold(Rational::one(), |a, l| a * l)
    }

    pub fn count(&self, k: usize) -> u128 {
        self.m[..k].iter().map(|&m| m as u128).product()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Interval {
    pub left: Rational,
    pub len: Rational,
}

impl Interval {
    pub fn right(&self) -> Rational {
        &self.left + &self.len
    }

    fn children(&self, m: u32, lam: &Rational) -> Vec<Interval> {
        let len = &self.len * lam;
        let step = (&self.len - &len) / int(m as i64 - 1);
        (0..m).map(|i| Interval { left: &self.left + &step * int(i as i64), len: len.clone() }).collect()
    }
}

/// The ∏m_k level-K intervals, left to right.
pub fn cantor_build(p: &CantorParams, depth: usize) -> Result<Vec<Interval>, ZooError> {
    if depth > p.levels() {
        return Err(ZooError::Invalid(format!("depth {depth} exceeds {} levels", p.levels())));
    }
    let mut cur = vec![Interval { left: Rational::zero(), len: Rational::one() }];
    for k in 0..depth {
        cur = cur.iter().flat_map(|i| i.children(p.m[k], &p.lam[k])).collect();
    }
    Ok(cur)
}

fn intervals_meeting(p: &CantorParams, depth: usize, lo: &Rational, hi: &Rational, budget: usize) -> Result<Vec<Interval>, ZooError> {
    let mut cur = vec![Interval { left: Rational::zero(), len: Rational::one() }];
    for k in 0..depth {
        let mut next = Vec::new();
        for i in &cur {
            for c in i.children(p.m[k], &p.lam[k]) {
                if c.left <= *hi && c.right() >= *lo {
                    next.push(c);
                }
            }
        }
        if next.len() > budget {
            return Err(ZooError::BudgetExceeded(next.len() as u128, budget));
        }
        cur = next;
    }
    Ok(cur.into_iter().filter(|c| c.left <= *hi && c.right() >= *lo).collect())
}

/// E({m_k},{λ_k}) in d = 1, or its d-fold product.
#[derive(Debug, Clone)]
pub struct CantorGenerator {
    pub params: CantorParams,
    pub dim: usize,
    pub depth: usize,
    pub budget: usize,
}

impl CantorGenerator {
    pub fn new(params: CantorParams, dim: usize, depth: usize) -> Result<Self, ZooError> {
        params.check()?;
        if depth > params.levels() || dim == 0 {
            return Err(ZooError::Invalid(format!("depth {depth} with {} levels in dimension {dim}", params.levels())));
        }
        Ok(CantorGenerator { params, dim, depth, budget: DEFAULT_ZOO_BUDGET })
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    /// len/2 for interval endpoints in d = 1; √d·len/2 for products of midpoints.
    pub fn resolution(&self, k: usize) -> Rational {
        let half = self.params.length(k) / int(2);
        if self.dim == 1 {
            half
        } else {
            sqrt_upper(&int(self.dim as i64), 32) * half
        }
    }

    fn axis_points(&self, k: usize, lo: &Rational, hi: &Rational) -> Result<Vec<Rational>, ZooError> {
        let iv = intervals_meeting(&self.params, k, lo, hi, self.budget)?;
        let mut out: Vec<Rational> = if self.dim == 1 {
            iv.iter().flat_map(|i| [i.left.clone(), i.right()]).collect()
        } else {
            iv.iter().map(|i| &i.left + &i.len / int(2)).collect()
        };
        out.retain(|x| x >= lo && x <= hi);
        out.sort();
        out.dedup();
        Ok(out)
    }

    pub fn points_in(&self, window: &Cube, k: usize) -> Result<Vec<Point>, ZooError> {
        let mut axes = Vec::with_capacity(self.dim);
        let mut total: u128 = 1;
        for i in 0..self.dim {
            let a = self.axis_points(k, &(&window.center[i] - &window.half), &(&window.center[i] + &window.half))?;
            total *= a.len() as u128;
            axes.push(a);
        }
        if total > self.budget as u128 {
            return Err(ZooError::BudgetExceeded(total, self.budget));
        }
        let mut out: Vec<Point> = vec![Vec::new()];
        for a in &axes {
            out = out.iter().flat_map(|p| a.iter().map(move |x| [p.clone(), vec![x.clone()]].concat())).collect();
        }
        Ok(out)
    }
}

impl WindowGenerator for CantorGenerator {
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

#[derive(Debug, Clone, PartialEq)]
pub struct CantorDimension {
    /// (k, log ∏m_i / −log ∏λ_i)
    pub values: Vec<(usize, f64)>,
    /// minimum over k in the deepest half
    pub value: f64,
}

pub fn cantor_dimension(p: &CantorParams, depth: usize) -> Result<CantorDimension, ZooError> {
    if depth < 2 || depth > p.levels() {
        return Err(ZooError::Invalid(format!("depth {depth} outside 2..={}", p.levels())));
    }
    let mut lm = 0.0;
    let mut ll = 0.0;
    let mut values = Vec::with_capacity(depth);
    for k in 0..depth {
        lm += (p.m[k] as f64).ln();
        ll -= crate::rational::to_f64(&p.lam[k]).ln();
        values.push((k + 1, lm / ll));
    }
    let value = values[depth / 2..].iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
    Ok(CantorDimension { values, value })
}

/// (k−1)/(k^{1/s} − k) for 1/s = `s_inv`.
pub fn gap_ratio(s_inv: u32, k: u64) -> Result<Rational, ZooError> {
    let kr = int(k as i64);
    let den = num::pow(kr.clone(), s_inv as usize) - &kr;
    if !den.is_positive() {
        return Err(ZooError::Invalid(format!("k^(1/s) ≤ k at k = {k}")));
    }
    Ok((kr - int(1)) / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn ternary_two_levels() {
        let iv = cantor_build(&CantorParams::ternary(2), 2).unwrap();
        let lefts: Vec<Rational> = iv.iter().map(|i| i.left.clone()).collect();
        assert_eq!(lefts, vec![int(0), rat(2, 9), rat(2, 3), rat(8, 9)]);
        assert!(iv.iter().all(|i| i.len == rat(1, 9)));
    }

    #[test]
    fn depth_zero_is_unit_interval() {
        let iv = cantor_build(&CantorParams::ternary(3), 0).unwrap();
        assert_eq!(iv, vec![Interval { left: int(0), len: int(1) }]);
    }

    #[test]
    fn alignment_identities() {
        let p = CantorParams::power_family(0.5, 4).unwrap();
        for k in 0..4 {
            for parent in cantor_build(&p, k).unwrap() {
                let ch = parent.children(p.m[k], &p.lam[k]);
                assert_eq!(ch[0].left, parent.left);
                assert_eq!(ch.last().unwrap().right(), parent.right());
                assert!(ch.windows(2).all(|w| w[0].right() < w[1].left));
            }
        }
        assert_eq!(cantor_build(&p, 4).unwrap().len() as u128, p.count(4));
    }

    #[test]
    fn power_family_values() {
        let p = CantorParams::power_family(0.5, 3).unwrap();
        assert_eq!(p.m, vec![2, 3, 4]);
        assert_eq!(p.lam, vec![rat(1, 4), rat(1, 9), rat(1, 16)]);
    }

    #[test]
    fn ternary_dimension_constant() {
        let d = cantor_dimension(&CantorParams::ternary(8), 8).unwrap();
        let s = 2f64.ln() / 3f64.ln();
        assert!(d.values.iter().all(|v| (v.1 - s).abs() < 1e-12));
    }

    #[test]
    fn gap_ratio_example() {
        assert_eq!(gap_ratio(2, 4).unwrap(), rat(1, 4));
    }

    #[test]
    fn generator_windows() {
        let g = CantorGenerator::new(CantorParams::ternary(4), 1, 4).unwrap();
        let all = g.points_in(&Cube::unit(1), 2).unwrap();
        assert_eq!(all.len(), 8);
        let w = Cube::new(vec![rat(1, 6)], rat(1, 6));
        let part = g.points_in(&w, 2).unwrap();
        assert_eq!(part, vec![vec![int(0)], vec![rat(1, 9)], vec![rat(2, 9)], vec![rat(1, 3)]]);
        let g2 = CantorGenerator::new(CantorParams::ternary(4), 2, 4).unwrap();
        assert_eq!(g2.points_in(&Cube::unit(2), 2).unwrap().len(), 16);
    }
}
