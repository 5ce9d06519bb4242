//! Finite metric spaces with exact rational distances.

use crate::rational::{fmt_rational, from_f64_decimal, lcm_denominators, parse_rational, to_f64, Rational};
use num::bigint::BigInt;
use num::traits::{One, Signed, Zero};
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricError {
    #[error("distance matrix is empty")]
    Empty,
    #[error("row {0} has {1} entries, expected {2}")]
    NotSquare(usize, usize, usize),
    #[error("entry ({0},{1}) is not finite")]
    NonFinite(usize, usize),
    #[error("diagonal entry ({0},{0}) is not zero")]
    ZeroDiagonalViolation(usize),
    #[error("negative distance at ({0},{1})")]
    NegativeDistance(usize, usize),
    #[error("asymmetric entries at ({0},{1})")]
    AsymmetryViolation(usize, usize),
    #[error("distinct points {0} and {1} are at distance zero")]
    ZeroDistance(usize, usize),
    #[error("triangle inequality fails: d({0},{1}) > d({0},{2}) + d({2},{1})")]
    TriangleViolation(usize, usize, usize),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("label count {0} does not match {1} points")]
    LabelCount(usize, usize),
    #[error("radius must be positive")]
    NonPositiveRadius,
    #[error("csv: {0}")]
    Csv(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<Vec<Rational>>,
    diam: Rational,
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

/// Checks the metric axioms in a fixed order and reports the first failure.
pub fn validate_metric_exact(dist: Vec<Vec<Rational>>) -> Result<FiniteMetricSpace, MetricError> {
    let n = dist.len();
    if n == 0 {
        return Err(MetricError::Empty);
    }
    for (i, row) in dist.iter().enumerate() {
        if row.len() != n {
            return Err(MetricError::NotSquare(i, row.len(), n));
        }
    }
    for i in 0..n {
        if !dist[i][i].is_zero() {
            return Err(MetricError::ZeroDiagonalViolation(i));
        }
    }
    for i in 0..n {
        for j in 0..n {
            if dist[i][j].is_negative() {
                return Err(MetricError::NegativeDistance(i, j));
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if dist[i][j] != dist[j][i] {
                return Err(MetricError::AsymmetryViolation(i, j));
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if dist[i][j].is_zero() {
                return Err(MetricError::ZeroDistance(i, j));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if dist[i][j] > &dist[i][k] + &dist[k][j] {
                    return Err(MetricError::TriangleViolation(i, j, k));
                }
            }
        }
    }
    let diam = dist.iter().flatten().max().cloned().unwrap_or_else(Rational::zero);
    Ok(FiniteMetricSpace { labels: default_labels(n), dist, diam })
}

/// Float front end: every entry is taken at the exact value of its shortest decimal form.
pub fn validate_metric(matrix: &[Vec<f64>]) -> Result<FiniteMetricSpace, MetricError> {
    let n = matrix.len();
    let mut rows = Vec::with_capacity(n);
    for (i, row) in matrix.iter().enumerate() {
        let mut r = Vec::with_capacity(row.len());
        for (j, &v) in row.iter().enumerate() {
            r.push(from_f64_decimal(v).ok_or(MetricError::NonFinite(i, j))?);
        }
        rows.push(r);
    }
    validate_metric_exact(rows)
}

impl FiniteMetricSpace {
    pub fn singleton() -> Self {
        FiniteMetricSpace { labels: default_labels(1), dist: vec![vec![Rational::zero()]], diam: Rational::zero() }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, MetricError> {
        if labels.len() != self.len() {
            return Err(MetricError::LabelCount(labels.len(), self.len()));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn d(&self, i: usize, j: usize) -> &Rational {
        &self.dist[i][j]
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.dist
    }

    pub fn diam(&self) -> &Rational {
        &self.diam
    }

    pub fn index_of(&self, label: &str) -> Result<usize, MetricError> {
        self.labels.iter().position(|l| l == label).ok_or_else(|| MetricError::UnknownLabel(label.to_string()))
    }

    /// Minimum distance between distinct points; None for a singleton.
    pub fn min_positive(&self) -> Option<Rational> {
        let n = self.len();
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| self.dist[i][j].clone()).min()
    }

    pub fn eccentricity(&self, i: usize) -> &Rational {
        self.dist[i].iter().max().expect("non-empty row")
    }

    /// Same space with all distances multiplied by `s` (s > 0).
    pub fn scaled(&self, s: &Rational) -> Self {
        let dist = self.dist.iter().map(|row| row.iter().map(|v| v * s).collect()).collect();
        FiniteMetricSpace { labels: self.labels.clone(), dist, diam: &self.diam * s }
    }

    /// Sub-space on `idx` (in the given order).
    pub fn subspace(&self, idx: &[usize]) -> Self {
        let dist: Vec<Vec<Rational>> =
            idx.iter().map(|&i| idx.iter().map(|&j| self.dist[i][j].clone()).collect()).collect();
        let diam = dist.iter().flatten().max().cloned().unwrap_or_else(Rational::zero);
        FiniteMetricSpace { labels: idx.iter().map(|&i| self.labels[i].clone()).collect(), dist, diam }
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        self.subspace(perm)
    }

    /// Closed ball around `center` rescaled by 1/r.
    pub fn zoom_ball(&self, center: &str, r: &Rational) -> Result<Self, MetricError> {
        let c = self.index_of(center)?;
        self.zoom_ball_at(c, r)
    }

    pub fn zoom_ball_at(&self, c: usize, r: &Rational) -> Result<Self, MetricError> {
        if !r.is_positive() {
            return Err(MetricError::NonPositiveRadius);
        }
        let idx: Vec<usize> = (0..self.len()).filter(|&j| &self.dist[c][j] <= r).collect();
        Ok(self.subspace(&idx).scaled(&(Rational::one() / r)))
    }

    /// Upper triangle flattened column by column: d01, d02, d12, d03, ...
    pub fn upper_triangle(&self) -> Vec<Rational> {
        let n = self.len();
        let mut out = Vec::with_capacity(n * (n - 1) / 2);
        for j in 1..n {
            for i in 0..j {
                out.push(self.dist[i][j].clone());
            }
        }
        out
    }

    /// Lexicographically least upper triangle over all relabelings.
    pub fn canonical_form(&self) -> Vec<Rational> {
        self.canonical_permutation().1
    }

    pub fn canonical_permutation(&self) -> (Vec<usize>, Vec<Rational>) {
        let n = self.len();
        let mut best: Option<(Vec<usize>, Vec<Rational>)> = None;
        let mut perm = Vec::with_capacity(n);
        let mut used = vec![false; n];
        let mut seq = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
        self.canon_dfs(&mut perm, &mut used, &mut seq, &mut best);
        best.expect("at least one permutation")
    }

    /// Prefixes are compared against the current best, never a stale one.
    fn canon_dfs(&self, perm: &mut Vec<usize>, used: &mut [bool], seq: &mut Vec<Rational>, best: &mut Option<(Vec<usize>, Vec<Rational>)>) {
        let n = self.len();
        if perm.len() == n {
            if best.as_ref().map_or(true, |b| *seq < b.1) {
                *best = Some((perm.clone(), seq.clone()));
            }
            return;
        }
        for v in 0..n {
            if used[v] {
                continue;
            }
            let start = seq.len();
            seq.extend(perm.iter().map(|&u| self.dist[u][v].clone()));
            let worse = best.as_ref().is_some_and(|b| seq[..] > b.1[..seq.len()]);
            if !worse {
                perm.push(v);
                used[v] = true;
                self.canon_dfs(perm, used, seq, best);
                used[v] = false;
                perm.pop();
            }
            seq.truncate(start);
        }
    }

    pub fn is_isometric(&self, other: &Self) -> bool {
        self.len() == other.len() && self.canonical_form() == other.canonical_form()
    }

    pub fn to_f64_matrix(&self) -> Vec<Vec<f64>> {
        self.dist.iter().map(|r| r.iter().map(to_f64).collect()).collect()
    }
}

/// Builds a space from an upper triangle flattened as in [`FiniteMetricSpace::upper_triangle`].
pub fn from_upper_triangle(n: usize, tri: &[Rational]) -> Result<FiniteMetricSpace, MetricError> {
    let mut m = vec![vec![Rational::zero(); n]; n];
    let mut it = tri.iter();
    for j in 1..n {
        for i in 0..j {
            let v = it.next().ok_or(MetricError::NotSquare(j, i, n))?.clone();
            m[i][j] = v.clone();
            m[j][i] = v;
        }
    }
    validate_metric_exact(m)
}

/// Rational finite spaces of diameter at most 1, in the order
/// (point count, common denominator, canonical form), without repeats up to isometry.
/// After the last group the sequence starts over, so it never runs dry.
#[derive(Debug, Clone)]
pub struct RationalSpaceEnumerator {
    max_points: usize,
    max_denominator: u32,
    group: (usize, u32),
    buffer: Vec<FiniteMetricSpace>,
    pos: usize,
}

impl RationalSpaceEnumerator {
    pub fn new(max_points: usize, max_denominator: u32) -> Self {
        assert!((1..=8).contains(&max_points), "max_points must be in 1..=8");
        assert!(max_denominator >= 1, "max_denominator must be positive");
        RationalSpaceEnumerator { max_points, max_denominator, group: (1, 1), buffer: group_spaces(1, 1), pos: 0 }
    }

    pub fn take_spaces(&mut self, count: usize) -> Vec<FiniteMetricSpace> {
        (0..count).map(|_| self.next_space()).collect()
    }

    /// Every space of one full cycle.
    pub fn full_cycle(max_points: usize, max_denominator: u32) -> Vec<FiniteMetricSpace> {
        let mut out = Vec::new();
        for n in 1..=max_points {
            for q in 1..=max_denominator {
                out.extend(group_spaces(n, q));
            }
        }
        out
    }

    pub fn next_space(&mut self) -> FiniteMetricSpace {
        while self.pos >= self.buffer.len() {
            let (n, q) = self.group;
            self.group = if q < self.max_denominator {
                (n, q + 1)
            } else if n < self.max_points {
                (n + 1, 1)
            } else {
                (1, 1)
            };
            self.buffer = group_spaces(self.group.0, self.group.1);
            self.pos = 0;
        }
        self.pos += 1;
        self.buffer[self.pos - 1].clone()
    }
}

impl Iterator for RationalSpaceEnumerator {
    type Item = FiniteMetricSpace;
    fn next(&mut self) -> Option<FiniteMetricSpace> {
        Some(self.next_space())
    }
}

/// All n-point spaces with distances j/q (1 ≤ j ≤ q) whose reduced denominators have lcm exactly q.
fn group_spaces(n: usize, q: u32) -> Vec<FiniteMetricSpace> {
    if n == 1 {
        return if q == 1 { vec![FiniteMetricSpace::singleton()] } else { Vec::new() };
    }
    let values: Vec<Rational> =
        (1..=q).map(|j| Rational::new(BigInt::from(j), BigInt::from(q))).collect();
    let mut m = vec![vec![Rational::zero(); n]; n];
    let mut seen: BTreeSet<Vec<Rational>> = BTreeSet::new();
    fill(&mut m, n, 0, 1, &values, &mut seen);
    let target = BigInt::from(q);
    seen.into_iter()
        .filter(|tri| lcm_denominators(tri.iter()) == target)
        .map(|tri| from_upper_triangle(n, &tri).expect("enumerated spaces are metrics"))
        .collect()
}

fn fill(
    m: &mut Vec<Vec<Rational>>,
    n: usize,
    i: usize,
    j: usize,
    values: &[Rational],
    seen: &mut BTreeSet<Vec<Rational>>,
) {
    if j == n {
        let space = FiniteMetricSpace {
            labels: default_labels(n),
            dist: m.clone(),
            diam: Rational::zero(),
        };
        seen.insert(space.canonical_form());
        return;
    }
    let (ni, nj) = if i + 1 < j { (i + 1, j) } else { (0, j + 1) };
    for v in values {
        // entries are filled column by column, so every triangle closes when its last edge is set
        let ok = (0..j).filter(|&k| k < i).all(|k| {
            let a = &m[k][i];
            let b = &m[k][j];
            v <= &(a + b) && a <= &(v + b) && b <= &(a + v)
        });
        if !ok {
            continue;
        }
        m[i][j] = v.clone();
        m[j][i] = v.clone();
        fill(m, n, ni, nj, values, seen);
    }
    m[i][j] = Rational::zero();
    m[j][i] = Rational::zero();
}

/// Random space on n points with off-diagonal distances k/(2q), q ≤ k ≤ 2q. Any values in
/// [1/2, 1] satisfy the triangle inequality, so no rejection is needed.
pub fn random_space<R: rand::Rng + ?Sized>(rng: &mut R, n: usize, q: u32) -> FiniteMetricSpace {
    let q = q.max(1) as i64;
    let mut m = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = Rational::new(rng.gen_range(q..=2 * q).into(), (2 * q).into());
            m[i][j] = v.clone();
            m[j][i] = v;
        }
    }
    validate_metric_exact(m).expect("entries in [1/2, 1] form a metric")
}

/// Reads "n=<k>" followed by k rows of comma-separated decimals or "p/q" tokens.
pub fn read_matrix_csv(text: &str) -> Result<FiniteMetricSpace, MetricError> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let head = lines.next().ok_or_else(|| MetricError::Csv("missing header".into()))?;
    let n: usize = head
        .strip_prefix("n=")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| MetricError::Csv(format!("bad header `{head}`")))?;
    let mut rows = Vec::with_capacity(n);
    for (i, line) in lines.enumerate() {
        let mut row = Vec::new();
        for (j, tok) in line.split(',').enumerate() {
            let t = tok.trim();
            if matches!(t.to_ascii_lowercase().as_str(), "nan" | "inf" | "-inf" | "infinity" | "-infinity") {
                return Err(MetricError::NonFinite(i, j));
            }
            row.push(parse_rational(t).map_err(|e| MetricError::Csv(e.to_string()))?);
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(MetricError::Csv(format!("header says {n} rows, found {}", rows.len())));
    }
    validate_metric_exact(rows)
}

pub fn write_matrix_csv(x: &FiniteMetricSpace, exact: bool) -> String {
    let mut s = format!("n={}\n", x.len());
    for row in x.matrix() {
        let toks: Vec<String> =
            row.iter().map(|v| if exact { fmt_rational(v) } else { format!("{}", to_f64(v)) }).collect();
        s.push_str(&toks.join(","));
        s.push('\n');
    }
    s
}
