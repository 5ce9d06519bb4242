//! Gromov–Hausdorff distance between finite metric spaces as half the least
//! distortion of a correspondence.

use crate::metric::FiniteMetricSpace;
use crate::rational::Rational;
use num::traits::{Signed, Zero};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Correspondence {
    pairs: Vec<(usize, usize)>,
}

impl Correspondence {
    pub fn new(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut pairs: Vec<_> = pairs.into_iter().collect();
        pairs.sort_unstable();
        pairs.dedup();
        Correspondence { pairs }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn covers(&self, nx: usize, ny: usize) -> bool {
        let mut cx = vec![false; nx];
        let mut cy = vec![false; ny];
        for &(i, j) in &self.pairs {
            if i >= nx || j >= ny {
                return false;
            }
            cx[i] = true;
            cy[j] = true;
        }
        cx.into_iter().all(|b| b) && cy.into_iter().all(|b| b)
    }

    pub fn transposed(&self) -> Self {
        Correspondence::new(self.pairs.iter().map(|&(i, j)| (j, i)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GhError {
    #[error("relation does not cover both spaces")]
    NotACorrespondence,
    #[error("search budget exhausted; value in [{}, {}]", crate::rational::fmt_rational(&.0.lower_bound), crate::rational::fmt_rational(&.0.value))]
    BudgetExceeded(Box<GhResult>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GhResult {
    pub value: Rational,
    pub certificate: Correspondence,
    pub lower_bound: Rational,
    pub exact: bool,
    pub nodes: u64,
}

pub fn correspondence_distortion(
    r: &Correspondence,
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
) -> Result<Rational, GhError> {
    if !r.covers(x.len(), y.len()) {
        return Err(GhError::NotACorrespondence);
    }
    Ok(raw_distortion(r.pairs(), x, y))
}

fn raw_distortion(pairs: &[(usize, usize)], x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Rational {
    let mut worst = Rational::zero();
    for (a, &(i, j)) in pairs.iter().enumerate() {
        for &(i2, j2) in &pairs[a + 1..] {
            let v = (x.d(i, i2) - y.d(j, j2)).abs();
            if v > worst {
                worst = v;
            }
        }
    }
    worst
}

#[derive(Debug, Clone)]
pub struct GhOptions {
    /// Maximum number of search nodes before giving up with bounds.
    pub node_budget: u64,
    /// Extra candidate for the initial incumbent (e.g. a map supplied by a proof).
    pub seed: Option<Correspondence>,
}

impl Default for GhOptions {
    fn default() -> Self {
        GhOptions { node_budget: 5_000_000, seed: None }
    }
}

/// Exact value, or `BudgetExceeded` with the best bounds when the search is cut short.
pub fn gh_exact(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Result<GhResult, GhError> {
    gh_exact_with(x, y, &GhOptions::default())
}

pub fn gh_exact_with(x: &FiniteMetricSpace, y: &FiniteMetricSpace, opts: &GhOptions) -> Result<GhResult, GhError> {
    let r = gh_search(x, y, opts);
    if r.exact {
        Ok(r)
    } else {
        Err(GhError::BudgetExceeded(Box::new(r)))
    }
}

/// Sorted distances from point i.
fn profile(x: &FiniteMetricSpace, i: usize) -> Vec<Rational> {
    let mut v: Vec<Rational> = x.matrix()[i].clone();
    v.sort();
    v
}

/// Hausdorff distance between two finite non-empty sets of reals given sorted.
fn hausdorff_sorted(a: &[Rational], b: &[Rational]) -> Rational {
    fn directed(a: &[Rational], b: &[Rational]) -> Rational {
        let mut worst = Rational::zero();
        let mut k = 0;
        for v in a {
            while k + 1 < b.len() && &b[k + 1] <= v {
                k += 1;
            }
            let mut best = (v - &b[k]).abs();
            if k + 1 < b.len() {
                let w = (&b[k + 1] - v).abs();
                if w < best {
                    best = w;
                }
            }
            if best > worst {
                worst = best;
            }
        }
        worst
    }
    let ab = directed(a, b);
    let ba = directed(b, a);
    if ab > ba {
        ab
    } else {
        ba
    }
}

struct Bounds {
    lower: Rational,
    greedy: Correspondence,
    greedy_dis: Rational,
}

fn bounds(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Bounds {
    let half = Rational::new(1.into(), 2.into());
    let px: Vec<_> = (0..x.len()).map(|i| profile(x, i)).collect();
    let py: Vec<_> = (0..y.len()).map(|j| profile(y, j)).collect();
    let h: Vec<Vec<Rational>> = px.iter().map(|a| py.iter().map(|b| hausdorff_sorted(a, b)).collect()).collect();
    let mut lo = (x.diam() - y.diam()).abs();
    for row in &h {
        let v = row.iter().min().unwrap();
        if v > &lo {
            lo = v.clone();
        }
    }
    for j in 0..y.len() {
        let v = (0..x.len()).map(|i| &h[i][j]).min().unwrap();
        if v > &lo {
            lo = v.clone();
        }
    }
    // greedy: each point takes the partner that adds the least distortion so far,
    // ties broken by the profile distance and then by index
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let added = |pairs: &[(usize, usize)], i: usize, j: usize| {
        pairs.iter().map(|&(i2, j2)| (x.d(i, i2) - y.d(j, j2)).abs()).max().unwrap_or_else(Rational::zero)
    };
    for i in eccentricity_order(x) {
        let j = (0..y.len()).min_by(|&a, &b| {
            added(&pairs, i, a).cmp(&added(&pairs, i, b)).then(h[i][a].cmp(&h[i][b])).then(a.cmp(&b))
        });
        pairs.push((i, j.unwrap()));
    }
    for j in eccentricity_order(y) {
        if pairs.iter().any(|p| p.1 == j) {
            continue;
        }
        let i = (0..x.len()).min_by(|&a, &b| {
            added(&pairs, a, j).cmp(&added(&pairs, b, j)).then(h[a][j].cmp(&h[b][j])).then(a.cmp(&b))
        });
        pairs.push((i.unwrap(), j));
    }
    let greedy = Correspondence::new(pairs);
    let greedy_dis = raw_distortion(greedy.pairs(), x, y);
    Bounds { lower: lo * &half, greedy, greedy_dis }
}

/// (lower, upper) with lower ≤ d_GH ≤ upper.
pub fn gh_bounds(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> (Rational, Rational) {
    let b = bounds(x, y);
    (b.lower, b.greedy_dis * Rational::new(1.into(), 2.into()))
}

/// Distinct-value index tables so the search compares small integers only.
struct RankTable {
    values: Vec<Rational>,
    xi: Vec<u32>,
    yi: Vec<u32>,
    table: Vec<u32>,
    nxv: usize,
    nyv: usize,
    nx: usize,
    ny: usize,
}

impl RankTable {
    fn new(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Self {
        fn index(s: &FiniteMetricSpace) -> (Vec<Rational>, Vec<u32>) {
            let mut vals: BTreeMap<Rational, u32> = BTreeMap::new();
            for row in s.matrix() {
                for v in row {
                    vals.entry(v.clone()).or_insert(0);
                }
            }
            for (k, v) in vals.values_mut().enumerate() {
                *v = k as u32;
            }
            let idx = s.matrix().iter().flatten().map(|v| vals[v]).collect();
            (vals.into_keys().collect(), idx)
        }
        let (xv, xi) = index(x);
        let (yv, yi) = index(y);
        let mut diffs: BTreeMap<Rational, u32> = BTreeMap::new();
        for a in &xv {
            for b in &yv {
                diffs.entry((a - b).abs()).or_insert(0);
            }
        }
        for (k, v) in diffs.values_mut().enumerate() {
            *v = k as u32;
        }
        let mut table = Vec::with_capacity(xv.len() * yv.len());
        for a in &xv {
            for b in &yv {
                table.push(diffs[&(a - b).abs()]);
            }
        }
        RankTable {
            values: diffs.into_keys().collect(),
            xi,
            yi,
            table,
            nxv: xv.len(),
            nyv: yv.len(),
            nx: x.len(),
            ny: y.len(),
        }
    }

    #[inline]
    fn rank(&self, i: usize, i2: usize, j: usize, j2: usize) -> u32 {
        let a = self.xi[i * self.nx + i2] as usize;
        let b = self.yi[j * self.ny + j2] as usize;
        debug_assert!(a < self.nxv && b < self.nyv);
        self.table[a * self.nyv + b]
    }

    fn rank_of(&self, v: &Rational) -> u32 {
        self.values.binary_search(v).expect("distortion value is a tabulated difference") as u32
    }
}

struct Search<'a> {
    t: &'a RankTable,
    order_x: Vec<usize>,
    order_y: Vec<usize>,
    pairs: Vec<(usize, usize)>,
    covered: Vec<u32>,
    best: u32,
    best_pairs: Vec<(usize, usize)>,
    stop_at: u32,
    nodes: u64,
    budget: u64,
    exhausted: bool,
    done: bool,
}

impl Search<'_> {
    fn cost(&self, i: usize, j: usize) -> u32 {
        let mut c = self.t.rank(i, i, j, j);
        for &(i2, j2) in &self.pairs {
            let r = self.t.rank(i, i2, j, j2);
            if r > c {
                c = r;
            }
        }
        c
    }

    fn dfs_x(&mut self, depth: usize, cur: u32) {
        if self.done {
            return;
        }
        if depth == self.order_x.len() {
            let todo: Vec<usize> = self.order_y.iter().copied().filter(|&j| self.covered[j] == 0).collect();
            self.dfs_y(&todo, 0, cur);
            return;
        }
        let i = self.order_x[depth];
        let mut cand: Vec<(u32, usize)> = (0..self.t.ny).map(|j| (self.cost(i, j), j)).collect();
        cand.sort_unstable();
        for (c, j) in cand {
            let m = cur.max(c);
            if m >= self.best || self.done {
                break;
            }
            if !self.tick() {
                return;
            }
            self.pairs.push((i, j));
            self.covered[j] += 1;
            self.dfs_x(depth + 1, m);
            self.covered[j] -= 1;
            self.pairs.pop();
        }
    }

    fn dfs_y(&mut self, todo: &[usize], k: usize, cur: u32) {
        if self.done {
            return;
        }
        if k == todo.len() {
            self.best = cur;
            self.best_pairs = self.pairs.clone();
            if self.best <= self.stop_at {
                self.done = true;
            }
            return;
        }
        let j = todo[k];
        let mut cand: Vec<(u32, usize)> = (0..self.t.nx).map(|i| (self.cost(i, j), i)).collect();
        cand.sort_unstable();
        for (c, i) in cand {
            let m = cur.max(c);
            if m >= self.best || self.done {
                break;
            }
            if !self.tick() {
                return;
            }
            self.pairs.push((i, j));
            self.dfs_y(todo, k + 1, m);
            self.pairs.pop();
        }
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            self.done = true;
            return false;
        }
        true
    }
}

fn eccentricity_order(s: &FiniteMetricSpace) -> Vec<usize> {
    let mut o: Vec<usize> = (0..s.len()).collect();
    o.sort_by(|&a, &b| s.eccentricity(b).cmp(s.eccentricity(a)).then(a.cmp(&b)));
    o
}

/// Branch and bound over unions graph(f) ∪ graph(g); never fails, reports `exact = false`
/// when the node budget runs out.
pub fn gh_search(x: &FiniteMetricSpace, y: &FiniteMetricSpace, opts: &GhOptions) -> GhResult {
    // map the larger space onto the smaller one; the value is symmetric
    if x.len() < y.len() {
        let seed = opts.seed.as_ref().map(Correspondence::transposed);
        let r = gh_search(y, x, &GhOptions { node_budget: opts.node_budget, seed });
        return GhResult { certificate: r.certificate.transposed(), ..r };
    }
    let half = Rational::new(1.into(), 2.into());
    let b = bounds(x, y);
    let t = RankTable::new(x, y);
    let mut inc = b.greedy.clone();
    let mut inc_dis = b.greedy_dis.clone();
    if let Some(s) = &opts.seed {
        if s.covers(x.len(), y.len()) {
            let d = raw_distortion(s.pairs(), x, y);
            if d < inc_dis {
                inc = s.clone();
                inc_dis = d;
            }
        }
    }
    let two_lower = &b.lower * Rational::from_integer(2.into());
    if inc_dis <= two_lower {
        return GhResult { value: inc_dis * &half, certificate: inc, lower_bound: b.lower, exact: true, nodes: 0 };
    }
    // highest rank whose value does not exceed the lower bound
    let stop_at = t.values.iter().take_while(|v| **v <= two_lower).count().saturating_sub(1) as u32;
    let mut s = Search {
        t: &t,
        order_x: eccentricity_order(x),
        order_y: eccentricity_order(y),
        pairs: Vec::new(),
        covered: vec![0; y.len()],
        best: t.rank_of(&inc_dis),
        best_pairs: inc.pairs().to_vec(),
        stop_at,
        nodes: 0,
        budget: opts.node_budget,
        exhausted: false,
        done: false,
    };
    s.dfs_x(0, 0);
    let certificate = Correspondence::new(s.best_pairs.iter().copied());
    let dis = raw_distortion(certificate.pairs(), x, y);
    debug_assert_eq!(t.rank_of(&dis), s.best);
    let value = dis * &half;
    let lower_bound = if s.exhausted { b.lower } else { value.clone() };
    GhResult { value, certificate, lower_bound, exact: !s.exhausted, nodes: s.nodes }
}
