use super::{dist_sq_f64, hausdorff_points, Point, PointCloudSet, SweepIndex};
use crate::rational::{from_f64_decimal, to_f64, Rational};

/// λ(A − a) = B − b up to `residual` in Hausdorff distance.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatch {
    pub lambda: f64,
    pub anchor_a: Point,
    pub anchor_b: Point,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SimilarityOutcome {
    Match(SimilarityMatch),
    NoMatch { best_residual: f64 },
}

impl SimilarityOutcome {
    pub fn matched(&self) -> Option<&SimilarityMatch> {
        match self {
            SimilarityOutcome::Match(m) => Some(m),
            SimilarityOutcome::NoMatch { .. } => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimilaritySettings {
    /// log grid size over (λ0, 1/λ0)
    pub grid: usize,
    /// anchors tried per set when not given explicitly
    pub max_anchors: usize,
    pub anchors_a: Option<Vec<Point>>,
    pub anchors_b: Option<Vec<Point>>,
}

impl Default for SimilaritySettings {
    fn default() -> Self {
        SimilaritySettings { grid: 64, max_anchors: 8, anchors_a: None, anchors_b: None }
    }
}

pub fn similar_up_to(a: &PointCloudSet, b: &PointCloudSet, lambda0: f64, tol: f64) -> SimilarityOutcome {
    similar_up_to_with(a, b, lambda0, tol, &SimilaritySettings::default())
}

/// Extreme points along each axis, then the rest in sorted order.
fn default_anchors(s: &PointCloudSet, k: usize) -> Vec<Point> {
    let pts = s.points();
    let mut out: Vec<Point> = Vec::new();
    let push = |p: &Point, out: &mut Vec<Point>| {
        if out.len() < k && !out.contains(p) {
            out.push(p.clone());
        }
    };
    for i in 0..s.dim() {
        if let Some(p) = pts.iter().min_by(|x, y| x[i].cmp(&y[i]).then(x.cmp(y))) {
            push(p, &mut out);
        }
        if let Some(p) = pts.iter().max_by(|x, y| x[i].cmp(&y[i]).then(y.cmp(x))) {
            push(p, &mut out);
        }
    }
    let step = (pts.len() / k.max(1)).max(1);
    for p in pts.iter().step_by(step) {
        push(p, &mut out);
    }
    out
}

struct Evaluator {
    a: Vec<Vec<f64>>,
    b: Vec<Vec<f64>>,
    b_index: SweepIndex,
}

impl Evaluator {
    /// Hausdorff distance between λ(A − a) and B − b, both in f64.
    fn residual(&self, lambda: f64, anchor_a: &[f64], anchor_b: &[f64]) -> f64 {
        let ta: Vec<Vec<f64>> =
            self.a.iter().map(|p| p.iter().zip(anchor_a).zip(anchor_b).map(|((x, c), o)| lambda * (x - c) + o).collect()).collect();
        let mut worst: f64 = 0.0;
        for p in &ta {
            worst = worst.max(self.b_index.nearest_sq(p));
        }
        let ta_index = SweepIndex::new(ta);
        for q in &self.b {
            worst = worst.max(ta_index.nearest_sq(q));
        }
        worst.sqrt()
    }
}

fn radius(pts: &[Vec<f64>], c: &[f64]) -> f64 {
    pts.iter().map(|p| dist_sq_f64(p, c)).fold(0.0, f64::max).sqrt()
}

fn exact_residual(a: &[Point], b: &[Point], lambda: f64, anchor_a: &[Rational], anchor_b: &[Rational]) -> Option<f64> {
    let l = from_f64_decimal(lambda)?;
    let ta: Vec<Point> = a.iter().map(|p| p.iter().zip(anchor_a).zip(anchor_b).map(|((x, c), o)| &l * (x - c) + o).collect()).collect();
    Some(to_f64(&hausdorff_points(&ta, b)).sqrt())
}

/// Anchors a ∈ A, b ∈ B and λ ∈ (λ0, 1/λ0): the radius ratio is tried first, then a log grid
/// refined by golden-section search around its minimum. The first pair with exact residual ≤ tol wins.
pub fn similar_up_to_with(
    a: &PointCloudSet,
    b: &PointCloudSet,
    lambda0: f64,
    tol: f64,
    settings: &SimilaritySettings,
) -> SimilarityOutcome {
    let mut best_residual = f64::INFINITY;
    if a.dim() != b.dim() || !(lambda0 > 0.0 && lambda0 < 1.0) {
        return SimilarityOutcome::NoMatch { best_residual };
    }
    let ev = Evaluator { a: a.to_f64(), b: b.to_f64(), b_index: SweepIndex::new(b.to_f64()) };
    let anchors_a = settings.anchors_a.clone().unwrap_or_else(|| default_anchors(a, settings.max_anchors));
    let anchors_b = settings.anchors_b.clone().unwrap_or_else(|| default_anchors(b, settings.max_anchors));
    let (lo, hi) = (lambda0.ln(), -lambda0.ln());
    let inside = |l: f64| l > lambda0 && l < 1.0 / lambda0;
    let n = settings.grid.max(2);
    for aa in &anchors_a {
        let af: Vec<f64> = aa.iter().map(to_f64).collect();
        let ra = radius(&ev.a, &af);
        for bb in &anchors_b {
            let bf: Vec<f64> = bb.iter().map(to_f64).collect();
            let rb = radius(&ev.b, &bf);
            let mut tried: Vec<(f64, f64)> = Vec::new();
            let attempt = |l: f64, tried: &mut Vec<(f64, f64)>, best: &mut f64| -> Option<SimilarityMatch> {
                let r = ev.residual(l, &af, &bf);
                tried.push((l, r));
                if r <= tol {
                    let exact = exact_residual(a.points(), b.points(), l, aa, bb)?;
                    *best = best.min(exact);
                    if exact <= tol {
                        return Some(SimilarityMatch { lambda: l, anchor_a: aa.clone(), anchor_b: bb.clone(), residual: exact });
                    }
                } else {
                    *best = best.min(r);
                }
                None
            };
            if ra > 0.0 && inside(rb / ra) {
                if let Some(m) = attempt(rb / ra, &mut tried, &mut best_residual) {
                    return SimilarityOutcome::Match(m);
                }
            }
            if ra == 0.0 && inside(1.0) {
                if let Some(m) = attempt(1.0, &mut tried, &mut best_residual) {
                    return SimilarityOutcome::Match(m);
                }
            }
            let grid: Vec<f64> = (1..n).map(|i| (lo + (hi - lo) * i as f64 / n as f64).exp()).collect();
            let mut vals = Vec::with_capacity(grid.len());
            for &l in &grid {
                if let Some(m) = attempt(l, &mut tried, &mut best_residual) {
                    return SimilarityOutcome::Match(m);
                }
                vals.push(tried.last().map(|t| t.1).unwrap_or(f64::INFINITY));
            }
            let imin = (0..vals.len()).min_by(|&i, &j| vals[i].total_cmp(&vals[j])).unwrap_or(0);
            let mut x0 = if imin == 0 { lo } else { grid[imin - 1].ln() };
            let mut x1 = if imin + 1 >= grid.len() { hi } else { grid[imin + 1].ln() };
            let g = (5f64.sqrt() - 1.0) / 2.0;
            for _ in 0..40 {
                let m1 = x1 - g * (x1 - x0);
                let m2 = x0 + g * (x1 - x0);
                let r1 = ev.residual(m1.exp(), &af, &bf);
                let r2 = ev.residual(m2.exp(), &af, &bf);
                if r1 <= r2 {
                    x1 = m2;
                } else {
                    x0 = m1;
                }
            }
            let l = ((x0 + x1) / 2.0).exp();
            if inside(l) {
                if let Some(m) = attempt(l, &mut tried, &mut best_residual) {
                    return SimilarityOutcome::Match(m);
                }
            }
        }
    }
    SimilarityOutcome::NoMatch { best_residual }
}
