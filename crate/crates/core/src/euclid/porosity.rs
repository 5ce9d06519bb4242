use super::{dist_sq_f64, Cube, EuclidError, SweepIndex, WindowGenerator};
use crate::rational::{to_f64, Rational};

#[derive(Debug, Clone, PartialEq)]
pub struct PorosityRow {
    pub r: f64,
    pub por: f64,
    /// best empty-ball centre found
    pub center: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PorosityProfile {
    pub rows: Vec<PorosityRow>,
    pub upper_est: f64,
    pub lower_est: f64,
}

impl PorosityProfile {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("r,por\n");
        for row in &self.rows {
            s.push_str(&format!("{},{}\n", row.r, row.por));
        }
        s
    }
}

#[derive(Debug, Clone)]
pub struct PorositySettings {
    /// candidate grid step is r / grid_divisions
    pub grid_divisions: u32,
    /// sample resolution is r / resolution_divisions
    pub resolution_divisions: u32,
    /// all-pairs midpoints up to this many points, nearest neighbours beyond
    pub all_pairs_limit: usize,
    pub neighbours: usize,
    /// samples larger than this get grid candidates only
    pub midpoint_limit: usize,
}

impl Default for PorositySettings {
    fn default() -> Self {
        PorositySettings { grid_divisions: 32, resolution_divisions: 64, all_pairs_limit: 200, neighbours: 8, midpoint_limit: 4096 }
    }
}

fn midpoints(pts: &[Vec<f64>], settings: &PorositySettings) -> Vec<Vec<f64>> {
    let mid = |a: &Vec<f64>, b: &Vec<f64>| a.iter().zip(b).map(|(x, y)| (x + y) / 2.0).collect::<Vec<f64>>();
    let mut out = Vec::new();
    if pts.first().map_or(0, |p| p.len()) == 1 {
        let mut xs: Vec<&Vec<f64>> = pts.iter().collect();
        xs.sort_by(|a, b| a[0].total_cmp(&b[0]));
        for w in xs.windows(2) {
            out.push(mid(w[0], w[1]));
        }
    } else if pts.len() <= settings.all_pairs_limit {
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                out.push(mid(&pts[i], &pts[j]));
            }
        }
    } else {
        let idx = SweepIndex::new(pts.to_vec());
        for p in pts {
            let mut near: Vec<(f64, usize)> = Vec::new();
            idx.visit_within(p, |d2, j| {
                if d2 > 0.0 {
                    near.push((d2, j));
                    near.sort_by(|a, b| a.0.total_cmp(&b.0));
                    near.truncate(settings.neighbours);
                }
                if near.len() < settings.neighbours {
                    f64::INFINITY
                } else {
                    near[near.len() - 1].0
                }
            });
            for (_, j) in near {
                out.push(mid(p, &pts[j]));
            }
        }
    }
    out
}

fn grid_candidates(x: &[f64], r: f64, divisions: u32) -> Vec<Vec<f64>> {
    let n = divisions as i64;
    let step = r / divisions as f64;
    let mut out: Vec<Vec<f64>> = vec![Vec::new()];
    for &c in x {
        let mut next = Vec::with_capacity(out.len() * (2 * n as usize + 1));
        for p in &out {
            for k in -n..=n {
                let mut q = p.clone();
                q.push(c + k as f64 * step);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// por(E, x, r) over the given radii, sup over a finite candidate family of centres:
/// midpoints of sample points plus a grid of step r/32 inside B(x, r).
pub fn porosity_profile(
    e: &dyn WindowGenerator,
    x: &[Rational],
    radii: &[Rational],
    settings: &PorositySettings,
) -> Result<PorosityProfile, EuclidError> {
    if x.len() != e.dim() {
        return Err(EuclidError::DimensionMismatch(x.len(), e.dim()));
    }
    if radii.windows(2).any(|w| w[1] >= w[0]) {
        return Err(EuclidError::NonMonotoneScales);
    }
    // work in the frame of T_{x,r}: exact translation and scaling first, f64 afterwards
    let origin = vec![0.0; x.len()];
    let mut rows = Vec::with_capacity(radii.len());
    for r in radii {
        if *r <= Rational::from_integer(0.into()) {
            return Err(EuclidError::NonPositiveScale);
        }
        let rf = to_f64(r);
        let window = Cube::new(x.to_vec(), r * Rational::from_integer(2.into()));
        let s = e.sample(&window, &(r / Rational::from_integer(settings.resolution_divisions.into())))?;
        let eps = to_f64(&(&s.resolution / r));
        let pts: Vec<Vec<f64>> = s.points.iter().map(|p| p.iter().zip(x).map(|(c, o)| to_f64(&((c - o) / r))).collect()).collect();
        let idx = SweepIndex::new(pts.clone());
        let mut candidates = grid_candidates(&origin, 1.0, settings.grid_divisions);
        if pts.len() <= settings.midpoint_limit {
            candidates.extend(midpoints(&pts, settings));
        }
        let mut best = 0.0f64;
        let mut local = origin.clone();
        for y in &candidates {
            let to_x = dist_sq_f64(y, &origin).sqrt();
            if to_x >= 1.0 {
                continue;
            }
            let gap = if idx.is_empty() { f64::INFINITY } else { idx.nearest_sq(y).sqrt() };
            let score = (gap - eps).min(1.0 - to_x).clamp(0.0, 0.5);
            if score > best {
                best = score;
                local = y.clone();
            }
        }
        let center = local.iter().zip(x).map(|(c, o)| to_f64(o) + c * rf).collect();
        assert!((0.0..=0.5).contains(&best));
        rows.push(PorosityRow { r: rf, por: best, center });
    }
    let q = rows.len().div_ceil(4);
    let tail = &rows[rows.len() - q..];
    let upper_est = tail.iter().map(|r| r.por).fold(0.0, f64::max);
    let lower_est = tail.iter().map(|r| r.por).fold(0.5, f64::min);
    Ok(PorosityProfile { rows, upper_est, lower_est })
}

/// Radii 1/n for n in a range, as exact rationals (decreasing).
pub fn harmonic_radii(from: i64, to: i64) -> Vec<Rational> {
    (from..=to).map(|n| Rational::new(1.into(), n.into())).collect()
}
