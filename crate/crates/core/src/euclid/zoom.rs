use super::{dist_sq, hausdorff_points, Cube, EuclidError, HausdorffDistance, Point, PointCloudSet, WindowGenerator};
use crate::rational::Rational;
use num::traits::{One, Signed, Zero};

/// (y − x)/t for the points with max-norm at most 1 afterwards.
pub fn zoom_points(points: &[Point], x: &[Rational], t: &Rational) -> Vec<Point> {
    let one = Rational::one();
    let inv = Rational::one() / t;
    points
        .iter()
        .filter_map(|y| {
            let z: Point = y.iter().zip(x).map(|(a, b)| (a - b) * &inv).collect();
            if z.iter().all(|c| c.abs() <= one) {
                Some(z)
            } else {
                None
            }
        })
        .collect()
}

/// T_{x,t}(E) = ((E − x)/t) ∩ Q. The generator is asked for resolution `out_resolution`·t
/// inside Q(x,t); the output carries the sample's resolution divided by t.
/// With `out_resolution` = None the finest level is used.
pub fn zoom(
    e: &dyn WindowGenerator,
    x: &[Rational],
    t: &Rational,
    out_resolution: Option<&Rational>,
) -> Result<PointCloudSet, EuclidError> {
    if !t.is_positive() {
        return Err(EuclidError::NonPositiveScale);
    }
    if x.len() != e.dim() {
        return Err(EuclidError::DimensionMismatch(x.len(), e.dim()));
    }
    let request = match out_resolution {
        Some(r) => r * t,
        None => Rational::zero(),
    };
    let window = Cube::new(x.to_vec(), t.clone());
    let s = e.sample(&window, &request)?;
    let res2 = &s.resolution * &s.resolution;
    if !s.points.iter().any(|p| dist_sq(p, x) <= res2) {
        return Err(EuclidError::CenterNotInSet);
    }
    let pts = zoom_points(&s.points, x, t);
    if pts.is_empty() {
        return Err(EuclidError::EmptyZoom);
    }
    PointCloudSet::new(e.dim(), pts, &s.resolution / t)
}

/// Geometric grid start·ratio^i for i < count.
pub fn geometric_grid(start: &Rational, ratio: &Rational, count: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(count);
    let mut v = start.clone();
    for _ in 0..count {
        out.push(v.clone());
        v *= ratio;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRow {
    pub t: Rational,
    pub dh: HausdorffDistance,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanProfile {
    pub rows: Vec<ScanRow>,
    pub best: usize,
    /// true for decreasing scales (tangent), false for increasing (photograph)
    pub tangent_mode: bool,
}

impl ScanProfile {
    pub fn best_row(&self) -> &ScanRow {
        &self.rows[self.best]
    }

    /// dH never increases along the grid.
    pub fn is_non_increasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].dh.squared <= w[0].dh.squared)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,dH,slack,points\n");
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{},{}\n",
                crate::rational::to_f64(&r.t),
                r.dh.value(),
                crate::rational::to_f64(&r.dh.slack),
                r.points
            ));
        }
        s
    }
}

/// d_H(T_{x,t}(E), F) along a strictly monotone grid of scales; best is the first minimum.
pub fn tangent_photograph_scan(
    e: &dyn WindowGenerator,
    x: &[Rational],
    f: &PointCloudSet,
    scales: &[Rational],
    out_resolution: Option<&Rational>,
) -> Result<ScanProfile, EuclidError> {
    if scales.is_empty() {
        return Err(EuclidError::Invalid("empty scale grid".into()));
    }
    let dec = scales.windows(2).all(|w| w[1] < w[0]);
    let inc = scales.windows(2).all(|w| w[1] > w[0]);
    if !(dec || inc) {
        return Err(EuclidError::NonMonotoneScales);
    }
    if f.dim() != e.dim() {
        return Err(EuclidError::DimensionMismatch(f.dim(), e.dim()));
    }
    let mut rows = Vec::with_capacity(scales.len());
    for t in scales {
        let z = zoom(e, x, t, out_resolution)?;
        let dh = HausdorffDistance { squared: hausdorff_points(z.points(), f.points()), slack: z.resolution() + f.resolution() };
        rows.push(ScanRow { t: t.clone(), dh, points: z.len() });
    }
    let mut best = 0;
    for (i, r) in rows.iter().enumerate() {
        if r.dh.squared < rows[best].dh.squared {
            best = i;
        }
    }
    Ok(ScanProfile { rows, best, tangent_mode: dec || scales.len() == 1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euclid::{hausdorff_distance, FullCube};
    use crate::rational::{int, rat};

    fn set1(v: &[Rational]) -> PointCloudSet {
        PointCloudSet::new(1, v.iter().map(|x| vec![x.clone()]).collect(), int(0)).unwrap()
    }

    #[test]
    fn zoom_examples() {
        let e = set1(&[int(0), rat(1, 2), int(1)]);
        let z = zoom(&e, &[int(0)], &rat(1, 2), None).unwrap();
        assert_eq!(z, set1(&[int(0), int(1)]));
        let z = zoom(&e, &[rat(1, 2)], &int(1), None).unwrap();
        assert_eq!(z, set1(&[rat(-1, 2), int(0), rat(1, 2)]));
        let z = zoom(&e, &[int(1)], &rat(1, 2), None).unwrap();
        assert_eq!(z, set1(&[int(-1), int(0)]));
        assert_eq!(zoom(&e, &[rat(1, 4)], &rat(1, 8), None), Err(EuclidError::CenterNotInSet));
        assert_eq!(zoom(&e, &[int(0)], &int(0), None), Err(EuclidError::NonPositiveScale));
    }

    #[test]
    fn zoom_scales_hausdorff() {
        let a = set1(&[rat(1, 10), rat(3, 10)]);
        let b = set1(&[rat(1, 10), rat(1, 5), rat(7, 20)]);
        let x = [rat(1, 10)];
        let t = rat(1, 2);
        let za = zoom(&a, &x, &t, None).unwrap();
        let zb = zoom(&PointCloudSet::new(1, b.points().to_vec(), int(0)).unwrap(), &x, &t, None).unwrap();
        let h = hausdorff_distance(&a, &b).unwrap().squared;
        let hz = hausdorff_distance(&za, &zb).unwrap().squared;
        assert_eq!(hz, h / (&t * &t));
    }

    #[test]
    fn accumulation_point_scan() {
        // E = {0} ∪ {±1/n : n ≤ 64}; F a fine grid of [-1,1]
        let mut pts = vec![vec![int(0)]];
        for n in 1..=64 {
            pts.push(vec![rat(1, n)]);
            pts.push(vec![rat(-1, n)]);
        }
        let e = PointCloudSet::new(1, pts, int(0)).unwrap();
        let f = PointCloudSet::new(1, (-256..=256).map(|k| vec![rat(k, 256)]).collect(), rat(1, 512)).unwrap();
        let scales: Vec<Rational> = (1..=8).map(|n| rat(1, n)).collect();
        let p = tangent_photograph_scan(&e, &[int(0)], &f, &scales, None).unwrap();
        assert!(p.tangent_mode);
        assert!(p.is_non_increasing());
        assert!(p.best_row().dh.at_most(&rat(1, 8)));
    }

    #[test]
    fn density_point_scan() {
        let f = PointCloudSet::new(1, (-32..=32).map(|k| vec![rat(k, 32)]).collect(), rat(1, 64)).unwrap();
        let e = FullCube::new(1, 20);
        let scales: Vec<Rational> = (0..6).map(|j| crate::rational::pow2(-j)).collect();
        let p = tangent_photograph_scan(&e, &[int(0)], &f, &scales, Some(f.resolution())).unwrap();
        for r in &p.rows {
            assert!(r.dh.at_most(&rat(1, 32)), "{r:?}");
        }
    }

    #[test]
    fn scan_rejects_unsorted_grid() {
        let e = set1(&[int(0)]);
        let r = tangent_photograph_scan(&e, &[int(0)], &e, &[int(1), rat(1, 2), int(1)], None);
        assert_eq!(r, Err(EuclidError::NonMonotoneScales));
    }
}
