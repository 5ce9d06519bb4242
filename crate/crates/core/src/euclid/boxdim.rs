use super::{Cube, EuclidError, WindowGenerator};
use crate::rational::{pow2, Rational};
use num::traits::{One, ToPrimitive};
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq)]
pub struct BoxCountReport {
    /// (k, N(2^-k)): dyadic cubes of side 2·2^-k in Q meeting the sample
    pub counts: Vec<(u32, u64)>,
    /// min and max of log N / log(1/δ) over the deepest half of the range
    pub ratio_lower: f64,
    pub ratio_upper: f64,
    /// least-squares slope of log N against log(1/δ) over the deepest half
    pub slope: f64,
}

impl BoxCountReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,delta,count,ratio\n");
        for &(k, n) in &self.counts {
            let ratio = if k == 0 { 0.0 } else { (n as f64).ln() / (k as f64 * 2f64.ln()) };
            s.push_str(&format!("{},{},{},{}\n", k, 2f64.powi(-(k as i32)), n, ratio));
        }
        s.push_str(&format!("# ratio_lower,{}\n# ratio_upper,{}\n# slope,{}\n", self.ratio_lower, self.ratio_upper, self.slope));
        s
    }
}

fn bucket(c: &Rational, k: u32) -> i64 {
    let top = (1i64 << k) - 1;
    let scaled = (c + Rational::one()) * pow2(k as i64 - 1);
    scaled.floor().to_integer().to_i64().unwrap_or(top).clamp(0, top)
}

/// Box counts for k in k_min..=k_max from a single sample at resolution 2^-(k_max+2).
pub fn box_dimension(e: &dyn WindowGenerator, k_min: u32, k_max: u32) -> Result<BoxCountReport, EuclidError> {
    if k_min < 1 || k_min > k_max || k_max > 62 {
        return Err(EuclidError::Invalid(format!("bad depth range {k_min}:{k_max}")));
    }
    let s = e.sample(&Cube::unit(e.dim()), &pow2(-(k_max as i64 + 2)))?;
    if s.points.is_empty() {
        return Err(EuclidError::Empty);
    }
    let mut counts = Vec::new();
    for k in k_min..=k_max {
        let cells: BTreeSet<Vec<i64>> = s.points.iter().map(|p| p.iter().map(|c| bucket(c, k)).collect()).collect();
        counts.push((k, cells.len() as u64));
    }
    let half = counts.len().div_ceil(2);
    let deep = &counts[counts.len() - half..];
    let xs: Vec<f64> = deep.iter().map(|&(k, _)| k as f64 * 2f64.ln()).collect();
    let ys: Vec<f64> = deep.iter().map(|&(_, n)| (n as f64).ln()).collect();
    let ratios: Vec<f64> = xs.iter().zip(&ys).map(|(x, y)| y / x).collect();
    let ratio_lower = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let ratio_upper = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let slope = if xs.len() < 2 {
        ratios[0]
    } else {
        let mx = xs.iter().sum::<f64>() / xs.len() as f64;
        let my = ys.iter().sum::<f64>() / ys.len() as f64;
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        sxy / sxx
    };
    Ok(BoxCountReport { counts, ratio_lower, ratio_upper, slope })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euclid::{FullCube, PointCloudSet};
    use crate::rational::{int, rat};

    #[test]
    fn singleton_has_dimension_zero() {
        let e = PointCloudSet::new(2, vec![vec![rat(1, 3), rat(-1, 5)]], int(0)).unwrap();
        let r = box_dimension(&e, 2, 10).unwrap();
        assert!(r.counts.iter().all(|&(_, n)| n == 1));
        assert_eq!(r.slope, 0.0);
        assert_eq!(r.ratio_upper, 0.0);
    }

    #[test]
    fn interval_has_dimension_one() {
        let r = box_dimension(&FullCube::new(1, 16), 2, 10).unwrap();
        assert_eq!(r.counts.last(), Some(&(10, 1024)));
        assert!((r.slope - 1.0).abs() < 1e-12);
        assert!((r.ratio_lower - 1.0).abs() < 1e-12);
    }

    #[test]
    fn boundary_points_share_the_last_cell() {
        assert_eq!(bucket(&int(1), 3), 7);
        assert_eq!(bucket(&int(-1), 3), 0);
        assert_eq!(bucket(&int(0), 1), 1);
    }
}
