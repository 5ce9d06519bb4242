//! Point-cloud CSV and SVG scatter export.

use super::{EuclidError, PointCloudSet};
use crate::rational::{fmt_rational, parse_rational, to_f64, Rational};
use num::traits::Zero;

/// One point per row, comma-separated coordinates as decimals or p/q.
/// `#` lines are comments, except `# resolution=<value>`.
pub fn read_points_csv(text: &str) -> Result<PointCloudSet, EuclidError> {
    let mut resolution = Rational::zero();
    let mut pts = Vec::new();
    let mut dim = None;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(c) = line.strip_prefix('#') {
            if let Some(v) = c.trim().strip_prefix("resolution=") {
                resolution = parse_rational(v.trim()).map_err(|e| EuclidError::Invalid(format!("line {}: {e}", lineno + 1)))?;
            }
            continue;
        }
        let mut p = Vec::new();
        for tok in line.split(',') {
            let v = parse_rational(tok.trim()).map_err(|e| EuclidError::Invalid(format!("line {}: {e}", lineno + 1)))?;
            p.push(v);
        }
        match dim {
            None => dim = Some(p.len()),
            Some(d) if d != p.len() => return Err(EuclidError::DimensionMismatch(p.len(), d)),
            _ => {}
        }
        pts.push(p);
    }
    PointCloudSet::new(dim.ok_or(EuclidError::Empty)?, pts, resolution)
}

/// Exact mode writes p/q tokens; otherwise shortest f64 decimals.
pub fn write_points_csv(set: &PointCloudSet, exact: bool) -> String {
    let mut s = format!("# resolution={}\n", fmt_rational(set.resolution()));
    for p in set.points() {
        let row: Vec<String> =
            p.iter().map(|c| if exact { fmt_rational(c) } else { format!("{}", to_f64(c)) }).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

/// Scatter plot of a planar set on the fixed viewBox [-1,1]², y pointing up.
pub fn write_svg(set: &PointCloudSet, title: &str) -> Result<String, EuclidError> {
    if set.dim() != 2 {
        return Err(EuclidError::DimensionMismatch(set.dim(), 2));
    }
    let mut s = String::new();
    s.push_str("<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1 -1 2 2\" width=\"512\" height=\"512\">\n");
    s.push_str(&format!("<!-- locrich {} -->\n", env!("CARGO_PKG_VERSION")));
    s.push_str(&format!("<title>{}</title>\n", escape(title)));
    s.push_str("<rect x=\"-1\" y=\"-1\" width=\"2\" height=\"2\" fill=\"white\" stroke=\"#999\" stroke-width=\"0.004\"/>\n");
    s.push_str("<g fill=\"black\">\n");
    let r = (2.0 / (set.len() as f64).sqrt() / 8.0).clamp(0.002, 0.02);
    for p in set.points() {
        s.push_str(&format!("<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>\n", to_f64(&p[0]), -to_f64(&p[1]), r));
    }
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn csv_round_trip() {
        let e = PointCloudSet::new(2, vec![vec![rat(1, 3), int(0)], vec![rat(-1, 2), int(1)]], rat(1, 64)).unwrap();
        let back = read_points_csv(&write_points_csv(&e, true)).unwrap();
        assert_eq!(back, e);
        let approx = read_points_csv(&write_points_csv(&e, false)).unwrap();
        assert_eq!(approx.points()[0], vec![rat(-1, 2), int(1)]);
    }

    #[test]
    fn csv_errors() {
        assert_eq!(read_points_csv("0,0\n1\n"), Err(EuclidError::DimensionMismatch(1, 2)));
        assert_eq!(read_points_csv("# nothing\n"), Err(EuclidError::Empty));
        assert!(matches!(read_points_csv("x\n"), Err(EuclidError::Invalid(_))));
    }

    #[test]
    fn svg_flips_y() {
        let e = PointCloudSet::new(2, vec![vec![rat(1, 2), rat(1, 4)]], int(0)).unwrap();
        let s = write_svg(&e, "a<b").unwrap();
        assert!(s.contains("cx=\"0.5\" cy=\"-0.25\""));
        assert!(s.contains("a&lt;b"));
    }
}
