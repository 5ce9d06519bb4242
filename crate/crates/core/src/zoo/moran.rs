use super::ZooError;

/// Contraction ratios of a possibly infinite IFS: finitely many explicit ratios and an
/// upper bound for the sum of the remaining r_i^s.
pub trait RatioSource {
    fn terms(&self) -> &[f64];
    fn tail(&self, s: f64) -> f64;
}

/// Level n contributes `counts[n]` maps of ratio `ratios[n]`; the tail is a user bound.
pub struct LevelRatios<F: Fn(f64) -> f64> {
    expanded: Vec<f64>,
    tail: F,
}

impl<F: Fn(f64) -> f64> LevelRatios<F> {
    pub fn new(counts: &[usize], ratios: &[f64], tail: F) -> Self {
        let mut expanded = Vec::new();
        for (&c, &r) in counts.iter().zip(ratios) {
            expanded.extend(std::iter::repeat(r).take(c));
        }
        LevelRatios { expanded, tail }
    }
}

impl<F: Fn(f64) -> f64> RatioSource for LevelRatios<F> {
    fn terms(&self) -> &[f64] {
        &self.expanded
    }

    fn tail(&self, s: f64) -> f64 {
        (self.tail)(s)
    }
}

/// Finitely many ratios, no tail.
impl RatioSource for Vec<f64> {
    fn terms(&self) -> &[f64] {
        self
    }

    fn tail(&self, _s: f64) -> f64 {
        0.0
    }
}

/// r_i = q^i for i ≥ 1, the first `n` listed explicitly.
pub struct GeometricRatios {
    q: f64,
    n: usize,
    terms: Vec<f64>,
}

impl GeometricRatios {
    pub fn new(q: f64, n: usize) -> Self {
        GeometricRatios { q, n, terms: (1..=n as i32).map(|i| q.powi(i)).collect() }
    }
}

impl RatioSource for GeometricRatios {
    fn terms(&self) -> &[f64] {
        &self.terms
    }

    fn tail(&self, s: f64) -> f64 {
        let x = self.q.powf(s);
        x.powi(self.n as i32 + 1) / (1.0 - x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MoranResult {
    pub s: f64,
    /// bracket [Σ_partial, Σ_partial + tail] at s
    pub sum_lower: f64,
    pub sum_upper: f64,
    /// (s, lower, upper) for every evaluation, in evaluation order
    pub trace: Vec<(f64, f64, f64)>,
}

fn bracket(src: &dyn RatioSource, s: f64) -> (f64, f64) {
    let p: f64 = src.terms().iter().map(|r| r.powf(s)).sum();
    (p, p + src.tail(s))
}

/// inf{s > 0 : Σ r_i^s < 1} by bisection on the bracketed sum.
pub fn moran_dimension(src: &dyn RatioSource, tol: f64) -> Result<MoranResult, ZooError> {
    const STEPS: usize = 200;
    let mut trace = Vec::new();
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    loop {
        let (l, u) = bracket(src, hi);
        trace.push((hi, l, u));
        if u < 1.0 {
            break;
        }
        lo = hi;
        hi *= 2.0;
        if hi > 1e6 {
            return Err(ZooError::NoConvergence(trace.len()));
        }
    }
    for _ in 0..STEPS {
        if hi - lo <= tol {
            break;
        }
        let mid = (lo + hi) / 2.0;
        let (l, u) = bracket(src, mid);
        trace.push((mid, l, u));
        if l > 1.0 {
            lo = mid;
        } else if u < 1.0 {
            hi = mid;
        } else if u - l > tol {
            // the tail bound is too loose to decide
            return Err(ZooError::NoConvergence(trace.len()));
        } else {
            lo = mid;
            hi = mid;
        }
    }
    if hi - lo > tol {
        return Err(ZooError::NoConvergence(STEPS));
    }
    let mut sorted = trace.clone();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    assert!(sorted.windows(2).all(|w| w[1].1 <= w[0].1 && w[1].2 <= w[0].2 + 1e-15), "sum not decreasing in s");
    let s = (lo + hi) / 2.0;
    let (sum_lower, sum_upper) = bracket(src, s);
    Ok(MoranResult { s, sum_lower, sum_upper, trace })
}
