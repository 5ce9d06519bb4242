use locrich::euclid::{
    hausdorff_points, porosity_profile, similar_up_to, zoom_points, PointCloudSet, PorositySettings,
};
use locrich::rational::{int, rat, Rational};
use locrich::zoo::{cantor_build, moran_dimension, C0Params, CantorParams, IfsSystem};
use num::traits::Zero;
use proptest::prelude::*;

type Pt = Vec<Rational>;

fn point(dim: usize) -> impl Strategy<Value = Pt> {
    proptest::collection::vec((-64i64..=64).prop_map(|k| rat(k, 64)), dim)
}

fn cloud(dim: usize) -> impl Strategy<Value = Vec<Pt>> {
    proptest::collection::vec(point(dim), 1..12)
}

/// √a ≤ √b + √c, decided in rationals.
fn sqrt_triangle(a: &Rational, b: &Rational, c: &Rational) -> bool {
    let e = a - b - c;
    e <= Rational::zero() || &e * &e <= int(4) * b * c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn zoom_scales_hausdorff_exactly(a in cloud(2), b in cloud(2), x in point(2), k in 1i64..=8) {
        let t = rat(k, 4);
        let (za, zb) = (zoom_points(&a, &x, &t), zoom_points(&b, &x, &t));
        // zooming clips to the unit cube, so only compare when nothing was clipped
        prop_assume!(za.len() == a.len() && zb.len() == b.len());
        prop_assert_eq!(hausdorff_points(&za, &zb), hausdorff_points(&a, &b) / (&t * &t));
    }

    #[test]
    fn hausdorff_is_a_metric(a in cloud(2), b in cloud(2), c in cloud(2)) {
        let ab = hausdorff_points(&a, &b);
        prop_assert_eq!(&ab, &hausdorff_points(&b, &a));
        prop_assert!(hausdorff_points(&a, &a).is_zero());
        prop_assert!(sqrt_triangle(&hausdorff_points(&a, &c), &ab, &hausdorff_points(&b, &c)));
    }

    #[test]
    fn similarity_is_reflexive(a in cloud(2)) {
        let s = PointCloudSet::new(2, a, int(0)).unwrap();
        let m = similar_up_to(&s, &s, 0.5, 1e-9);
        let m = m.matched().cloned();
        prop_assert!(m.is_some());
        let m = m.unwrap();
        prop_assert!((m.lambda - 1.0).abs() < 1e-9 && m.residual <= 1e-9, "{:?}", m);
    }

    #[test]
    fn porosity_stays_in_range(a in cloud(1), pick in 0usize..12, k in 1i64..=8) {
        let x = a[pick % a.len()].clone();
        let s = PointCloudSet::new(1, a, int(0)).unwrap();
        let radii: Vec<Rational> = (k..k + 4).map(|j| rat(1, j)).collect();
        let p = porosity_profile(&s, &x, &radii, &PorositySettings::default()).unwrap();
        prop_assert!(p.rows.iter().all(|r| (0.0..=0.5).contains(&r.por)));
    }

    #[test]
    fn moran_root_and_monotone_trace(rs in proptest::collection::vec(1u32..=9, 2..6)) {
        let ratios: Vec<f64> = rs.iter().map(|&k| k as f64 / 10.0).collect();
        let tol = 1e-10;
        let m = moran_dimension(&ratios, tol).unwrap();
        let sum: f64 = ratios.iter().map(|r| r.powf(m.s)).sum();
        // |Σr^s − 1| is bounded by the half bracket times the slope of the sum
        let slope: f64 = ratios.iter().map(|r| r.powf(m.s) * -r.ln()).sum();
        prop_assert!((sum - 1.0).abs() <= tol * slope.max(1.0), "s {} sum {}", m.s, sum);
        let mut trace = m.trace.clone();
        trace.sort_by(|a, b| a.0.total_cmp(&b.0));
        prop_assert!(trace.windows(2).all(|w| w[1].1 <= w[0].1));
    }

    #[test]
    fn cantor_children_align(ms in proptest::collection::vec(2u32..=4, 1..=4), lams in proptest::collection::vec(2i64..=6, 4)) {
        let lam: Vec<Rational> = ms.iter().zip(&lams).map(|(&m, &q)| rat(1, m as i64 * q)).collect();
        let p = CantorParams::new(ms.clone(), lam).unwrap();
        let mut parents = cantor_build(&p, 0).unwrap();
        for k in 0..ms.len() {
            let kids = cantor_build(&p, k + 1).unwrap();
            let m = ms[k] as usize;
            prop_assert_eq!(kids.len(), parents.len() * m);
            for (i, parent) in parents.iter().enumerate() {
                let c = &kids[i * m..(i + 1) * m];
                prop_assert_eq!(&c[0].left, &parent.left);
                prop_assert_eq!(c[m - 1].right(), parent.right());
                let step = &c[1].left - &c[0].left;
                prop_assert!(c.windows(2).all(|w| &w[1].left - &w[0].left == step));
                prop_assert!(c.iter().all(|ch| ch.len == &parent.len * &p.lam[k]));
            }
            parents = kids;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// At x = f_w(0) the view at scale r_w·t reproduces C at scale t for every t in (0, 1]: the
    /// zoom is a window of C magnified by λ = 1/t, and λ ∈ [1, 1/c] once t is at least the
    /// least first-level ratio c.
    #[test]
    fn finitely_generated_points_see_the_set(
        w in proptest::collection::vec((1usize..=2, 0usize..4), 1..=2),
        k in 1i64..=4,
    ) {
        let p = C0Params::defaults(1, C0Params::default_gammas(1, 2, 2, 2));
        let sys = IfsSystem::cinf(&p, 3).unwrap();
        let word: Vec<(usize, usize)> = w.iter().map(|&(n, m)| (n, m % sys.levels[n - 1].xi.len())).collect();
        let c = sys.levels[..2].iter().map(|l| l.ratio.clone()).min().unwrap();
        let t = &c + (int(1) - &c) * rat(k - 1, 3);
        let lambda = int(1) / &t;
        prop_assert!(lambda >= int(1) && lambda <= int(1) / &c);
        prop_assert!(sys.self_similarity_check(&word, &t).unwrap().squared.is_zero());
    }
}

#[test]
fn porosity_of_accumulation_point_reaches_half() {
    let mut pts = vec![vec![int(0)]];
    pts.extend((1..=64).map(|n| vec![rat(1, n)]));
    let s = PointCloudSet::new(1, pts, int(0)).unwrap();
    let p = porosity_profile(&s, &[int(0)], &locrich::euclid::harmonic_radii(2, 16), &PorositySettings::default()).unwrap();
    assert!(p.upper_est >= 0.45, "{p:?}");
}
