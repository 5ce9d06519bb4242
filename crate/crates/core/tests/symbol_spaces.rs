use locrich::euclid::Cube;
use locrich::metric::{random_space, validate_metric_exact};
use locrich::pisigma::{enumerate_patterns, PiSchedule, PiSigma};
use locrich::rational::{int, rat, Rational};
use locrich::sigma::{build_sigma, minkowski_quotients, sigma_distance, sigma_distance_max, words, ScaleSchedule, ScheduleRule};
use num::traits::Signed;
use proptest::prelude::*;
use rand::SeedableRng;

fn rule(i: u8) -> ScheduleRule {
    match i % 3 {
        0 => ScheduleRule::Default,
        1 => ScheduleRule::HalfDelta,
        _ => ScheduleRule::Sparse,
    }
}

fn schedule(levels: usize, points: usize, den: u32, r: u8) -> Option<ScaleSchedule> {
    // some rules reject some pattern sequences (radii must decrease)
    ScaleSchedule::from_enumerator(levels, points, den, rule(r)).ok()
}

/// Random patterns with at least two points on the first level.
fn random_schedule(seed: u64, sizes: &[usize], r: u8) -> Option<ScaleSchedule> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let gammas = sizes.iter().enumerate().map(|(i, &n)| random_space(&mut rng, if i == 0 { n.max(2) } else { n }, 4)).collect();
    ScaleSchedule::new(gammas, rule(r)).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sigma_diameter_is_the_first_pattern(seed in any::<u64>(), sizes in proptest::collection::vec(1usize..=3, 1..=3), r in 0u8..3) {
        let s = random_schedule(seed, &sizes, r);
        prop_assume!(s.is_some());
        let s = s.unwrap();
        for n in 1..=sizes.len() {
            let sigma = build_sigma(&s, n).unwrap();
            prop_assert_eq!(sigma.space.diam(), s.gamma(1).diam());
        }
    }

    #[test]
    fn sigma_diameter_is_the_largest_level(levels in 1usize..=3, points in 2usize..=3, den in 1u32..=3, r in 0u8..3) {
        let s = schedule(levels, points, den, r);
        prop_assume!(s.is_some());
        let s = s.unwrap();
        let sigma = build_sigma(&s, levels).unwrap();
        let want = (1..=levels).map(|k| s.rho(k) * s.gamma(k).diam()).max().unwrap();
        prop_assert_eq!(sigma.space.diam(), &want);
    }

    #[test]
    fn distance_forms_agree_and_are_metric(levels in 1usize..=3, points in 2usize..=3, den in 1u32..=3, r in 0u8..3) {
        let s = schedule(levels, points, den, r);
        prop_assume!(s.is_some());
        let s = s.unwrap();
        let ws = words(&s, levels);
        for a in &ws {
            for b in &ws {
                prop_assert_eq!(sigma_distance(a, b, &s).unwrap(), sigma_distance_max(a, b, &s).unwrap());
            }
        }
        let sigma = build_sigma(&s, levels).unwrap();
        prop_assert!(validate_metric_exact(sigma.space.matrix().to_vec()).is_ok());
    }

    #[test]
    fn window_points_match_brute_force(
        dim in 1usize..=2,
        depth in 1usize..=3,
        cx in -8i64..=8,
        cy in -8i64..=8,
        half in 1i64..=6,
    ) {
        let pats = enumerate_patterns(dim, 2, 2, false);
        let gen = PiSigma::new(PiSchedule::cyclic(dim, pats, depth, 2).unwrap(), depth).unwrap();
        let s = &gen.schedule;
        let center: Vec<Rational> = [rat(cx, 8), rat(cy, 8)][..dim].to_vec();
        let window = Cube::new(center, rat(half, 16));
        let got: Vec<Vec<usize>> = gen.window_points(&window, depth).unwrap().into_iter().map(|p| p.coding).collect();
        let want: Vec<Vec<usize>> = gen
            .all_points(depth)
            .unwrap()
            .into_iter()
            .filter(|p| window.intersects(&Cube::new(p.point.clone(), s.rho(depth + 1))))
            .map(|p| p.coding)
            .collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn projection_continuity(dim in 1usize..=2, a in proptest::collection::vec(0usize..16, 5), b in proptest::collection::vec(0usize..16, 5)) {
        let pats = enumerate_patterns(dim, 2, 3, false);
        let s = PiSchedule::cyclic(dim, pats, 5, 2).unwrap();
        let fit = |c: &[usize]| c.iter().enumerate().map(|(k, &i)| i % s.gamma(k + 1).len()).collect::<Vec<_>>();
        let (a, b) = (fit(&a), fit(&b));
        if let Some(n0) = a.iter().zip(&b).position(|(x, y)| x != y).map(|k| k + 1) {
            let pa = s.project(&a).unwrap();
            let pb = s.project(&b).unwrap();
            let maxn = pa.iter().zip(&pb).map(|(x, y)| (x - y).abs()).max().unwrap();
            prop_assert!(maxn <= s.rho(n0 - 1) * int(2));
        }
    }
}

#[test]
fn sparse_schedule_quotients_decrease() {
    let s = schedule(5, 3, 2, 2).unwrap();
    let q = minkowski_quotients(&s, 5);
    assert!(q.len() >= 2);
    assert!(q.windows(2).all(|w| w[1].1 <= w[0].1), "{q:?}");
    assert!(q.iter().all(|v| v.1.is_finite() && v.1 > 0.0));
}

#[test]
fn sparse_rule_caps_radii() {
    let s = schedule(4, 3, 2, 2).unwrap();
    for n in 1..=s.levels() {
        let cap = num::pow(rat(1, s.gamma(n).len().max(1) as i64), n);
        assert!(s.gamma(n).len() < 2 || *s.r(n) <= cap, "r_{n} = {}", s.r(n));
    }
}
