//! Property-based invariants.

use proptest::prelude::*;

use spheretail::ball_measure::shifted_ball_prob;
use spheretail::compare::gaussian_side;
use spheretail::laplace_jd::{check_bound_b, check_bound_c, check_bound_d, check_recursion_a};
use spheretail::sphere_sum::{norm_distribution_with, parse_csv, CoefficientVector, DistributionEnvelope, EngineConfig};

fn coeffs(max_m: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(
        prop_oneof![0.05f64..3.0, -3.0f64..-0.05],
        1..=max_m,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gaussian_side_depends_on_sum_of_squares(d in 2u32..40, a in coeffs(8), t in 0.0f64..10.0, k in 0.1f64..10.0, rot in 0usize..8) {
        let c = CoefficientVector::new(d, a.clone()).unwrap();
        let g = gaussian_side(&c, t).unwrap();
        let mut b: Vec<f64> = a.iter().map(|x| -x).collect();
        let len = b.len();
        b.rotate_left(rot % len);
        let g2 = gaussian_side(&CoefficientVector::new(d, b).unwrap(), t).unwrap();
        prop_assert_eq!(g, g2);
        // scaling perturbs x = t²d/Σa² by rounding only; the tail amplifies a
        // relative change in x by at most about x
        let x = t * t * f64::from(d) / c.sum_sq();
        let g3 = gaussian_side(&c.scaled(k).unwrap(), k * t).unwrap();
        prop_assert!((g - g3).abs() <= 1e-14 * (1.0 + x) * g + 1e-300);
    }

    #[test]
    fn jd_inequalities_hold(d in 2u32..120, lb in -4.0f64..3.0) {
        let b = 10f64.powf(lb);
        prop_assert!(check_recursion_a(d, b).unwrap() <= 1e-8);
        prop_assert!(check_bound_b(d, b).unwrap() >= -1e-10);
        prop_assert!(check_bound_c(d, b).unwrap() >= -1e-10);
        let (md, mh) = check_bound_d(d, b).unwrap();
        prop_assert!(md >= -1e-10 && mh >= -1e-10);
    }

    #[test]
    fn shifted_ball_is_a_probability_monotone_in_radius(d in 2u32..60, s in 0.0f64..20.0, r in 0.0f64..20.0, dr in 0.0f64..5.0) {
        let p = shifted_ball_prob(d, s, r).unwrap();
        let q = shifted_ball_prob(d, s, r + dr).unwrap();
        prop_assert!((0.0..=1.0).contains(&p));
        prop_assert!(q >= p - 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn survival_invariances(d in 2u32..10, a in coeffs(5), k in 0.2f64..5.0, rot in 0usize..5, u in 0.02f64..0.98) {
        let cfg = EngineConfig::fast();
        let c = CoefficientVector::new(d, a.clone()).unwrap();
        let base = norm_distribution_with(&c, &cfg).unwrap();
        let t = u * c.sum_abs();

        // permutation and signs: the engine sees only the sorted |aᵢ|
        let mut b: Vec<f64> = a.iter().enumerate().map(|(i, x)| if i % 2 == 0 { -x } else { *x }).collect();
        let len = b.len();
        b.rotate_left(rot % len);
        let other = norm_distribution_with(&CoefficientVector::new(d, b).unwrap(), &cfg).unwrap();
        prop_assert_eq!(base.survival(t), other.survival(t));

        // scaling moves t with the coefficients
        let scaled = norm_distribution_with(&c.scaled(k).unwrap(), &cfg).unwrap();
        prop_assert!((base.survival(t) - scaled.survival(k * t)).abs() <= 1e-8);

        // a survival function
        let mut prev = 1.0;
        for j in 0..=40 {
            let s = base.survival(c.sum_abs() * f64::from(j) / 40.0);
            prop_assert!((0.0..=1.0).contains(&s) && s <= prev);
            prev = s;
        }
    }

    #[test]
    fn tables_round_trip(d in 2u32..8, a in coeffs(4)) {
        let c = CoefficientVector::new(d, a).unwrap();
        let dist = norm_distribution_with(&c, &EngineConfig::fast()).unwrap();
        let table = dist.table();
        let back = parse_csv(&dist.to_csv()).unwrap();
        prop_assert_eq!(back.len(), table.len());
        for ((r, p), (r0, p0)) in back.iter().zip(&table) {
            prop_assert!((r - r0).abs() <= 1e-15 * r0.abs());
            prop_assert!((p - p0).abs() <= 1e-15 * p0.abs());
        }
        let env: DistributionEnvelope = serde_json::from_str(&dist.to_json()).unwrap();
        prop_assert_eq!(env, dist.envelope());
    }
}
