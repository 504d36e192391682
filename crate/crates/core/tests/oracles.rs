//! Closed-form and exact-sum anchors through the public API.

use std::f64::consts::PI;

use spheretail::ball_measure::{centred_ball_prob, shifted_ball_prob};
use spheretail::compare::{
    base_case_supremum, compare_general, compare_ko, counterexample, gaussian_side, proof_thresholds, rademacher_tail,
    search_constant, Regime, SearchSpec,
};
use spheretail::laplace_jd::{jd_auto, jd_zero};
use spheretail::specfun::{chi_square_sf, noncentral_chi_square_cdf, reg_inc_beta_pair, std_normal_cdf};
use spheretail::sphere_sum::{
    lemma4_transform, norm_distribution, point_mass, propagate, radial_mixture_distribution, CoefficientVector,
    EngineConfig, RadialLaw,
};

fn cv(d: u32, a: &[f64]) -> CoefficientVector {
    CoefficientVector::new(d, a.to_vec()).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn chi_square_closed_forms() {
    assert!(close(chi_square_sf(2, 2.0).unwrap(), (-1f64).exp(), 1e-15));
    assert!(close(chi_square_sf(2, 4.0).unwrap(), (-2f64).exp(), 1e-15));
    assert!(close(chi_square_sf(4, 4.0).unwrap(), 3.0 * (-2f64).exp(), 1e-15));
    // d = 1: P(|Z| > x) = 2(1 − Φ(x))
    for &x in &[0.1, 1.0, 2.5, 5.0] {
        let v = chi_square_sf(1, x * x).unwrap();
        assert!((v / (2.0 * std_normal_cdf(-x)) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn noncentral_one_dimension_matches_normal() {
    for &(mu, x) in &[(0.5f64, 1.0f64), (2.0, 1.5), (4.0, 6.0)] {
        let direct = std_normal_cdf(x - mu) - std_normal_cdf(-x - mu);
        let v = noncentral_chi_square_cdf(1, mu * mu, x * x).unwrap();
        assert!((v - direct).abs() < 1e-13, "{mu} {x}");
    }
}

#[test]
fn shifted_ball_reduces_to_centred() {
    for d in [2, 5, 17] {
        for r in [0.5, 2.0, 6.0] {
            let a = shifted_ball_prob(d, 0.0, r).unwrap();
            let b = centred_ball_prob(d, r).unwrap();
            assert!((a - b).abs() < 1e-14);
        }
    }
}

#[test]
fn incomplete_beta_symmetric_point() {
    // continued-fraction accuracy is a few ulps per unit of a
    for a in [0.5, 1.0, 3.5, 10.0, 60.0] {
        let (p, q) = reg_inc_beta_pair(a, a, 0.5, 0.5).unwrap();
        assert!(close(p, 0.5, 1e-13) && close(q, 0.5, 1e-13), "{a}: {p}");
    }
    // reflection I_x(a, b) = 1 − I_{1−x}(b, a)
    for &(a, b, x) in &[(2.0, 5.0, 0.3), (0.7, 12.0, 0.05), (30.0, 4.5, 0.9)] {
        let (p, _) = reg_inc_beta_pair(a, b, x, 1.0 - x).unwrap();
        let (_, q) = reg_inc_beta_pair(b, a, 1.0 - x, x).unwrap();
        assert!(close(p, q, 1e-14), "{a} {b} {x}");
    }
}

#[test]
fn jd_closed_forms() {
    assert!(close(jd_zero(-1).unwrap(), PI, 1e-14));
    assert!(close(jd_zero(1).unwrap(), PI / 2.0, 1e-14));
    assert!(((jd_auto(0, 3.0).unwrap().value) / (2.0 * 3f64.sinh() / 3.0) - 1.0).abs() < 1e-13);
}

#[test]
fn two_vector_closed_forms() {
    let d2 = norm_distribution(&cv(2, &[1.0, 1.0])).unwrap();
    assert!(close(d2.survival(1.0), 2.0 / 3.0, 1e-9));
    // |ξ₁ + ξ₂| = 2|cos(φ/2)| with φ uniform
    for &t in &[0.3, 1.2, 1.9] {
        let exact = 2.0 * (t / 2.0f64).acos() / PI;
        assert!(close(d2.survival(t), exact, 1e-9), "{t}");
    }
    // d = 3: |ξ₁ + ξ₂|² = 2 + 2θ with θ uniform on [−1, 1]
    let d3 = norm_distribution(&cv(3, &[1.0, 1.0])).unwrap();
    for &t in &[0.5, 1.0, 1.7] {
        assert!(close(d3.survival(t), 1.0 - t * t / 4.0, 1e-9), "{t}");
    }
    assert!(close(d3.survival(1.0), 0.75, 1e-9));
}

#[test]
fn single_coefficient_is_a_step() {
    let d = norm_distribution(&cv(6, &[-2.5])).unwrap();
    assert_eq!(d.survival(2.4999), 1.0);
    assert_eq!(d.survival(2.5), 0.0);
}

#[test]
fn propagation_equals_direct_build() {
    let base = point_mass(4, 1.0).unwrap();
    let step = propagate(&propagate(&base, 0.6).unwrap(), 0.3).unwrap();
    let direct = norm_distribution(&cv(4, &[1.0, 0.6, 0.3])).unwrap();
    for &t in &[0.2, 0.5, 0.9, 1.3, 1.8] {
        assert!(close(step.survival(t), direct.survival(t), 1e-8), "{t}");
    }
}

#[test]
fn arc_length_anchor() {
    let p = point_mass(2, 1.0).unwrap();
    assert!(close(lemma4_transform(&p, 0.5, 1.2).unwrap(), 0.19f64.acos() / PI, 1e-6));
}

#[test]
fn gaussian_side_examples() {
    let g = gaussian_side(&cv(4, &[1.0, 1.0]), 2f64.sqrt()).unwrap();
    assert!(close(g, 3.0 * (-2f64).exp(), 1e-15));
}

#[test]
fn comparison_examples() {
    let r = compare_ko(&cv(2, &[1.0]), 0.5).unwrap();
    assert_eq!(r.lhs, 1.0);
    assert!(close(r.ratio, 1.284, 1e-3));
    let r = compare_ko(&cv(2, &[1.0, 1.0]), 1.0).unwrap();
    assert!(close(r.lhs, 2.0 / 3.0, 1e-9));
    assert!(close(r.rhs, (-0.5f64).exp(), 1e-15));
    assert!(close(r.ratio, 1.099, 1e-3));
    for d in [2, 4, 9, 50] {
        let sup = base_case_supremum(d).unwrap();
        assert!(sup <= 33.0);
        let near = compare_ko(&cv(d, &[1.0]), 1.0 - 1e-10).unwrap();
        assert!((near.ratio / sup - 1.0).abs() < 1e-6);
    }
}

#[test]
fn radial_reductions() {
    let c = cv(3, &[1.0, 0.6]);
    let one = compare_general(&c, RadialLaw::Constant { r: 1.0 }, 0.9).unwrap();
    assert_eq!(one, compare_ko(&c, 0.9).unwrap());
    // homogeneity: constant radius r is the same as scaling a by r
    let half = radial_mixture_distribution(&c, RadialLaw::Constant { r: 0.5 }).unwrap();
    let scaled = norm_distribution(&c.scaled(0.5).unwrap()).unwrap();
    for &t in &[0.1, 0.3, 0.5, 0.7] {
        assert!(close(half.survival(t), scaled.survival(t), 1e-10));
    }
}

#[test]
fn regime_classification() {
    let c = cv(4, &[3.0, 1.0, 1.0]);
    let th = proof_thresholds(&c, 0.01).unwrap();
    assert_eq!(th.regime, Regime::TrivialBound);
    assert_eq!(th.trivial_bound_holds, Some(true));
    assert_eq!(proof_thresholds(&c, 4.9).unwrap().regime, Regime::Main);
    assert_eq!(proof_thresholds(&c, th.threshold).unwrap().regime, Regime::TrivialBound);
    assert_eq!(proof_thresholds(&cv(4, &[3.0]), 0.1).unwrap().regime, Regime::BaseCase);
}

#[test]
fn counterexample_binomial_and_crossing() {
    // exact: 2·P(Bin(100, 1/2) ≥ 61), summed with integer binomials in u128
    let mut c: u128 = 1;
    let mut tail: u128 = 0;
    for k in 0..=100u128 {
        if k >= 61 {
            tail += c;
        }
        c = c * (100 - k) / (k + 1);
    }
    let exact = 2.0 * tail as f64 / 2f64.powi(100);
    let tab = counterexample(100, &(2..=200).collect::<Vec<_>>()).unwrap();
    assert!((tab.lhs / exact - 1.0).abs() < 1e-13);
    assert!(close(tab.rows[0].rhs, (-4f64).exp(), 1e-15));
    assert!(tab.rhs_decreasing);
    let d_star = tab.crossing_d.unwrap();
    assert!(d_star <= 200);
    assert!(tab.lhs > 397.0 * chi_square_sf(d_star, 4.0 * f64::from(d_star)).unwrap());
    // m = 4, t = 1: only k = 0 and k = 4 have |2k − 4| > 2
    assert!(close(rademacher_tail(4, 1.0).unwrap(), 0.125, 1e-15));
}

#[test]
fn search_reaches_single_coefficient_supremum() {
    for d in [2, 5] {
        let spec = SearchSpec {
            d,
            m_max: 1,
            budget: 8,
            seed: 3,
            restarts: 2,
        };
        let r = search_constant(&spec, &EngineConfig::fast()).unwrap();
        let sup = base_case_supremum(d).unwrap();
        assert!((r.best_ratio / sup - 1.0).abs() < 1e-3, "{d}: {} vs {sup}", r.best_ratio);
        assert!(r.within_c0);
        assert_eq!(r.label, "empirical best ratio");
    }
}

#[test]
fn search_dominates_family_points() {
    let spec = SearchSpec {
        d: 2,
        m_max: 4,
        budget: 60,
        seed: 9,
        restarts: 2,
    };
    let r = search_constant(&spec, &EngineConfig::fast()).unwrap();
    for (_, v) in &r.families {
        assert!(r.best_ratio >= *v);
    }
    assert!(r.best_ratio <= 397.0 + 1e-6);
}
