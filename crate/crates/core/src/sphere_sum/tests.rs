use std::f64::consts::PI;

use super::*;

fn cv(d: u32, a: &[f64]) -> CoefficientVector {
    CoefficientVector::new(d, a.to_vec()).unwrap()
}

#[test]
fn theta_law_moments() {
    for d in [2u32, 3, 4, 7, 30] {
        let (m, s) = theta_moments(d).unwrap();
        assert!(m.abs() < 1e-12);
        assert!((s - 1.0 / f64::from(d)).abs() < 1e-10, "d = {d}: {s}");
        let law = ThetaLaw::new(d).unwrap();
        assert!((law.expect(|_| 1.0).unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn single_coefficient_is_a_step() {
    let dist = norm_distribution(&cv(4, &[-1.5])).unwrap();
    assert_eq!(dist.survival(1.4999), 1.0);
    assert_eq!(dist.survival(1.5), 0.0);
    assert_eq!(dist.survival(0.0), 1.0);
}

#[test]
fn two_unit_vectors_closed_forms() {
    // d = 2: S(t) = (2/π) arccos(t/2); d = 3: ‖ξ₁+ξ₂‖² uniform on [0, 4]
    let d2 = norm_distribution(&cv(2, &[1.0, 1.0])).unwrap();
    let d3 = norm_distribution(&cv(3, &[1.0, -1.0])).unwrap();
    for &t in &[0.1, 0.5, 1.0, 1.7, 1.99] {
        let e2 = 2.0 / PI * (t / 2.0f64).acos();
        assert!((d2.survival(t) - e2).abs() < 1e-9, "t = {t}");
        let e3 = 1.0 - t * t / 4.0;
        assert!((d3.survival(t) - e3).abs() < 1e-9, "t = {t}");
    }
    assert!((d2.survival(1.0) - 2.0 / 3.0).abs() < 1e-9);
    assert!((d3.survival(1.0) - 0.75).abs() < 1e-9);
}

#[test]
fn propagate_from_point_masses() {
    let p = point_mass(2, 1.0).unwrap();
    let q = propagate(&p, 1.0).unwrap();
    assert!((q.survival(1.0) - 2.0 / 3.0).abs() < 1e-9);
    let z = point_mass(5, 0.0).unwrap();
    let q = propagate(&z, -2.0).unwrap();
    assert_eq!(q.atoms(), &[(2.0, 1.0)]);
}

#[test]
fn lemma4_arc_length_anchor() {
    let p = point_mass(2, 1.0).unwrap();
    let v = lemma4_transform(&p, 0.5, 1.2).unwrap();
    assert!((v - 0.19f64.acos() / PI).abs() < 1e-9, "{v}");
    assert!(lemma4_transform(&p, 0.5, 0.4).is_err());
    assert_eq!(lemma4_transform(&p, 0.0, 0.9).unwrap(), 1.0);
}

#[test]
fn three_term_closed_form_third_step_matches_lemma4() {
    for d in [2u32, 3, 5] {
        let full = norm_distribution(&cv(d, &[1.0, 0.7, 0.4])).unwrap();
        let rest = norm_distribution(&cv(d, &[0.7, 0.4])).unwrap();
        for &t in &[1.05, 1.3, 1.6, 1.9, 2.05] {
            let a = lemma4_transform(&rest, 1.0, t).unwrap();
            let b = full.survival(t);
            assert!((a - b).abs() < 1e-6, "d = {d}, t = {t}: {a} vs {b}");
        }
    }
}
