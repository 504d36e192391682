//! Modified Bessel function of the first kind, `I_ν(z)`, for real `ν, z ≥ 0`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::gamma::log_gamma_unchecked;

/// Above this argument the large-`z` expansion is used.
pub const ASYMPTOTIC_THRESHOLD: f64 = 700.0;

/// How a value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Series,
    Quadrature,
    ClosedForm,
    MonteCarlo,
    Asymptotic,
}

/// A computed scalar with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub method: Method,
}

fn check(op: &'static str, nu: f64, z: f64) -> Result<()> {
    if !(nu >= 0.0 && nu.is_finite()) {
        return Err(Error::domain(op, format!("order {nu} must be finite and >= 0")));
    }
    if !(z >= 0.0 && z.is_finite()) {
        return Err(Error::domain(op, format!("argument {z} must be finite and >= 0")));
    }
    Ok(())
}

/// `ln I_ν(z)` for `z > 0`. Never overflows.
pub fn ln_bessel_i(nu: f64, z: f64) -> Result<EvalResult> {
    const OP: &str = "ln_bessel_i";
    check(OP, nu, z)?;
    if z == 0.0 {
        if nu == 0.0 {
            return Ok(EvalResult {
                value: 0.0,
                abs_error_estimate: 0.0,
                method: Method::ClosedForm,
            });
        }
        return Err(Error::domain(OP, "I_nu(0) = 0 for nu > 0 has no logarithm"));
    }
    if z > ASYMPTOTIC_THRESHOLD {
        if let Some(r) = ln_bessel_i_asymptotic(nu, z) {
            return Ok(r);
        }
    }
    Ok(ln_bessel_i_series(nu, z))
}

/// `I_ν(z)`; errors when the value is not representable as an `f64`.
pub fn bessel_i(nu: f64, z: f64) -> Result<EvalResult> {
    check("bessel_i", nu, z)?;
    if z == 0.0 {
        return Ok(EvalResult {
            value: if nu == 0.0 { 1.0 } else { 0.0 },
            abs_error_estimate: 0.0,
            method: Method::ClosedForm,
        });
    }
    let ln = ln_bessel_i(nu, z)?;
    let value = ln.value.exp();
    if !value.is_finite() {
        return Err(Error::domain(
            "bessel_i",
            format!("I_{nu}({z}) overflows; use ln_bessel_i"),
        ));
    }
    Ok(EvalResult {
        value,
        abs_error_estimate: value * ln.abs_error_estimate,
        method: ln.method,
    })
}

/// Power series `Σ (z/2)^{2k+ν} / (k! Γ(k+ν+1))` summed outward from its
/// largest term, in log scale.
fn ln_bessel_i_series(nu: f64, z: f64) -> EvalResult {
    let half = 0.5 * z;
    let q = half * half;
    // largest term: (k+1)(k+ν+1) ≈ q
    let k_peak = ((-(nu + 2.0) + (nu * nu + z * z).sqrt()) / 2.0).max(0.0).round();
    let ln_peak = (2.0 * k_peak + nu) * half.ln()
        - log_gamma_unchecked(k_peak + 1.0)
        - log_gamma_unchecked(k_peak + nu + 1.0);

    let mut sum = 1.0;
    let mut terms = 1.0f64;
    let mut t = 1.0;
    let mut k = k_peak;
    loop {
        t *= q / ((k + 1.0) * (k + nu + 1.0));
        sum += t;
        terms += 1.0;
        k += 1.0;
        if t < 1e-17 * sum {
            break;
        }
    }
    t = 1.0;
    k = k_peak;
    while k >= 1.0 {
        t *= k * (k + nu) / q;
        sum += t;
        terms += 1.0;
        k -= 1.0;
        if t < 1e-17 * sum {
            break;
        }
    }
    let ln_value = ln_peak + sum.ln();
    // rounding in the log-gamma normalisation dominates
    let err = 4.0 * f64::EPSILON * (ln_peak.abs() + terms.sqrt());
    EvalResult {
        value: ln_value,
        abs_error_estimate: err,
        method: Method::Series,
    }
}

/// Large-argument expansion
/// `I_ν(z) ≈ e^z / √(2πz) · Σ_k (−1)^k Π_{j≤k}(4ν² − (2j−1)²) / (k! (8z)^k)`.
/// Returns `None` if the terms start growing before reaching full precision.
fn ln_bessel_i_asymptotic(nu: f64, z: f64) -> Option<EvalResult> {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut largest = 1.0f64;
    for k in 1..400 {
        let kf = f64::from(k);
        let odd = 2.0 * kf - 1.0;
        let ratio = -(mu - odd * odd) / (8.0 * kf * z);
        term *= ratio;
        if term == 0.0 {
            break;
        }
        // past k ≈ ν the terms must shrink, otherwise the expansion diverges
        if odd * odd > mu && ratio.abs() >= 1.0 {
            return None;
        }
        sum += term;
        largest = largest.max(term.abs());
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    // transient growth costs digits through cancellation
    if largest > 1e4 {
        return None;
    }
    if !(sum > 0.0) {
        return None;
    }
    let value = z - 0.5 * (2.0 * PI * z).ln() + sum.ln();
    Some(EvalResult {
        value,
        abs_error_estimate: 4.0 * f64::EPSILON * (z + largest),
        method: Method::Asymptotic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_series(nu: f64, z: f64) -> f64 {
        let mut sum = 0.0;
        for k in 0..200 {
            let kf = f64::from(k);
            let ln_t = (2.0 * kf + nu) * (z / 2.0).ln()
                - log_gamma_unchecked(kf + 1.0)
                - log_gamma_unchecked(kf + nu + 1.0);
            sum += ln_t.exp();
        }
        sum
    }

    #[test]
    fn anchors() {
        assert_eq!(bessel_i(0.0, 0.0).unwrap().value, 1.0);
        assert_eq!(bessel_i(1.0, 0.0).unwrap().value, 0.0);
        // Σ (1/2)^{2k} / (k!)² at z = 1
        let mut oracle = 0.0;
        let mut t = 1.0;
        for k in 0..30 {
            if k > 0 {
                t *= 0.25 / f64::from(k * k);
            }
            oracle += t;
        }
        let i0 = bessel_i(0.0, 1.0).unwrap().value;
        assert!((i0 - oracle).abs() < 1e-15 * oracle);
        assert!((i0 - 1.266_065_877_752_008_4).abs() < 1e-14);
    }

    #[test]
    fn half_integer_closed_forms() {
        for &z in &[1e-3, 0.1, 1.0, 7.5, 30.0, 300.0] {
            let i_half = (2.0 / (PI * z)).sqrt() * z.sinh();
            let v = bessel_i(0.5, z).unwrap().value;
            assert!((v / i_half - 1.0).abs() < 1e-12, "z = {z}");
            let i_3half = (2.0 / (PI * z)).sqrt() * (z.cosh() - z.sinh() / z);
            let v = bessel_i(1.5, z).unwrap().value;
            if z > 1e-2 {
                assert!((v / i_3half - 1.0).abs() < 1e-11, "z = {z}: {v} vs {i_3half}");
            }
        }
    }

    #[test]
    fn series_against_naive_sum() {
        for &nu in &[0.0, 0.5, 3.0, 17.5, 30.5] {
            for &z in &[0.01, 0.7, 5.0, 40.0, 120.0] {
                let v = bessel_i(nu, z).unwrap().value;
                let n = naive_series(nu, z);
                assert!((v / n - 1.0).abs() < 1e-12, "nu = {nu}, z = {z}");
            }
        }
    }

    #[test]
    fn asymptotic_and_series_agree_past_threshold() {
        for &nu in &[0.0, 0.5, 10.0, 30.5, 61.0] {
            for &z in &[701.0, 900.0, 1500.0] {
                let a = ln_bessel_i_asymptotic(nu, z).expect("converges");
                let s = ln_bessel_i_series(nu, z);
                assert!(
                    (a.value - s.value).abs() < 1e-11 * a.value,
                    "nu = {nu}, z = {z}: {} vs {}",
                    a.value,
                    s.value
                );
            }
        }
    }

    #[test]
    fn overflow_goes_through_log_path() {
        assert!(bessel_i(0.0, 1000.0).is_err());
        let ln = ln_bessel_i(0.0, 1000.0).unwrap();
        assert!(ln.value.is_finite() && ln.value > 990.0);
        assert!(ln_bessel_i(2.0, 0.0).is_err());
        assert!(bessel_i(-1.0, 1.0).is_err());
    }
}
