use std::f64::consts::PI;

use super::gamma::reg_gamma_upper;

/// Standard normal density.
pub fn std_normal_pdf(t: f64) -> f64 {
    (-0.5 * t * t).exp() / (2.0 * PI).sqrt()
}

/// Standard normal CDF `Φ(t)`, via `Φ(−|t|) = ½ Q(½, t²/2)`.
pub fn std_normal_cdf(t: f64) -> f64 {
    if t.is_nan() {
        return f64::NAN;
    }
    if t.is_infinite() {
        return if t > 0.0 { 1.0 } else { 0.0 };
    }
    // shape 1/2 and x >= 0 are always in-domain
    let lower_tail = 0.5 * reg_gamma_upper(0.5, 0.5 * t * t).unwrap_or(0.0);
    if t < 0.0 {
        lower_tail
    } else {
        1.0 - lower_tail
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchors() {
        assert_eq!(std_normal_cdf(0.0), 0.5);
        assert!((std_normal_cdf(-2.0) - 0.022_750_131_948_179_2).abs() < 1e-13);
        assert!((std_normal_cdf(40.0) - 1.0).abs() < 1e-15);
        assert!(std_normal_cdf(-40.0) >= 0.0);
    }

    #[test]
    fn symmetry() {
        for i in -80..=80 {
            let t = f64::from(i) / 10.0;
            assert!((std_normal_cdf(-t) - (1.0 - std_normal_cdf(t))).abs() < 1e-15);
        }
    }

    #[test]
    fn derivative_matches_density() {
        for i in -30..=30 {
            let t = f64::from(i) / 7.0;
            let h = 1e-5;
            let fd = (std_normal_cdf(t + h) - std_normal_cdf(t - h)) / (2.0 * h);
            assert!((fd - std_normal_pdf(t)).abs() < 1e-9);
        }
    }
}
