//! Gamma-family kernels: `ln Γ`, regularized incomplete gamma and beta,
//! and the chi-square laws built on them.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;
const MAX_ITER: usize = 200_000;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Remainder of Stirling's series, `ln Γ(x) − ((x − ½) ln x − x + ½ ln 2π)`,
/// for `x ≥ 10`.
fn stirling_remainder(x: f64) -> f64 {
    let r = 1.0 / x;
    let r2 = r * r;
    r * (1.0 / 12.0
        - r2 * (1.0 / 360.0
            - r2 * (1.0 / 1260.0
                - r2 * (1.0 / 1680.0
                    - r2 * (1.0 / 1188.0 - r2 * (691.0 / 360_360.0 - r2 / 156.0))))))
}

/// Natural log of the gamma function for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::domain("log_gamma", format!("x = {x} must be finite and > 0")));
    }
    Ok(log_gamma_unchecked(x))
}

pub(crate) fn log_gamma_unchecked(x: f64) -> f64 {
    if x == 1.0 || x == 2.0 {
        return 0.0;
    }
    if x >= 10.0 {
        return (x - 0.5) * x.ln() - x + HALF_LN_2PI + stirling_remainder(x);
    }
    // shift into the asymptotic range
    let mut shifted = x;
    let mut prod = 1.0;
    while shifted < 10.0 {
        prod *= shifted;
        shifted += 1.0;
    }
    (shifted - 0.5) * shifted.ln() - shifted + HALF_LN_2PI + stirling_remainder(shifted)
        - prod.ln()
}

/// `ln(1 + y) − y`, accurate for small `|y|`.
pub(crate) fn log1pmx(y: f64) -> f64 {
    if y.abs() < 0.5 {
        // alternating series −y²/2 + y³/3 − …
        let mut term = y;
        let mut sum = 0.0;
        let mut k = 2.0;
        loop {
            term *= -y;
            let add = term / k;
            sum += add;
            if add.abs() <= EPS * sum.abs() {
                break;
            }
            k += 1.0;
        }
        sum
    } else {
        y.ln_1p() - y
    }
}

/// `ln(xˢ e⁻ˣ / Γ(s))`, the common prefactor of both incomplete gamma
/// expansions. Uses the scaled Stirling form for large `s`, which keeps the
/// result accurate when `x ≈ s` are both large.
fn log_gamma_prefactor(s: f64, x: f64) -> f64 {
    if x == 0.0 {
        return f64::NEG_INFINITY;
    }
    if s >= 10.0 {
        let y = (x - s) / s;
        s * log1pmx(y) + 0.5 * s.ln() - HALF_LN_2PI - stirling_remainder(s)
    } else {
        s * x.ln() - x - log_gamma_unchecked(s)
    }
}

/// Incomplete gamma pair in a form that keeps the smaller tail accurate.
#[derive(Debug, Clone, Copy)]
struct GammaTails {
    lower: f64,
    upper: f64,
    /// `ln Q`, exact in the continued-fraction region.
    ln_upper: f64,
}

fn incomplete_gamma(op: &'static str, s: f64, x: f64) -> Result<GammaTails> {
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::domain(op, format!("shape s = {s} must be finite and > 0")));
    }
    if !(x >= 0.0) || x.is_nan() {
        return Err(Error::domain(op, format!("x = {x} must be >= 0")));
    }
    if x == 0.0 {
        return Ok(GammaTails {
            lower: 0.0,
            upper: 1.0,
            ln_upper: 0.0,
        });
    }
    if x.is_infinite() {
        return Ok(GammaTails {
            lower: 1.0,
            upper: 0.0,
            ln_upper: f64::NEG_INFINITY,
        });
    }
    let ln_pref = log_gamma_prefactor(s, x);
    if x < s + 1.0 {
        // series for P
        let mut ap = s;
        let mut del = 1.0 / s;
        let mut sum = del;
        let mut converged = false;
        for _ in 0..MAX_ITER {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if del.abs() < sum.abs() * EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Convergence {
                op,
                iterations: MAX_ITER,
                detail: format!("series at s = {s}, x = {x}"),
            });
        }
        let lower = (ln_pref + sum.ln()).exp().min(1.0);
        let upper = 1.0 - lower;
        Ok(GammaTails {
            lower,
            upper,
            ln_upper: (-lower).ln_1p(),
        })
    } else {
        // modified Lentz continued fraction for Q
        let mut b = x + 1.0 - s;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        let mut converged = false;
        for i in 1..MAX_ITER {
            let an = -(i as f64) * (i as f64 - s);
            b += 2.0;
            d = an * d + b;
            if d.abs() < TINY {
                d = TINY;
            }
            c = b + an / c;
            if c.abs() < TINY {
                c = TINY;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Convergence {
                op,
                iterations: MAX_ITER,
                detail: format!("continued fraction at s = {s}, x = {x}"),
            });
        }
        let ln_upper = ln_pref + h.ln();
        let upper = ln_upper.exp().min(1.0);
        Ok(GammaTails {
            lower: 1.0 - upper,
            upper,
            ln_upper,
        })
    }
}

/// Regularized lower incomplete gamma `P(s, x)`.
pub fn reg_gamma_lower(s: f64, x: f64) -> Result<f64> {
    Ok(incomplete_gamma("reg_gamma_lower", s, x)?.lower)
}

/// Regularized upper incomplete gamma `Q(s, x) = Γ(s, x) / Γ(s)`.
pub fn reg_gamma_upper(s: f64, x: f64) -> Result<f64> {
    Ok(incomplete_gamma("reg_gamma_upper", s, x)?.upper)
}

/// `ln Q(s, x)`; stays finite deep in the upper tail where `Q` underflows.
pub fn ln_reg_gamma_upper(s: f64, x: f64) -> Result<f64> {
    Ok(incomplete_gamma("ln_reg_gamma_upper", s, x)?.ln_upper)
}

fn check_dof(op: &'static str, d: u32) -> Result<f64> {
    if d == 0 {
        return Err(Error::domain(op, "degrees of freedom must be >= 1"));
    }
    Ok(f64::from(d))
}

/// `P(χ²_d > x)`.
pub fn chi_square_sf(d: u32, x: f64) -> Result<f64> {
    let k = check_dof("chi_square_sf", d)?;
    Ok(incomplete_gamma("chi_square_sf", 0.5 * k, 0.5 * x)?.upper)
}

/// `P(χ²_d ≤ x)`.
pub fn chi_square_cdf(d: u32, x: f64) -> Result<f64> {
    let k = check_dof("chi_square_cdf", d)?;
    Ok(incomplete_gamma("chi_square_cdf", 0.5 * k, 0.5 * x)?.lower)
}

/// `ln P(χ²_d > x)`.
pub fn ln_chi_square_sf(d: u32, x: f64) -> Result<f64> {
    let k = check_dof("ln_chi_square_sf", d)?;
    Ok(incomplete_gamma("ln_chi_square_sf", 0.5 * k, 0.5 * x)?.ln_upper)
}

/// Regularized incomplete beta `(I_x(a, b), 1 − I_x(a, b))`, given both
/// `x` and `y = 1 − x` so that neither tail suffers cancellation.
///
/// The tail that the continued fraction evaluates directly is accurate to
/// relative precision; the other is its complement.
pub fn reg_inc_beta_pair(a: f64, b: f64, x: f64, y: f64) -> Result<(f64, f64)> {
    const OP: &str = "reg_inc_beta";
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::domain(OP, format!("shapes a = {a}, b = {b} must be > 0")));
    }
    if !(x >= 0.0 && y >= 0.0) || (x + y - 1.0).abs() > 1e-12 {
        return Err(Error::domain(OP, format!("need x, y >= 0 with x + y = 1 (x = {x}, y = {y})")));
    }
    if x == 0.0 {
        return Ok((0.0, 1.0));
    }
    if y == 0.0 {
        return Ok((1.0, 0.0));
    }
    let ln_beta = log_gamma_unchecked(a) + log_gamma_unchecked(b) - log_gamma_unchecked(a + b);
    if x < (a + 1.0) / (a + b + 2.0) {
        let front = (a * x.ln() + b * ln_complement(y, x) - ln_beta).exp() / a;
        let lower = front * beta_cf(OP, a, b, x)?;
        Ok((lower, 1.0 - lower))
    } else {
        let front = (b * y.ln() + a * ln_complement(x, y) - ln_beta).exp() / b;
        let upper = front * beta_cf(OP, b, a, y)?;
        Ok((1.0 - upper, upper))
    }
}

/// `ln y` for `y = 1 − x`, taking whichever route avoids cancellation.
fn ln_complement(y: f64, x: f64) -> f64 {
    if x < 0.5 {
        (-x).ln_1p()
    } else {
        y.ln()
    }
}

fn beta_cf(op: &'static str, a: f64, b: f64, x: f64) -> Result<f64> {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            return Ok(h);
        }
    }
    Err(Error::Convergence {
        op,
        iterations: MAX_ITER,
        detail: format!("beta continued fraction at a = {a}, b = {b}, x = {x}"),
    })
}

/// `Γ(d/2 + 1) √π / Γ(d/2 + 3/2)` in log form, i.e. `ln ∫₋₁¹ (1 − x²)^{d/2} dx`.
pub(crate) fn ln_power_integral(half_exponent: f64) -> f64 {
    0.5 * PI.ln() + log_gamma_unchecked(half_exponent + 1.0)
        - log_gamma_unchecked(half_exponent + 1.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn log_gamma_anchors() {
        assert!(log_gamma(1.0).unwrap().abs() < 1e-14);
        let half = log_gamma(0.5).unwrap();
        assert!(close(half, 0.5 * PI.ln(), 1e-13 * half));
        // 9! = 362880
        let ten = log_gamma(10.0).unwrap();
        assert!(close(ten, 362_880f64.ln(), 1e-13 * ten));
    }

    #[test]
    fn log_gamma_matches_factorials() {
        let mut fact = 1.0f64;
        for n in 1..60u32 {
            let lg = log_gamma(f64::from(n) + 1.0).unwrap();
            fact *= f64::from(n);
            let exact = fact.ln();
            assert!(
                (lg - exact).abs() <= 1e-13 * exact.abs().max(1.0),
                "n = {n}: {lg} vs {exact}"
            );
        }
    }

    #[test]
    fn log_gamma_rejects_bad_domain() {
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.5).is_err());
        assert!(log_gamma(f64::NAN).is_err());
        assert!(log_gamma(f64::INFINITY).is_err());
    }

    #[test]
    fn upper_gamma_closed_forms() {
        assert!(close(reg_gamma_upper(1.0, 1.0).unwrap(), (-1.0f64).exp(), 1e-13));
        assert!(close(reg_gamma_upper(2.0, 2.0).unwrap(), 3.0 * (-2.0f64).exp(), 1e-13));
        assert_eq!(reg_gamma_upper(3.5, 0.0).unwrap(), 1.0);
        assert!(reg_gamma_upper(0.0, 1.0).is_err());
        assert!(reg_gamma_upper(1.0, -1.0).is_err());
    }

    #[test]
    fn chi_square_closed_forms() {
        assert!(close(chi_square_sf(2, 2.0).unwrap(), (-1.0f64).exp(), 1e-13));
        assert!(close(chi_square_sf(2, 4.0).unwrap(), (-2.0f64).exp(), 1e-13));
        assert_eq!(chi_square_sf(7, 0.0).unwrap(), 1.0);
        assert!(chi_square_sf(0, 1.0).is_err());
    }

    #[test]
    fn even_dof_survival_matches_poisson_sum() {
        for d in (2..=80u32).step_by(2) {
            for &x in &[0.1, 1.0, 3.0, 10.0, 40.0, 90.0, 150.0] {
                let half: f64 = x / 2.0;
                let mut term = (-half).exp();
                let mut sum = 0.0;
                for j in 0..d / 2 {
                    if j > 0 {
                        term *= half / f64::from(j);
                    }
                    sum += term;
                }
                let sf = chi_square_sf(d, x).unwrap();
                assert!((sf - sum).abs() <= 1e-12, "d = {d}, x = {x}: {sf} vs {sum}");
            }
        }
    }

    #[test]
    fn lower_plus_upper_is_one() {
        let shapes = [0.5, 1.0, 2.5, 7.0, 10.0, 33.3, 100.0];
        for &s in &shapes {
            for i in 0..=50 {
                let x = 10.0 * s * f64::from(i) / 50.0;
                let p = reg_gamma_lower(s, x).unwrap();
                let q = reg_gamma_upper(s, x).unwrap();
                assert!((p + q - 1.0).abs() <= 1e-13, "s = {s}, x = {x}");
                assert!((0.0..=1.0).contains(&p) && (0.0..=1.0).contains(&q));
            }
        }
    }

    #[test]
    fn log_upper_tail_stays_finite() {
        let ln_q = ln_chi_square_sf(2, 2000.0).unwrap();
        assert!(close(ln_q, -1000.0, 1e-9));
        assert_eq!(chi_square_sf(2, 2000.0).unwrap(), 0.0);
    }

    #[test]
    fn large_shape_median_region() {
        // P(χ²_d > d) → 1/2 from below-ish with O(d^{-1/2}) correction
        let sf = chi_square_sf(10_000, 10_000.0).unwrap();
        assert!((sf - 0.5).abs() < 0.01, "{sf}");
        assert!(sf < 0.5);
    }

    #[test]
    fn inc_beta_closed_forms() {
        // I_x(1, 1) = x
        let (lo, up) = reg_inc_beta_pair(1.0, 1.0, 0.3, 0.7).unwrap();
        assert!(close(lo, 0.3, 1e-14) && close(up, 0.7, 1e-14));
        // I_x(1/2, 1/2) = (2/π) asin √x
        for &x in &[1e-12, 1e-6, 0.01, 0.2, 0.5, 0.8, 0.999] {
            let (lo, up) = reg_inc_beta_pair(0.5, 0.5, x, 1.0 - x).unwrap();
            let exact = 2.0 / PI * x.sqrt().asin();
            assert!((lo - exact).abs() <= 1e-14 * exact.max(1e-300) + 1e-15, "x = {x}");
            assert!((lo + up - 1.0).abs() < 1e-14);
        }
        // relative accuracy of a tiny upper tail: I_y(b, a) with y = 1e-10
        let (_, up) = reg_inc_beta_pair(0.5, 0.5, 1.0 - 1e-10, 1e-10).unwrap();
        let exact = 2.0 / PI * (1e-10f64).sqrt().asin();
        assert!((up / exact - 1.0).abs() < 1e-13);
    }

    #[test]
    fn power_integral_anchors() {
        assert!(close(ln_power_integral(-0.5).exp(), PI, 1e-14));
        assert!(close(ln_power_integral(0.0).exp(), 2.0, 1e-14));
        assert!(close(ln_power_integral(0.5).exp(), PI / 2.0, 1e-14));
        assert!(close(ln_power_integral(1.0).exp(), 4.0 / 3.0, 1e-14));
    }
}
