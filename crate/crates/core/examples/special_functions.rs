//! Chi-square tails, the noncentral chi-square CDF, Bessel `I_ν` and a
//! Gauss–Jacobi rule, each next to a value it can be checked against.

use spheretail::specfun::{
    bessel_i, chi_square_sf, ln_bessel_i, gauss_jacobi_rule, ln_chi_square_sf, noncentral_chi_square_cdf, std_normal_cdf,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("P(chi2_2 > 2)        = {:.15e}  (e^-1 = {:.15e})", chi_square_sf(2, 2.0)?, (-1f64).exp());
    println!("P(chi2_4 > 4)        = {:.15e}  (3e^-2 = {:.15e})", chi_square_sf(4, 4.0)?, 3.0 * (-2f64).exp());
    println!("ln P(chi2_3 > 4000)  = {:.10}", ln_chi_square_sf(3, 4000.0)?);

    // one degree of freedom: P(|Z + μ| ≤ x) from the normal CDF
    let (mu, x) = (1.3f64, 2.0f64);
    let direct = std_normal_cdf(x - mu) - std_normal_cdf(-x - mu);
    println!(
        "noncentral chi2_1(λ=μ²) at x²: {:.15e} vs normal CDF {:.15e}",
        noncentral_chi_square_cdf(1, mu * mu, x * x)?,
        direct
    );

    let i = bessel_i(0.5, 2.0)?;
    let closed = (2.0 / (std::f64::consts::PI * 2.0)).sqrt() * 2f64.sinh();
    println!("I_1/2(2) = {:.15e} [{:?}], closed form {:.15e}", i.value, i.method, closed);
    let big = ln_bessel_i(30.5, 900.0)?;
    println!("ln I_30.5(900) = {:.12} [{:?}]", big.value, big.method);

    // ∫ (1 − x²)^{3/2} x² dx over [−1, 1] = π/16
    let rule = gauss_jacobi_rule(1.5, 8)?;
    println!("Gauss–Jacobi (α = 3/2, n = 8): {:.15e} vs π/16 = {:.15e}", rule.integrate(|x| x * x), std::f64::consts::PI / 16.0);
    Ok(())
}
