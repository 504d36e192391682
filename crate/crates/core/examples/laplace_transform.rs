//! `J_d(b) = ∫_{−1}^{1} e^{bx} (1 − x²)^{d/2} dx` from quadrature and from the
//! Bessel form, and the margins of the inequalities it satisfies.

use spheretail::laplace_jd::{
    check_bound_b, check_bound_c, check_bound_d, check_recursion_a, jd_auto, jd_bessel_oracle, jd_zero, JdQuery,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("J_0(0) = {}, J_1(0) = {:.15} (π/2)", jd_zero(0)?, jd_zero(1)?);
    println!("{:>4} {:>8} {:>24} {:>24}", "d", "b", "quadrature", "Bessel form");
    for &(d, b) in &[(-1, 1.0), (2, 0.5), (7, 20.0), (40, 300.0)] {
        let q = jd_auto(d, b)?;
        let o = jd_bessel_oracle(JdQuery::new(d, b)?)?;
        println!("{d:>4} {b:>8} {:>24.16e} {:>24.16e}", q.value, o.value);
    }
    println!("\n{:>4} {:>7} {:>11} {:>11} {:>11} {:>11} {:>11}", "d", "b", "recursion", "bound b", "bound c", "convexity", "Hoelder");
    for &d in &[2u32, 5, 30] {
        for &b in &[0.0, 1.0, 50.0] {
            let (md, mh) = check_bound_d(d, b)?;
            println!(
                "{d:>4} {b:>7} {:>11.2e} {:>11.2e} {:>11.2e} {:>11.2e} {:>11.2e}",
                check_recursion_a(d, b)?,
                check_bound_b(d, b)?,
                check_bound_c(d, b)?,
                md,
                mh
            );
        }
    }
    Ok(())
}
