//! Gaussian measure of centred and shifted balls: the two tail constants and
//! the comparison between a centred ball and an enlarged shifted one.

use spheretail::ball_measure::{
    centred_ball_prob, mc_shifted_ball_prob, probe_small_radius, shifted_ball_prob, verify_lemma1, verify_lemma3,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (_, minima) = verify_lemma1(10_000)?;
    println!(
        "min P(chi2_d > d)   = {:.15} at d = {} (bound 1/33 = {:.15})",
        minima.min_centred,
        minima.argmin_centred,
        1.0 / 33.0
    );
    println!(
        "min P(chi2_d > d+2) = {:.15} at d = {} (bound 1/397 = {:.15})",
        minima.min_shifted,
        minima.argmin_shifted,
        1.0 / 397.0
    );

    let (d, shift, radius) = (6, 1.5, 3.0);
    let exact = shifted_ball_prob(d, shift, radius)?;
    let mc = mc_shifted_ball_prob(d, shift, radius, 400_000, 1);
    println!("\nP(|G - x| <= 3), d = 6, |x| = 1.5: {exact:.10} (Monte Carlo {:.5} ± {:.5})", mc.estimate, mc.std_error);
    println!("P(|G| <= 3): {:.10}", centred_ball_prob(d, radius)?);

    let d = 10;
    let r0 = f64::from(d + 2).sqrt();
    let a: Vec<f64> = (0..=50).map(|k| f64::from(k) / 10.0).collect();
    let r: Vec<f64> = (0..=8).map(|k| r0 + f64::from(k)).collect();
    for rep in verify_lemma3(d, &a, &r, 1e-9)? {
        println!("{}: pass = {}, worst margin {:.3e}", rep.claim, rep.pass, rep.worst_margin);
    }
    let breaks = probe_small_radius(&[2, 5, 10, 20], &a)?;
    println!("monotonicity breaks at R = sqrt(d)/2: {}", breaks.len());
    for b in breaks {
        println!("  d = {}: drop {:.3e} between a = {} and {}", b.d, b.drop, b.a_before, b.a_after);
    }
    Ok(())
}
