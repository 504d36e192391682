//! Exact survival function of `‖Σ aᵢ ξᵢ‖` next to a Monte Carlo estimate.

use spheretail::sampling::McEstimate;
use spheretail::sphere_sum::{norm_distribution, sample_norm, CoefficientVector};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c = CoefficientVector::new(4, vec![1.0, 0.8, -0.6, 0.3])?;
    let dist = norm_distribution(&c)?;
    println!("support [{}, {}], {} grid points", dist.support().0, dist.support().1, dist.grid().len());

    let n = 1_000_000;
    let samples = sample_norm(&c, n, 42);
    println!("{:>6} {:>22} {:>12} {:>10}", "t", "survival", "MC", "z");
    for &t in &[0.2, 0.5, 1.0, 1.5, 2.0, 2.4, 2.6] {
        let s = dist.survival(t);
        let mc = McEstimate::from_hits(samples.iter().filter(|&&x| x > t).count(), n);
        let z = (mc.estimate - s) / (s * (1.0 - s) / n as f64).sqrt().max(1e-300);
        println!("{t:>6} {s:>22.15e} {:>12.6} {z:>10.2}", mc.estimate);
    }
    println!("upper 1e-9 quantile: {:.12}", dist.quantile_survival(1e-9));

    // two unit vectors in the plane: P(|ξ₁ + ξ₂| > 1) = 2/3
    let two = norm_distribution(&CoefficientVector::new(2, vec![1.0, 1.0])?)?;
    println!("d = 2, a = (1, 1): survival(1) = {:.12}", two.survival(1.0));
    Ok(())
}
