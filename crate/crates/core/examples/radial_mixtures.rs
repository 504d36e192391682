//! Sums `Σ aᵢ Rᵢ ξᵢ` with random radii in `[0, 1]`, against Monte Carlo.

use spheretail::sampling::McEstimate;
use spheretail::sphere_sum::{radial_mixture_distribution, sample_norm_radial, CoefficientVector, RadialLaw};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c = CoefficientVector::new(5, vec![1.0, 0.7, 0.5])?;
    let n = 500_000;
    for spec in ["const:1", "const:0.5", "ball", "twopoint:0.2,1,0.3"] {
        let law = RadialLaw::parse(spec)?;
        let dist = radial_mixture_distribution(&c, law)?;
        let samples = sample_norm_radial(&c, law, n, 7);
        print!("{:<20}", law.label());
        for &t in &[0.4, 0.9, 1.4, 1.9] {
            let mc = McEstimate::from_hits(samples.iter().filter(|&&x| x > t).count(), n);
            print!("  S({t}) = {:.6} [{:.4}]", dist.survival(t), mc.estimate);
        }
        println!();
    }
    Ok(())
}
