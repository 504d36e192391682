//! Sphere side against Gaussian side at a few points, with the regime each
//! point falls into.

use spheretail::compare::{base_case_supremum, compare_general, compare_ko, proof_thresholds};
use spheretail::sphere_sum::{CoefficientVector, RadialLaw};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c = CoefficientVector::new(3, vec![2.0, 1.0, 1.0, 0.5])?;
    let th = proof_thresholds(&c, 0.0)?.threshold;
    println!("trivial-bound threshold t* = {th:.6}");
    println!("{:>6} {:>14} {:>14} {:>10}  regime", "t", "sphere", "gaussian", "ratio");
    for &t in &[0.5, 2.0, 3.0, 3.8, 4.3, 4.45] {
        let r = compare_ko(&c, t)?;
        println!("{t:>6} {:>14.6e} {:>14.6e} {:>10.4}  {}", r.lhs, r.rhs, r.ratio, r.regime.label());
    }
    let r = compare_general(&c, RadialLaw::UniformBall, 2.0)?;
    println!("uniform-ball radii at t = 2: ratio {:.4}", r.ratio);
    for d in [2, 3, 10, 100] {
        println!("single coefficient, d = {d}: sup ratio = {:.6}", base_case_supremum(d)?);
    }
    Ok(())
}
