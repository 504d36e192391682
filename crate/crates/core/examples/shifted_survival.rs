//! `P(‖X + x‖ > t)` for a rotationally invariant `X` and a fixed vector `x`,
//! from the law of `‖X‖` alone.

use spheretail::sphere_sum::{lemma4_transform, norm_distribution, point_mass, CoefficientVector};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // X = e on the circle, |x| = 0.5: the arc-length value arccos(0.19)/π
    let p = point_mass(2, 1.0)?;
    println!(
        "d = 2: {:.15} vs arccos(0.19)/pi = {:.15}",
        lemma4_transform(&p, 0.5, 1.2)?,
        0.19f64.acos() / std::f64::consts::PI
    );

    // adding the largest coefficient last reproduces the full law
    let d = 3;
    let rest = norm_distribution(&CoefficientVector::new(d, vec![0.7, 0.4])?)?;
    let full = norm_distribution(&CoefficientVector::new(d, vec![1.0, 0.7, 0.4])?)?;
    for &t in &[1.05, 1.4, 1.8, 2.05] {
        println!(
            "t = {t}: transform {:.12}  propagated {:.12}",
            lemma4_transform(&rest, 1.0, t)?,
            full.survival(t)
        );
    }
    Ok(())
}
