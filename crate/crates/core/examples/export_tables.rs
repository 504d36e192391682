//! CSV and JSON forms of a distribution, read back to check nothing is lost.

use spheretail::sphere_sum::{norm_distribution, parse_csv, CoefficientVector, DistributionEnvelope};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dist = norm_distribution(&CoefficientVector::new(3, vec![1.0, 0.5])?)?;
    let csv = dist.to_csv();
    print!("{}", csv.lines().take(4).map(|l| format!("{l}\n")).collect::<String>());
    let back = parse_csv(&csv).ok_or("unparseable csv")?;
    let worst = back
        .iter()
        .zip(dist.table())
        .map(|((r, c), (r0, c0))| ((r - r0).abs() / r0.abs().max(1e-300)).max((c - c0).abs() / c0.abs().max(1e-300)))
        .fold(0.0, f64::max);
    println!("{} rows, worst relative round-trip error {worst:e}", back.len());

    let env: DistributionEnvelope = serde_json::from_str(&dist.to_json())?;
    println!("json: d = {}, coefficients {:?}, method {}, {} points", env.d, env.coefficients, env.method, env.grid.len());
    Ok(())
}
