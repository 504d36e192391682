//! A small seeded run of the random-instance harness, plain and with radii.

use spheretail::compare::{harness, HarnessSpec, RadialKind};
use spheretail::sphere_sum::EngineConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = HarnessSpec { instances: 12, ..HarnessSpec::standard(2024) };
    let cfg = EngineConfig::fast();
    let plain = harness(&spec, None, &cfg)?;
    println!("sphere sums: {} rows, max ratio {:.6}, pass {}", plain.rows.len(), plain.max_ratio, plain.pass);
    if let Some(w) = &plain.witness {
        println!("  witness: d = {}, a = {:?}, t = {:.6}", w.d, w.coefficients, w.result.t);
    }
    for kind in [RadialKind::Constant, RadialKind::Ball, RadialKind::TwoPoint] {
        let out = harness(&spec, Some(kind), &cfg)?;
        println!("{kind:?}: max ratio {:.6}, pass {}", out.max_ratio, out.pass);
    }
    Ok(())
}
