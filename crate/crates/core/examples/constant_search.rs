//! Empirical search for the largest ratio in the plane (a lower bound on the
//! best constant, nothing more).

use spheretail::compare::{base_case_supremum, search_constant, SearchSpec};
use spheretail::sphere_sum::EngineConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = SearchSpec { d: 2, m_max: 4, budget: 200, seed: 11, restarts: 4 };
    let r = search_constant(&spec, &EngineConfig::fast())?;
    println!("{}: {:.12} after {} builds", r.label, r.best_ratio, r.evaluations);
    println!("witness a = {:?}, t = {:.9}", r.witness.coefficients, r.witness.t);
    println!("re-evaluated at full resolution: {:.12}", r.witness_full_resolution.ratio);
    for (name, v) in &r.families {
        println!("  family {name}: {v:.9}");
    }
    println!("single-coefficient supremum e = {:.12}", base_case_supremum(2)?);
    Ok(())
}
