//! Vectors `±e₁` have a dimension-free tail, while the Gaussian side decays
//! with `d`: the ratio passes 397 at a modest dimension.

use spheretail::compare::counterexample;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ds: Vec<u32> = (2..=200).collect();
    let tab = counterexample(100, &ds)?;
    println!("P(|sum of 100 signs| > 20) = {:.15e}", tab.lhs);
    for row in tab.rows.iter().take(12) {
        println!("d = {:>3}: gaussian {:.6e}, ratio {:>10.3}{}", row.d, row.rhs, row.ratio, if row.exceeds_c0 { "  > 397" } else { "" });
    }
    println!("first d with ratio > 397: {:?}; gaussian side decreasing: {}", tab.crossing_d, tab.rhs_decreasing);
    Ok(())
}
