//! CSV and JSON forms of a [`NormDistribution`].

use serde::{Deserialize, Serialize};

use crate::format::fmt17;

use super::{EngineConfig, NormDistribution, RadialLaw};

/// JSON envelope: instance, engine settings, and the `(grid, cdf)` table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionEnvelope {
    pub d: u32,
    pub coefficients: Vec<f64>,
    pub radial: RadialLaw,
    pub support_max: f64,
    pub method: String,
    pub engine: EngineConfig,
    pub grid: Vec<f64>,
    pub cdf: Vec<f64>,
}

impl NormDistribution {
    pub fn envelope(&self) -> DistributionEnvelope {
        let (grid, cdf) = self.table().into_iter().unzip();
        DistributionEnvelope {
            d: self.d,
            coefficients: self.coefficients.clone(),
            radial: self.radial,
            support_max: self.support_max,
            method: "quadrature".to_string(),
            engine: self.config,
            grid,
            cdf,
        }
    }

    /// `r,cdf` rows with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,cdf\n");
        for (r, c) in self.table() {
            out.push_str(&fmt17(r));
            out.push(',');
            out.push_str(&fmt17(c));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.envelope()).expect("envelope serialises")
    }
}

/// Parse the `r,cdf` CSV written by [`NormDistribution::to_csv`].
pub fn parse_csv(text: &str) -> Option<Vec<(f64, f64)>> {
    let mut lines = text.lines();
    if lines.next()? != "r,cdf" {
        return None;
    }
    lines
        .map(|l| {
            let (a, b) = l.split_once(',')?;
            Some((a.parse().ok()?, b.parse().ok()?))
        })
        .collect()
}
