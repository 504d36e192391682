//! Law of `‖Σ aᵢ Rᵢ ξᵢ‖` for independent uniform directions `ξᵢ` on `S^{d−1}`
//! and independent radii `Rᵢ ∈ [0, 1]` (identically 1 for plain sphere sums).
//!
//! The law is built by folding in one coefficient at a time, in decreasing
//! order of `|aᵢ|`. Each step is exact up to quadrature and interpolation;
//! see [`engine`] for the update formula. The first step from a point mass is
//! done in closed form with the incomplete beta function.

mod engine;
mod io;
mod tabulated;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{clamp_probability, Error, Result};
use crate::laplace_jd::jd_zero;
use crate::report::{ReportBuilder, VerificationReport};
use crate::sampling::{fill_sphere, par_sample};
use crate::specfun::{gauss_jacobi_rule, jacobi_nodes_weights, QuadratureRule};

use engine::{Angular, Law, ShiftAtom};

pub use io::{parse_csv, DistributionEnvelope};

/// Dimension and weights of one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientVector {
    pub d: u32,
    pub a: Vec<f64>,
}

impl CoefficientVector {
    pub fn new(d: u32, a: Vec<f64>) -> Result<Self> {
        if d < 2 {
            return Err(Error::Config(format!("dimension d = {d} must be >= 2")));
        }
        if a.is_empty() {
            return Err(Error::Config("at least one coefficient is required".into()));
        }
        if let Some(bad) = a.iter().find(|x| !(x.is_finite() && **x != 0.0)) {
            return Err(Error::Config(format!("coefficient {bad} must be finite and nonzero")));
        }
        Ok(Self { d, a })
    }

    pub fn m(&self) -> usize {
        self.a.len()
    }

    /// Summed in sorted order, so the value is exactly invariant under
    /// permutations and sign changes.
    pub fn sum_sq(&self) -> f64 {
        self.sorted_abs().iter().map(|x| x * x).sum()
    }

    pub fn sum_abs(&self) -> f64 {
        self.sorted_abs().iter().sum()
    }

    /// `|aᵢ|` sorted in decreasing order.
    pub fn sorted_abs(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.a.iter().map(|x| x.abs()).collect();
        v.sort_by(|x, y| y.total_cmp(x));
        v
    }

    pub fn scaled(&self, k: f64) -> Result<Self> {
        Self::new(self.d, self.a.iter().map(|x| x * k).collect())
    }
}

/// Law of the radius `Rᵢ` multiplying each direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RadialLaw {
    /// `R = r` almost surely.
    Constant { r: f64 },
    /// `R = U^{1/d}`, so that `Rξ` is uniform in the unit ball.
    UniformBall,
    /// `R = r1` with probability `p`, else `r2`.
    TwoPoint { r1: f64, r2: f64, p: f64 },
}

impl Default for RadialLaw {
    fn default() -> Self {
        RadialLaw::Constant { r: 1.0 }
    }
}

impl RadialLaw {
    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::domain("radial_law", format!("{name} = {v} must lie in [0, 1]")))
            }
        };
        match *self {
            RadialLaw::Constant { r } => unit("r", r),
            RadialLaw::UniformBall => Ok(()),
            RadialLaw::TwoPoint { r1, r2, p } => {
                unit("r1", r1)?;
                unit("r2", r2)?;
                unit("p", p)
            }
        }
    }

    /// Largest value of `R`.
    pub fn max_radius(&self) -> f64 {
        match *self {
            RadialLaw::Constant { r } => r,
            RadialLaw::UniformBall => 1.0,
            RadialLaw::TwoPoint { r1, r2, p } => {
                if p == 0.0 {
                    r2
                } else if p == 1.0 {
                    r1
                } else {
                    r1.max(r2)
                }
            }
        }
    }

    /// Parse `const:r`, `ball` or `twopoint:r1,r2,p`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("radial law '{s}': expected const:r, ball or twopoint:r1,r2,p"));
        let law = if s == "ball" {
            RadialLaw::UniformBall
        } else if let Some(r) = s.strip_prefix("const:") {
            RadialLaw::Constant {
                r: r.trim().parse().map_err(|_| bad())?,
            }
        } else if let Some(rest) = s.strip_prefix("twopoint:") {
            let v: Vec<f64> = rest
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad())?;
            if v.len() != 3 {
                return Err(bad());
            }
            RadialLaw::TwoPoint {
                r1: v[0],
                r2: v[1],
                p: v[2],
            }
        } else {
            return Err(bad());
        };
        law.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(law)
    }

    pub fn label(&self) -> String {
        match *self {
            RadialLaw::Constant { r } => format!("const:{r}"),
            RadialLaw::UniformBall => "ball".to_string(),
            RadialLaw::TwoPoint { r1, r2, p } => format!("twopoint:{r1},{r2},{p}"),
        }
    }

    /// Discrete stand-in for `|a| R` used by one fold step.
    fn shifts(&self, abs_a: f64, d: u32, cfg: &EngineConfig) -> Result<Vec<ShiftAtom>> {
        Ok(match *self {
            RadialLaw::Constant { r } => vec![ShiftAtom { s: r * abs_a, w: 1.0 }],
            RadialLaw::TwoPoint { r1, r2, p } => vec![
                ShiftAtom { s: r1 * abs_a, w: p },
                ShiftAtom {
                    s: r2 * abs_a,
                    w: 1.0 - p,
                },
            ],
            RadialLaw::UniformBall => {
                // Gauss–Jacobi for the density d ρ^{d−1} on [0, 1]
                let (x, w) = jacobi_nodes_weights(0.0, f64::from(d) - 1.0, cfg.radial_nodes)?;
                let total: f64 = w.iter().sum();
                x.iter()
                    .zip(&w)
                    .map(|(&x, &w)| ShiftAtom {
                        s: 0.5 * (1.0 + x) * abs_a,
                        w: w / total,
                    })
                    .collect()
            }
        })
    }
}

/// Resolution of the distribution engine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    /// final grid size of each tabulated law
    pub grid_points: usize,
    /// uniform pilot grid used to place the final grid
    pub pilot_points: usize,
    /// Gauss–Legendre nodes per angular segment
    pub segment_nodes: usize,
    pub max_breakpoints: usize,
    /// breakpoints with local exponent at or above this are dropped
    pub breakpoint_order_cap: f64,
    /// halvings of the grid spacing towards each breakpoint
    pub grading_levels: usize,
    /// radial quadrature size for the uniform-ball law
    pub radial_nodes: usize,
}

impl EngineConfig {
    pub fn standard() -> Self {
        Self {
            grid_points: 4096,
            pilot_points: 512,
            segment_nodes: 20,
            max_breakpoints: 64,
            breakpoint_order_cap: 5.0,
            grading_levels: 36,
            radial_nodes: 32,
        }
    }

    /// Coarser settings for inner loops such as the constant search.
    pub fn fast() -> Self {
        Self {
            grid_points: 768,
            pilot_points: 192,
            segment_nodes: 12,
            max_breakpoints: 32,
            breakpoint_order_cap: 5.0,
            grading_levels: 24,
            radial_nodes: 12,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.grid_points < 16 || self.pilot_points < 16 || self.segment_nodes < 4 || self.radial_nodes < 2 {
            return Err(Error::Config(format!("engine resolution too small: {self:?}")));
        }
        Ok(())
    }
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self::standard()
    }
}

/// Law of the distribution of the first coordinate `θ` of a uniform point on
/// `S^{d−1}`: density `c_d (1−u²)^{(d−3)/2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaLaw {
    pub d: u32,
    pub quadrature: QuadratureRule,
}

impl ThetaLaw {
    pub fn new(d: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::domain("ThetaLaw", format!("d = {d} must be >= 2")));
        }
        let n = (d as usize).max(64);
        Ok(Self {
            d,
            quadrature: gauss_jacobi_rule(0.5 * (f64::from(d) - 3.0), n)?,
        })
    }

    /// `c_d = 1 / ∫(1−u²)^{(d−3)/2} du`.
    pub fn normalizer(&self) -> Result<f64> {
        Ok(1.0 / jd_zero(self.d as i32 - 3)?)
    }

    /// `E f(θ)`.
    pub fn expect(&self, f: impl FnMut(f64) -> f64) -> Result<f64> {
        Ok(self.normalizer()? * self.quadrature.integrate(f))
    }
}

/// Mean and second moment of `θ` by quadrature.
pub fn theta_moments(d: u32) -> Result<(f64, f64)> {
    let law = ThetaLaw::new(d)?;
    Ok((law.expect(|u| u)?, law.expect(|u| u * u)?))
}

/// Tabulated law of `‖Σ aᵢ Rᵢ ξᵢ‖`.
#[derive(Debug, Clone)]
pub struct NormDistribution {
    pub d: u32,
    pub coefficients: Vec<f64>,
    pub radial: RadialLaw,
    pub config: EngineConfig,
    /// `Σ|aᵢ|` times the largest radius
    pub support_max: f64,
    law: Law,
}

impl NormDistribution {
    /// `P(‖·‖ > t)`, right-continuous at atoms.
    pub fn survival(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 1.0;
        }
        if t >= self.support_max {
            return 0.0;
        }
        self.law.surv(t).clamp(0.0, 1.0)
    }

    pub fn cdf(&self, t: f64) -> f64 {
        1.0 - self.survival(t)
    }

    /// Atoms `(location, mass)`; empty once the law is continuous.
    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.law.atoms
    }

    /// Total mass in the continuous part.
    pub fn continuous_mass(&self) -> f64 {
        self.law.cont.as_ref().map_or(0.0, |c| c.mass)
    }

    /// Smallest and largest points of the support.
    pub fn support(&self) -> (f64, f64) {
        self.law.support()
    }

    /// Grid of the tabulated part merged with atom locations, `0` and
    /// `support_max`, sorted.
    pub fn grid(&self) -> Vec<f64> {
        let mut g: Vec<f64> = vec![0.0, self.support_max];
        if let Some(c) = &self.law.cont {
            g.extend(c.grid.iter().copied());
        }
        g.extend(self.law.atoms.iter().map(|a| a.0));
        g.retain(|r| *r >= 0.0 && *r <= self.support_max);
        g.sort_by(f64::total_cmp);
        g.dedup();
        g
    }

    /// `(grid, cdf)` pairs.
    pub fn table(&self) -> Vec<(f64, f64)> {
        self.grid().into_iter().map(|r| (r, self.cdf(r))).collect()
    }

    /// `t` with `P(‖·‖ > t) ≈ level`, by bisection on the survival function.
    pub fn quantile_survival(&self, level: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, self.support_max);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.survival(mid) > level {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * self.support_max {
                break;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Law of `‖Σ aᵢ ξᵢ‖` at standard resolution.
pub fn norm_distribution(c: &CoefficientVector) -> Result<NormDistribution> {
    radial_mixture_distribution_with(c, RadialLaw::default(), &EngineConfig::standard())
}

pub fn norm_distribution_with(c: &CoefficientVector, cfg: &EngineConfig) -> Result<NormDistribution> {
    radial_mixture_distribution_with(c, RadialLaw::default(), cfg)
}

/// Law of `‖Σ aᵢ Rᵢ ξᵢ‖` with i.i.d. radii from `radial`.
pub fn radial_mixture_distribution(c: &CoefficientVector, radial: RadialLaw) -> Result<NormDistribution> {
    radial_mixture_distribution_with(c, radial, &EngineConfig::standard())
}

pub fn radial_mixture_distribution_with(
    c: &CoefficientVector,
    radial: RadialLaw,
    cfg: &EngineConfig,
) -> Result<NormDistribution> {
    let c = CoefficientVector::new(c.d, c.a.clone())?;
    radial.validate()?;
    cfg.validate()?;
    let d = c.d;
    let ang = Angular::new(d, cfg.segment_nodes)?;
    let sorted = c.sorted_abs();
    let mut law = Law::atom(0.0);
    for (k, &abs_a) in sorted.iter().enumerate() {
        law = if k == 0 && radial == RadialLaw::UniformBall {
            ball_start(d, abs_a, cfg)?
        } else {
            engine::step(&ang, &law, &radial.shifts(abs_a, d, cfg)?, cfg)?
        };
    }
    let support_max = c.sum_abs() * radial.max_radius();
    Ok(NormDistribution {
        d,
        coefficients: c.a,
        radial,
        config: *cfg,
        support_max,
        law,
    })
}

/// `|a| U^{1/d}`: survival `1 − (t/|a|)^d` on `[0, |a|]`.
fn ball_start(d: u32, abs_a: f64, cfg: &EngineConfig) -> Result<Law> {
    let eval = |t: f64| -> Result<f64> {
        let x = t / abs_a;
        // 1 − x^d without cancellation near x = 1
        Ok(-(f64::from(d) * x.ln()).exp_m1())
    };
    let tab = engine::tabulate(0.0, abs_a, &[], 1.0, cfg, &eval)?;
    Ok(Law {
        atoms: Vec::new(),
        cont: Some(tab),
        breakpoints: vec![engine::Breakpoint { r: abs_a, q: 1.0 }],
    })
}

/// Fold one more coefficient (radius 1) into an existing law.
pub fn propagate(dist: &NormDistribution, a_next: f64) -> Result<NormDistribution> {
    if !(a_next.is_finite() && a_next != 0.0) {
        return Err(Error::Config(format!("coefficient {a_next} must be finite and nonzero")));
    }
    let cfg = dist.config;
    let ang = Angular::new(dist.d, cfg.segment_nodes)?;
    let law = engine::step(&ang, &dist.law, &[ShiftAtom { s: a_next.abs(), w: 1.0 }], &cfg)?;
    let mut coefficients = dist.coefficients.clone();
    coefficients.push(a_next);
    Ok(NormDistribution {
        d: dist.d,
        coefficients,
        radial: dist.radial,
        config: cfg,
        support_max: dist.support_max + a_next.abs(),
        law,
    })
}

/// Point mass at `r ≥ 0` in dimension `d`, as a starting law.
pub fn point_mass(d: u32, r: f64) -> Result<NormDistribution> {
    if d < 2 || !(r >= 0.0 && r.is_finite()) {
        return Err(Error::Config(format!("point mass needs d >= 2 and r >= 0 (d = {d}, r = {r})")));
    }
    Ok(NormDistribution {
        d,
        coefficients: if r > 0.0 { vec![r] } else { Vec::new() },
        radial: RadialLaw::default(),
        config: EngineConfig::standard(),
        support_max: r,
        law: Law::atom(r),
    })
}

/// `P(‖X + x‖ > t)` for `‖X‖ ~ dist` rotationally invariant and `‖x‖ = shift`,
/// as `E_θ P(‖X‖ > −θ‖x‖ + √(t² + θ²‖x‖² − ‖x‖²))`. Requires `t > shift`.
pub fn lemma4_transform(dist: &NormDistribution, shift: f64, t: f64) -> Result<f64> {
    const OP: &str = "lemma4_transform";
    if !(shift >= 0.0 && shift.is_finite()) {
        return Err(Error::domain(OP, format!("shift {shift} must be finite and >= 0")));
    }
    if !(t > shift) {
        return Err(Error::domain(OP, format!("t = {t} must exceed the shift {shift}")));
    }
    if shift == 0.0 {
        return Ok(dist.survival(t));
    }
    let ang = Angular::new(dist.d, dist.config.segment_nodes)?;
    clamp_probability(OP, engine::shifted_survival(&ang, &dist.law, shift, t))
}

/// `n` independent draws of `‖Σ aᵢ ξᵢ‖`.
pub fn sample_norm(c: &CoefficientVector, n: usize, seed: u64) -> Vec<f64> {
    sample_norm_radial(c, RadialLaw::default(), n, seed)
}

/// `n` independent draws of `‖Σ aᵢ Rᵢ ξᵢ‖`.
pub fn sample_norm_radial(c: &CoefficientVector, radial: RadialLaw, n: usize, seed: u64) -> Vec<f64> {
    use rand::Rng;
    let d = c.d as usize;
    let df = f64::from(c.d);
    par_sample(n, seed, |rng| {
        let mut acc = vec![0.0; d];
        let mut xi = vec![0.0; d];
        for &a in &c.a {
            fill_sphere(rng, &mut xi);
            let r = match radial {
                RadialLaw::Constant { r } => r,
                RadialLaw::UniformBall => rng.gen::<f64>().powf(1.0 / df),
                RadialLaw::TwoPoint { r1, r2, p } => {
                    if rng.gen::<f64>() < p {
                        r1
                    } else {
                        r2
                    }
                }
            };
            for (s, x) in acc.iter_mut().zip(&xi) {
                *s += a * r * x;
            }
        }
        acc.iter().map(|x| x * x).sum::<f64>().sqrt()
    })
}

/// The shifted-survival transform against the full propagation, in two reports:
/// the arc-length anchor `P(‖e₁ + x‖ > 1.2) = arccos(0.19)/π` for `‖x‖ = 0.5`,
/// `d = 2`, and agreement of `E_θ P(‖Σ_{i≥2} aᵢξᵢ‖ > r₊(θ))` with the
/// propagated survival of `Σ aᵢξᵢ` at `t > a₁`.
pub fn verify_lemma4(dims: &[u32], cfg: &EngineConfig, tol: f64) -> Result<Vec<VerificationReport>> {
    let mut anchor = ReportBuilder::new("P(|e1 + x| > 1.2) = arccos(0.19)/pi at |x| = 0.5, d = 2", "single point", tol);
    let p = point_mass(2, 1.0)?;
    let v = lemma4_transform(&p, 0.5, 1.2)?;
    anchor.record(-(v - 0.19f64.acos() / std::f64::consts::PI).abs(), &[("d", 2.0), ("t", 1.2)]);

    let families: [&[f64]; 3] = [&[1.0, 0.7, 0.4], &[1.0, 1.0, 0.5, 0.25], &[2.0, 0.3, 0.3, 0.3, 0.3]];
    let cells: Vec<(u32, usize)> = dims
        .iter()
        .flat_map(|&d| (0..families.len()).map(move |k| (d, k)))
        .collect();
    let rows = cells
        .into_par_iter()
        .map(|(d, k)| -> Result<Vec<(u32, usize, f64, f64)>> {
            let a = families[k];
            let full = norm_distribution_with(&CoefficientVector::new(d, a.to_vec())?, cfg)?;
            let rest = norm_distribution_with(&CoefficientVector::new(d, a[1..].to_vec())?, cfg)?;
            let top: f64 = a.iter().sum();
            (1..=12)
                .map(|j| {
                    let t = a[0] + (top - a[0]) * f64::from(j) / 12.5;
                    Ok((d, k, t, (lemma4_transform(&rest, a[0], t)? - full.survival(t)).abs()))
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut cons = ReportBuilder::new(
        "shifted-survival transform matches propagation (margin = -|difference|)",
        format!("d in {dims:?}, {} coefficient families, 12 values of t above a1", families.len()),
        tol,
    );
    for (d, k, t, diff) in rows.into_iter().flatten() {
        cons.record(-diff, &[("d", f64::from(d)), ("family", k as f64), ("t", t)]);
    }
    Ok(vec![anchor.finish(), cons.finish()])
}

#[cfg(test)]
mod tests;
