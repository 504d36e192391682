//! Gaussian measure of centred and shifted Euclidean balls, and the two
//! ball-measure comparisons built on it: the explicit lower bounds on
//! `P(‖G‖ > √d)` and `P(‖G‖ > √(d+2))`, and the inequality
//! `P(‖G‖ ≤ R) ≤ P(‖G − x‖ ≤ R√(1+a²))` for `‖x‖ = a√d`, `R ≥ √(d+2)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{ReportBuilder, VerificationReport};
use crate::sampling::{fill_gaussian, par_count, McEstimate};
use crate::specfun::{chi_square_cdf, chi_square_sf, noncentral_chi_square_cdf};

/// Lower bound on `P(‖G‖ > √d)` for every `d ≥ 2`.
pub const CENTRED_TAIL_BOUND: f64 = 1.0 / 33.0;
/// Lower bound on `P(‖G‖ > √(d+2))` for every `d ≥ 2`.
pub const SHIFTED_TAIL_BOUND: f64 = 1.0 / 397.0;

/// Dimension, shift length `‖x‖` and radius of one ball.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallQuery {
    pub d: u32,
    pub shift_norm: f64,
    pub radius: f64,
}

impl BallQuery {
    pub fn new(d: u32, shift_norm: f64, radius: f64) -> Result<Self> {
        check_dim("BallQuery", d)?;
        for (name, v) in [("shift_norm", shift_norm), ("radius", radius)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::domain("BallQuery", format!("{name} = {v} must be finite and >= 0")));
            }
        }
        Ok(Self {
            d,
            shift_norm,
            radius,
        })
    }

    pub fn prob(&self) -> Result<f64> {
        shifted_ball_prob(self.d, self.shift_norm, self.radius)
    }
}

fn check_dim(op: &'static str, d: u32) -> Result<()> {
    if d < 2 {
        return Err(Error::domain(op, format!("d = {d} must be >= 2")));
    }
    Ok(())
}

/// `P(‖G‖ ≤ R)` for a standard Gaussian `G` in `R^d`.
pub fn centred_ball_prob(d: u32, radius: f64) -> Result<f64> {
    check_dim("centred_ball_prob", d)?;
    if !(radius >= 0.0) {
        return Err(Error::domain("centred_ball_prob", format!("radius {radius} must be >= 0")));
    }
    chi_square_cdf(d, radius * radius)
}

/// `P(‖G − x‖ ≤ radius)` with `‖x‖ = shift_norm`.
pub fn shifted_ball_prob(d: u32, shift_norm: f64, radius: f64) -> Result<f64> {
    check_dim("shifted_ball_prob", d)?;
    if !(shift_norm >= 0.0 && radius >= 0.0) {
        return Err(Error::domain(
            "shifted_ball_prob",
            format!("shift {shift_norm} and radius {radius} must be >= 0"),
        ));
    }
    noncentral_chi_square_cdf(d, shift_norm * shift_norm, radius * radius)
}

/// Monte Carlo estimate of [`shifted_ball_prob`], shifting along the first axis.
pub fn mc_shifted_ball_prob(d: u32, shift_norm: f64, radius: f64, n: usize, seed: u64) -> McEstimate {
    let r2 = radius * radius;
    let hits = par_count(n, seed, |rng| {
        let mut g = vec![0.0; d as usize];
        fill_gaussian(rng, &mut g);
        g[0] -= shift_norm;
        g.iter().map(|x| x * x).sum::<f64>() <= r2
    });
    McEstimate::from_hits(hits, n)
}

/// Minima of the two tail quantities over a range of dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailMinima {
    pub min_centred: f64,
    pub argmin_centred: u32,
    pub min_shifted: f64,
    pub argmin_shifted: u32,
}

/// Check `P(χ²_d > d) ≥ 1/33` and `P(χ²_d > d+2) ≥ 1/397` for `d ∈ [2, d_max]`.
///
/// Margins are `P − bound`; the reports' worst points are the minimisers.
pub fn verify_lemma1(d_max: u32) -> Result<(Vec<VerificationReport>, TailMinima)> {
    if d_max < 2 {
        return Err(Error::Config(format!("d_max = {d_max} must be >= 2")));
    }
    let rows: Vec<(u32, Result<(f64, f64)>)> = (2..=d_max)
        .into_par_iter()
        .map(|d| {
            let df = f64::from(d);
            let r = chi_square_sf(d, df).and_then(|a| Ok((a, chi_square_sf(d, df + 2.0)?)));
            (d, r)
        })
        .collect();
    let grid = format!("d in [2, {d_max}]");
    let mut c = ReportBuilder::new("P(chi2_d > d) >= 1/33", &grid, 0.0);
    let mut s = ReportBuilder::new("P(chi2_d > d + 2) >= 1/397", &grid, 0.0);
    let mut minima = TailMinima {
        min_centred: f64::INFINITY,
        argmin_centred: 0,
        min_shifted: f64::INFINITY,
        argmin_shifted: 0,
    };
    for (d, r) in rows {
        let pt = [("d", f64::from(d))];
        match r {
            Ok((a, b)) => {
                // strict inequality is claimed, so a tie counts as a failure
                c.record(if a > CENTRED_TAIL_BOUND { a - CENTRED_TAIL_BOUND } else { -1.0 }, &pt);
                s.record(if b > SHIFTED_TAIL_BOUND { b - SHIFTED_TAIL_BOUND } else { -1.0 }, &pt);
                if a < minima.min_centred {
                    minima.min_centred = a;
                    minima.argmin_centred = d;
                }
                if b < minima.min_shifted {
                    minima.min_shifted = b;
                    minima.argmin_shifted = d;
                }
            }
            Err(e) => {
                c.fail(format!("d = {d}: {e}"));
                s.fail(format!("d = {d}: {e}"));
            }
        }
    }
    c.note(format!(
        "minimum {:.17e} at d = {}",
        minima.min_centred, minima.argmin_centred
    ));
    s.note(format!(
        "minimum {:.17e} at d = {}",
        minima.min_shifted, minima.argmin_shifted
    ));
    Ok((vec![c.finish(), s.finish()], minima))
}

/// `a ↦ P(‖G − a√d e₁‖ ≤ R√(1+a²))`.
pub fn lemma3_h(d: u32, a: f64, r: f64) -> Result<f64> {
    shifted_ball_prob(d, a * f64::from(d).sqrt(), r * (1.0 + a * a).sqrt())
}

/// `h(a, R) − P(‖G‖ ≤ R)`.
pub fn lemma3_margin(d: u32, a: f64, r: f64) -> Result<f64> {
    Ok(lemma3_h(d, a, r)? - centred_ball_prob(d, r)?)
}

fn check_radius(op: &'static str, d: u32, r: f64) -> Result<()> {
    let floor = f64::from(d + 2);
    if !(r.is_finite() && r * r >= floor * (1.0 - 1e-12)) {
        return Err(Error::domain(op, format!("R = {r} is below sqrt(d+2) = {}", floor.sqrt())));
    }
    Ok(())
}

/// The shifted-ball comparison on one dimension, as two reports: the margin
/// `h(a, R) − P(‖G‖ ≤ R)` and the successive differences of `h` in `a`
/// (taken in the order `a_grid` is given, which should be increasing).
pub fn verify_lemma3(d: u32, a_grid: &[f64], r_grid: &[f64], tol: f64) -> Result<Vec<VerificationReport>> {
    verify_lemma3_multi(&[d], a_grid, |_| r_grid.to_vec(), tol)
}

/// [`verify_lemma3`] over several dimensions; `r_grid_for(d)` supplies the radii.
pub fn verify_lemma3_multi<F>(
    dims: &[u32],
    a_grid: &[f64],
    r_grid_for: F,
    tol: f64,
) -> Result<Vec<VerificationReport>>
where
    F: Fn(u32) -> Vec<f64>,
{
    const OP: &str = "verify_lemma3";
    if a_grid.is_empty() || dims.is_empty() {
        return Err(Error::Config("empty grid for the shifted-ball check".into()));
    }
    let mut cells = Vec::new();
    for &d in dims {
        check_dim(OP, d)?;
        let rs = r_grid_for(d);
        if rs.is_empty() {
            return Err(Error::Config(format!("empty radius grid at d = {d}")));
        }
        for &r in &rs {
            check_radius(OP, d, r)?;
            cells.push((d, r));
        }
    }
    let rows: Vec<(u32, f64, f64, Vec<Result<f64>>)> = cells
        .into_par_iter()
        .map(|(d, r)| {
            let centred = centred_ball_prob(d, r).unwrap_or(f64::NAN);
            let hs = a_grid.iter().map(|&a| lemma3_h(d, a, r)).collect();
            (d, r, centred, hs)
        })
        .collect();

    let grid = format!(
        "d in {:?}, a in [{}, {}] ({} points), R per d from sqrt(d+2)",
        dims,
        a_grid[0],
        a_grid[a_grid.len() - 1],
        a_grid.len()
    );
    let mut margin = ReportBuilder::new("P(|G| <= R) <= P(|G - x| <= R sqrt(1+a^2)), |x| = a sqrt(d)", &grid, tol);
    let mut mono = ReportBuilder::new("P(|G - a sqrt(d) e1| <= R sqrt(1+a^2)) nondecreasing in a", &grid, tol);
    for (d, r, centred, hs) in &rows {
        let mut prev: Option<f64> = None;
        for (&a, h) in a_grid.iter().zip(hs) {
            let pt = [("d", f64::from(*d)), ("a", a), ("R", *r)];
            match h {
                Ok(h) => {
                    margin.record(h - centred, &pt);
                    if let Some(p) = prev {
                        mono.record(h - p, &pt);
                    }
                    prev = Some(*h);
                }
                Err(e) => margin.fail(format!("d = {d}, a = {a}, R = {r}: {e}")),
            }
        }
    }
    Ok(vec![margin.finish(), mono.finish()])
}

/// A decrease of `a ↦ h(a, R)` found below the radius hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityBreak {
    pub d: u32,
    pub radius: f64,
    pub a_before: f64,
    pub a_after: f64,
    pub drop: f64,
}

/// Look for decreases of `h(·, R)` at `R = √d / 2`, well below `√(d+2)`.
/// Exploratory: an empty result is not a failure of anything.
pub fn probe_small_radius(dims: &[u32], a_grid: &[f64]) -> Result<Vec<MonotonicityBreak>> {
    let mut out = Vec::new();
    for &d in dims {
        check_dim("probe_small_radius", d)?;
        let r = f64::from(d).sqrt() / 2.0;
        let hs = a_grid
            .iter()
            .map(|&a| lemma3_h(d, a, r))
            .collect::<Result<Vec<_>>>()?;
        let worst = hs
            .windows(2)
            .enumerate()
            .map(|(i, w)| (i, w[1] - w[0]))
            .fold(None, |acc: Option<(usize, f64)>, (i, diff)| match acc {
                Some((_, best)) if best <= diff => acc,
                _ => Some((i, diff)),
            });
        if let Some((i, diff)) = worst {
            if diff < 0.0 {
                out.push(MonotonicityBreak {
                    d,
                    radius: r,
                    a_before: a_grid[i],
                    a_after: a_grid[i + 1],
                    drop: -diff,
                });
            }
        }
    }
    Ok(out)
}

/// The acceptance grid: `d ∈ {2..30}`, `a ∈ {0, 0.1, …, 5}`,
/// `R ∈ {√(d+2) + k/4 : k = 0..40}`.
pub fn standard_lemma3_grid() -> (Vec<u32>, Vec<f64>, Vec<f64>) {
    let dims = (2..=30).collect();
    let a = (0..=50).map(|k| f64::from(k) / 10.0).collect();
    let offsets = (0..=40).map(|k| f64::from(k) / 4.0).collect();
    (dims, a, offsets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        let p = centred_ball_prob(2, 2.0).unwrap();
        assert!((p - (1.0 - (-2f64).exp())).abs() < 1e-15);
        assert_eq!(centred_ball_prob(5, 0.0).unwrap(), 0.0);
        assert_eq!(shifted_ball_prob(4, 1.3, 0.0).unwrap(), 0.0);
        let a = shifted_ball_prob(3, 0.0, 1.7).unwrap();
        assert!((a - centred_ball_prob(3, 1.7).unwrap()).abs() < 1e-15);
        assert!(centred_ball_prob(1, 1.0).is_err());
    }

    #[test]
    fn lemma1_small_range() {
        let (reports, m) = verify_lemma1(50).unwrap();
        assert!(reports.iter().all(|r| r.pass));
        assert_eq!(m.argmin_centred, 2);
        assert!((m.min_centred - (-1f64).exp()).abs() < 1e-14);
        assert!((m.min_shifted - (-2f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn lemma3_equality_at_zero_shift() {
        for d in [2, 9] {
            let r = f64::from(d + 2).sqrt() + 0.5;
            assert!(lemma3_margin(d, 0.0, r).unwrap().abs() < 1e-15);
        }
        assert!(lemma3_margin(2, 1.0, 2.0).unwrap() >= 0.0);
        assert!(lemma3_margin(30, 5.0, 32f64.sqrt() + 3.0).unwrap() >= 0.0);
        assert!(verify_lemma3(5, &[0.0, 1.0], &[2.0], 1e-9).is_err());
    }
}
