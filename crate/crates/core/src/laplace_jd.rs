//! The integrals `J_d(b) = ∫₋₁¹ (1−x²)^{d/2} e^{bx} dx` and the inequalities
//! relating consecutive members of the family.
//!
//! `J_{d−3}(b)/J_{d−3}(0)` is the moment generating function of the first
//! coordinate of a uniform point on `S^{d−1}`, which is why the family shows up
//! in the shifted-ball comparisons of [`crate::ball_measure`].
//!
//! Values are carried in log scale throughout; `J_d(b)` grows like `e^b` and
//! the verification grid goes up to `b = 1000`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{ReportBuilder, VerificationReport};
use crate::specfun::{gauss_legendre, ln_bessel_i, ln_power_integral, log_gamma_unchecked};

/// Smallest rule size accepted by [`jd`].
pub const MIN_RULE_SIZE: usize = 16;

/// Index and Laplace parameter of one `J_d(b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JdQuery {
    pub d: i32,
    pub b: f64,
}

impl JdQuery {
    pub fn new(d: i32, b: f64) -> Result<Self> {
        let q = Self { d, b };
        q.validate("JdQuery")?;
        Ok(q)
    }

    fn validate(&self, op: &'static str) -> Result<()> {
        if self.d < -1 {
            return Err(Error::domain(op, format!("index d = {} must be >= -1", self.d)));
        }
        if !(self.b >= 0.0 && self.b.is_finite()) {
            return Err(Error::domain(op, format!("b = {} must be finite and >= 0", self.b)));
        }
        Ok(())
    }
}

/// `J_d(b)` in log scale. `error_estimate` bounds the absolute error of
/// `log_value`, i.e. the relative error of `value`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JdValue {
    pub log_value: f64,
    /// `exp(log_value)`; `+inf` once that overflows.
    pub value: f64,
    pub error_estimate: f64,
}

impl JdValue {
    fn from_log(log_value: f64, error_estimate: f64) -> Self {
        Self {
            log_value,
            value: log_value.exp(),
            error_estimate,
        }
    }
}

/// `J_d(0) = √π Γ(d/2+1) / Γ(d/2+3/2)`.
pub fn jd_zero(d: i32) -> Result<f64> {
    Ok(ln_jd_zero(d)?.exp())
}

fn ln_jd_zero(d: i32) -> Result<f64> {
    if d < -1 {
        return Err(Error::domain("jd_zero", format!("index d = {d} must be >= -1")));
    }
    Ok(ln_power_integral(0.5 * f64::from(d)))
}

/// Rule size used by the convenience evaluators: `max(64, d + ⌈b⌉)` rounded up
/// to a multiple of 32.
pub fn default_rule_size(d: i32, b: f64) -> usize {
    let raw = (i64::from(d.max(0)) + b.ceil() as i64).max(64) as usize;
    raw.div_ceil(32) * 32
}

/// `J_d(b)` from an `n`-point rule, with the error estimated against `2n` points.
///
/// The weight `(1−x²)^{d/2}` is split as a Chebyshev weight `(1−x²)^{−1/2}`
/// times `(1−x²)^{(d+1)/2}` for odd `d`, and as the Legendre weight times
/// `(1−x²)^{d/2}` for even `d`; in both cases the leftover factor is a
/// polynomial, so the rule is exact apart from the exponential.
pub fn jd(q: JdQuery, rule_size: usize) -> Result<JdValue> {
    const OP: &str = "jd";
    q.validate(OP)?;
    if rule_size < MIN_RULE_SIZE {
        return Err(Error::Config(format!(
            "jd rule size {rule_size} is below the minimum {MIN_RULE_SIZE}"
        )));
    }
    if q.b == 0.0 {
        let ln = ln_jd_zero(q.d)?;
        return Ok(JdValue::from_log(ln, 4.0 * f64::EPSILON * (1.0 + ln.abs())));
    }
    let coarse = ln_jd_rule(q.d, q.b, rule_size)?;
    let fine = ln_jd_rule(q.d, q.b, 2 * rule_size)?;
    let err = (fine - coarse).abs() + 4.0 * f64::EPSILON * (1.0 + fine.abs());
    if !fine.is_finite() {
        return Err(Error::internal(OP, format!("non-finite ln J at d = {}, b = {}", q.d, q.b)));
    }
    Ok(JdValue::from_log(fine, err))
}

/// Memoized [`jd`] at [`default_rule_size`].
pub fn jd_auto(d: i32, b: f64) -> Result<JdValue> {
    static CACHE: OnceLock<Mutex<HashMap<(i32, u64), JdValue>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (d, b.to_bits());
    if let Some(v) = cache.lock().expect("jd cache poisoned").get(&key) {
        return Ok(*v);
    }
    let v = jd(JdQuery::new(d, b)?, default_rule_size(d, b))?;
    cache.lock().expect("jd cache poisoned").insert(key, v);
    Ok(v)
}

/// `ln J_d(b)` at the default rule size.
pub fn ln_jd(d: i32, b: f64) -> Result<f64> {
    Ok(jd_auto(d, b)?.log_value)
}

/// `ln J_d(b) = b + ln Σ w_i (1−x_i²)^k e^{b(x_i−1)}`.
fn ln_jd_rule(d: i32, b: f64, n: usize) -> Result<f64> {
    let mut logs = Vec::with_capacity(n);
    if d % 2 != 0 {
        let k = f64::from((d + 1) / 2);
        let ln_w = (PI / n as f64).ln();
        for j in 0..n {
            let theta = (2 * j + 1) as f64 * PI / (2 * n) as f64;
            let s = theta.sin();
            let half = (0.5 * theta).sin();
            // 1 − x² = sin²θ and x − 1 = −2 sin²(θ/2), both without cancellation
            let poly = if k == 0.0 { 0.0 } else { 2.0 * k * s.ln() };
            logs.push(ln_w + poly - 2.0 * b * half * half);
        }
    } else {
        let k = f64::from(d / 2);
        let rule = gauss_legendre(n)?;
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let poly = if k == 0.0 { 0.0 } else { k * ((1.0 - x) * (1.0 + x)).ln() };
            logs.push(w.ln() + poly + b * (x - 1.0));
        }
    }
    Ok(b + log_sum_exp(&logs))
}

pub(crate) fn log_sum_exp(logs: &[f64]) -> f64 {
    let m = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + logs.iter().map(|&l| (l - m).exp()).sum::<f64>().ln()
}

/// `J_d(b) = √π Γ(d/2+1) (2/b)^{(d+1)/2} I_{(d+1)/2}(b)`, an evaluation path
/// independent of the quadrature.
pub fn jd_bessel_oracle(q: JdQuery) -> Result<JdValue> {
    const OP: &str = "jd_bessel_oracle";
    q.validate(OP)?;
    if q.b == 0.0 {
        return Err(Error::domain(OP, "b = 0 has no Bessel form; use jd_zero"));
    }
    let h = 0.5 * f64::from(q.d);
    let nu = h + 0.5;
    let ln_i = ln_bessel_i(nu, q.b)?;
    let ln = 0.5 * PI.ln() + log_gamma_unchecked(h + 1.0) + nu * (2.0 / q.b).ln() + ln_i.value;
    let err = ln_i.abs_error_estimate + 8.0 * f64::EPSILON * (1.0 + ln.abs());
    Ok(JdValue::from_log(ln, err))
}

fn d_checked(op: &'static str, d: u32) -> Result<i32> {
    if d < 2 {
        return Err(Error::domain(op, format!("d = {d} must be >= 2")));
    }
    i32::try_from(d).map_err(|_| Error::domain(op, format!("d = {d} too large")))
}

fn b_checked(op: &'static str, b: f64) -> Result<f64> {
    if !(b >= 0.0 && b.is_finite()) {
        return Err(Error::domain(op, format!("b = {b} must be finite and >= 0")));
    }
    Ok(b)
}

/// `1/2 + √(1/4 + b²/s)`, the common factor of the ratio bounds.
fn bound_factor(b: f64, s: f64) -> f64 {
    0.5 + (0.25 + b * b / s).sqrt()
}

/// Relative residual of `b²J_{d+1} = −d(d+1)J_{d−1} + (d+1)(d−1)J_{d−3}`,
/// scaled by `(d+1)(d−1)J_{d−3}`.
///
/// At `b = 0` the `b`-free identity `d J_{d−1}(0) = (d−1) J_{d−3}(0)` is
/// checked instead, from the closed forms.
pub fn check_recursion_a(d: u32, b: f64) -> Result<f64> {
    const OP: &str = "check_recursion_a";
    let di = d_checked(OP, d)?;
    let b = b_checked(OP, b)?;
    let df = f64::from(d);
    let l3 = ln_jd(di - 3, b)?;
    let l1 = ln_jd(di - 1, b)?;
    // every term divided by (d+1)(d−1)J_{d−3}
    let middle = df / (df - 1.0) * (l1 - l3).exp();
    let top = if b == 0.0 {
        0.0
    } else {
        b * b / ((df + 1.0) * (df - 1.0)) * (ln_jd(di + 1, b)? - l3).exp()
    };
    Ok((top + middle - 1.0).abs())
}

/// `J_{d−3}/J_{d−1} − (d/(d−1))(1/2 + √(1/4 + b²/(d(d+2))))`.
pub fn check_bound_b(d: u32, b: f64) -> Result<f64> {
    const OP: &str = "check_bound_b";
    let di = d_checked(OP, d)?;
    let b = b_checked(OP, b)?;
    let df = f64::from(d);
    let ratio = (ln_jd(di - 3, b)? - ln_jd(di - 1, b)?).exp();
    Ok(ratio - df / (df - 1.0) * bound_factor(b, df * (df + 2.0)))
}

/// `((d+2)/(d+1))(1/2 + √(1/4 + b²/(d(d+2)))) − J_{d−1}/J_{d+1}`.
pub fn check_bound_c(d: u32, b: f64) -> Result<f64> {
    const OP: &str = "check_bound_c";
    let di = d_checked(OP, d)?;
    let b = b_checked(OP, b)?;
    let df = f64::from(d);
    let ratio = (ln_jd(di - 1, b)? - ln_jd(di + 1, b)?).exp();
    Ok((df + 2.0) / (df + 1.0) * bound_factor(b, df * (df + 2.0)) - ratio)
}

/// Log-convexity margins, both divided by `J²_{d−1}` so they stay finite for
/// large `b`:
/// `(J_{d+1}J_{d−3}/J²_{d−1})·(d−1)(d+2)/(d(d+1)) − 1` and the weaker
/// `J_{d+1}J_{d−3}/J²_{d−1} − 1` that Hölder's inequality already gives.
pub fn check_bound_d(d: u32, b: f64) -> Result<(f64, f64)> {
    const OP: &str = "check_bound_d";
    let di = d_checked(OP, d)?;
    let b = b_checked(OP, b)?;
    let df = f64::from(d);
    let l = ln_jd(di + 1, b)? + ln_jd(di - 3, b)? - 2.0 * ln_jd(di - 1, b)?;
    let c = ((df - 1.0) * (df + 2.0)) / (df * (df + 1.0));
    // exp_m1 keeps the b = 0 equality exact to rounding
    let margin_d = (l + c.ln()).exp_m1();
    let margin_holder = l.exp_m1();
    Ok((margin_d, margin_holder))
}

/// `J_{d−3}/J_{d−1} − (d/(d−1))(1/2 + √(1/4 + b²/(R²d)))` for `R ≥ √(d+2)`.
pub fn check_lemma3_reduced(d: u32, b: f64, r: f64) -> Result<f64> {
    const OP: &str = "check_lemma3_reduced";
    let di = d_checked(OP, d)?;
    let b = b_checked(OP, b)?;
    let df = f64::from(d);
    // exact comparison on R²: √(d+2) squared may round below d+2
    if !(r.is_finite() && r * r >= df + 2.0 - 1e-12 * (df + 2.0)) {
        return Err(Error::domain(OP, format!("R = {r} is below sqrt(d+2) for d = {d}")));
    }
    let ratio = (ln_jd(di - 3, b)? - ln_jd(di - 1, b)?).exp();
    Ok(ratio - df / (df - 1.0) * bound_factor(b, r * r * df))
}

/// Residual of the normalised recursion
/// `b²/(d(d+2))·J̄_{d+1} + J̄_{d−1} − J̄_{d−3}`, relative to `J̄_{d−3}`,
/// where `J̄_k = J_k(b)/J_k(0)`.
pub fn normalized_recursion_residual(d: u32, b: f64) -> Result<f64> {
    const OP: &str = "normalized_recursion_residual";
    let di = d_checked(OP, d)?;
    let b = b_checked(OP, b)?;
    let df = f64::from(d);
    let bar = |k: i32| -> Result<f64> { Ok(ln_jd(k, b)? - ln_jd_zero(k)?) };
    let l3 = bar(di - 3)?;
    let first = if b == 0.0 {
        0.0
    } else {
        b * b / (df * (df + 2.0)) * (bar(di + 1)? - l3).exp()
    };
    Ok((first + (bar(di - 1)? - l3).exp() - 1.0).abs())
}

/// Parameter grid for the `J_d` checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JdGrid {
    pub d_min: u32,
    pub d_max: u32,
    pub b_values: Vec<f64>,
}

impl JdGrid {
    /// `d ∈ {2..100}`, `b ∈ {0} ∪ {10^{k/4} : k = −8..12}`.
    pub fn standard() -> Self {
        let mut b_values = vec![0.0];
        b_values.extend((-8..=12).map(|k| 10f64.powf(f64::from(k) / 4.0)));
        Self {
            d_min: 2,
            d_max: 100,
            b_values,
        }
    }

    /// A thinned grid for smoke runs.
    pub fn quick() -> Self {
        Self {
            d_min: 2,
            d_max: 24,
            b_values: vec![0.0, 0.01, 0.3, 1.0, 3.0, 10.0, 50.0, 300.0],
        }
    }

    fn describe(&self) -> String {
        format!(
            "d in [{}, {}], b in {:?}",
            self.d_min, self.d_max, self.b_values
        )
    }

    fn points(&self) -> Vec<(u32, f64)> {
        (self.d_min..=self.d_max)
            .flat_map(|d| self.b_values.iter().map(move |&b| (d, b)))
            .collect()
    }
}

/// Tolerances for [`verify_jd_claims`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JdTolerances {
    pub recursion: f64,
    pub normalized_recursion: f64,
    pub margin: f64,
    pub equality_at_zero: f64,
}

impl Default for JdTolerances {
    fn default() -> Self {
        Self {
            recursion: 1e-8,
            normalized_recursion: 1e-9,
            margin: 1e-10,
            equality_at_zero: 1e-11,
        }
    }
}

struct JdRow {
    d: u32,
    b: f64,
    recursion: Result<f64>,
    normalized: Result<f64>,
    bound_b: Result<f64>,
    bound_c: Result<f64>,
    bound_d: Result<(f64, f64)>,
}

/// Sweep the recursion, the two ratio bounds, the log-convexity bound and its
/// Hölder counterpart over `grid`. Returns one report per claim, plus the
/// `b = 0` equality check and the (b)⇔(c) agreement check.
///
/// `fault` flips the sign of the ratio-bound margins; it exists so that the
/// failure path of the drivers can be exercised.
pub fn verify_jd_claims(grid: &JdGrid, tol: JdTolerances, fault: bool) -> Vec<VerificationReport> {
    let rows: Vec<JdRow> = grid
        .points()
        .into_par_iter()
        .map(|(d, b)| JdRow {
            d,
            b,
            recursion: check_recursion_a(d, b),
            normalized: normalized_recursion_residual(d, b),
            bound_b: check_bound_b(d, b),
            bound_c: check_bound_c(d, b),
            bound_d: check_bound_d(d, b),
        })
        .collect();

    let g = grid.describe();
    let mut rec = ReportBuilder::new("J_d three-term recursion (margin = -relative residual)", &g, tol.recursion);
    let mut norm = ReportBuilder::new(
        "normalised recursion for J_d(b)/J_d(0) (margin = -relative residual)",
        &g,
        tol.normalized_recursion,
    );
    let mut bb = ReportBuilder::new("lower bound on J_{d-3}/J_{d-1}", &g, tol.margin);
    let mut bc = ReportBuilder::new("upper bound on J_{d-1}/J_{d+1}", &g, tol.margin);
    let mut bd = ReportBuilder::new(
        "log-convexity J_{d+1}J_{d-3} >= J_{d-1}^2 d(d+1)/((d-1)(d+2)) (margin / J_{d-1}^2)",
        &g,
        tol.margin,
    );
    let mut bh = ReportBuilder::new(
        "Hoelder direction J_{d+1}J_{d-3} >= J_{d-1}^2 (margin / J_{d-1}^2)",
        &g,
        tol.margin,
    );
    let mut eq0 = ReportBuilder::new(
        "equality of the ratio bounds at b = 0 (margin = -|deviation|)",
        format!("d in [{}, {}], b = 0", grid.d_min, grid.d_max),
        tol.equality_at_zero,
    );
    let mut equiv = ReportBuilder::new(
        "ratio bounds hold or fail together at every grid point",
        &g,
        0.0,
    );

    let sign = if fault { -1.0 } else { 1.0 };
    for row in &rows {
        let pt = [("d", f64::from(row.d)), ("b", row.b)];
        // residuals enter as negative margins
        match &row.recursion {
            Ok(r) => rec.record(-r, &pt),
            Err(e) => rec.fail(format!("d = {}, b = {}: {e}", row.d, row.b)),
        }
        match &row.normalized {
            Ok(r) => norm.record(-r, &pt),
            Err(e) => norm.fail(format!("d = {}, b = {}: {e}", row.d, row.b)),
        }
        let mb = row.bound_b.as_ref().map(|m| sign * m);
        let mc = row.bound_c.as_ref().map(|m| sign * m);
        match &mb {
            Ok(m) => bb.record(*m, &pt),
            Err(e) => bb.fail(format!("d = {}, b = {}: {e}", row.d, row.b)),
        }
        match &mc {
            Ok(m) => bc.record(*m, &pt),
            Err(e) => bc.fail(format!("d = {}, b = {}: {e}", row.d, row.b)),
        }
        match &row.bound_d {
            Ok((md, mh)) => {
                bd.record(*md, &pt);
                bh.record(*mh, &pt);
            }
            Err(e) => {
                bd.fail(format!("d = {}, b = {}: {e}", row.d, row.b));
                bh.fail(format!("d = {}, b = {}: {e}", row.d, row.b));
            }
        }
        if let (Ok(mb), Ok(mc)) = (&mb, &mc) {
            let agree = (*mb >= -tol.margin) == (*mc >= -tol.margin);
            equiv.record(if agree { 0.0 } else { -1.0 }, &pt);
            if row.b == 0.0 {
                eq0.record(-mb.abs().max(mc.abs()), &pt);
                if let Ok((md, _)) = &row.bound_d {
                    eq0.record(-md.abs(), &pt);
                }
            }
        }
    }
    let reports = vec![
        rec.finish(),
        norm.finish(),
        bb.finish(),
        bc.finish(),
        bd.finish(),
        bh.finish(),
        eq0.finish(),
        equiv.finish(),
    ];
    reports
}

/// The reduced shifted-ball inequality on `d × b × R`, together with the
/// claim that its margin does not decrease as `R` grows.
pub fn verify_lemma3_reduced(
    grid: &JdGrid,
    r_offsets: &[f64],
    tol: f64,
) -> Vec<VerificationReport> {
    let rows: Vec<(u32, f64, Vec<(f64, Result<f64>)>)> = grid
        .points()
        .into_par_iter()
        .map(|(d, b)| {
            let base = f64::from(d + 2).sqrt();
            let vals = r_offsets
                .iter()
                .map(|&o| (base + o, check_lemma3_reduced(d, b, base + o)))
                .collect();
            (d, b, vals)
        })
        .collect();
    let g = format!("{}, R = sqrt(d+2) + {:?}", grid.describe(), r_offsets);
    let mut margin = ReportBuilder::new("reduced shifted-ball ratio inequality", &g, tol);
    let mut mono = ReportBuilder::new("reduced margin nondecreasing in R", &g, tol);
    for (d, b, vals) in &rows {
        let mut prev: Option<f64> = None;
        for (r, v) in vals {
            let pt = [("d", f64::from(*d)), ("b", *b), ("R", *r)];
            match v {
                Ok(m) => {
                    margin.record(*m, &pt);
                    if let Some(p) = prev {
                        mono.record(m - p, &pt);
                    }
                    prev = Some(*m);
                }
                Err(e) => margin.fail(format!("d = {d}, b = {b}, R = {r}: {e}")),
            }
        }
    }
    vec![margin.finish(), mono.finish()]
}

/// Quadrature against the Bessel form over `d ∈ [d_min, d_max]` (from −1)
/// and the given `b > 0`. Margin is `−|J_quad/J_bessel − 1|`.
pub fn verify_bessel_oracle(d_min: i32, d_max: i32, b_values: &[f64], tol: f64) -> Vec<VerificationReport> {
    let pts: Vec<(i32, f64)> = (d_min..=d_max)
        .flat_map(|d| b_values.iter().map(move |&b| (d, b)))
        .collect();
    let rows: Vec<(i32, f64, Result<f64>)> = pts
        .into_par_iter()
        .map(|(d, b)| {
            let r = JdQuery::new(d, b)
                .and_then(jd_bessel_oracle)
                .and_then(|o| Ok((jd_auto(d, b)?.log_value - o.log_value).exp_m1().abs()));
            (d, b, r)
        })
        .collect();
    let grid = format!(
        "d in [{d_min}, {d_max}], {} values of b in [{:e}, {:e}]",
        b_values.len(),
        b_values.iter().copied().fold(f64::INFINITY, f64::min),
        b_values.iter().copied().fold(0.0, f64::max)
    );
    let mut rep = ReportBuilder::new("quadrature J_d agrees with the Bessel form (margin = -relative difference)", grid, tol);
    for (d, b, r) in rows {
        match r {
            Ok(x) => rep.record(-x, &[("d", f64::from(d)), ("b", b)]),
            Err(e) => rep.fail(format!("d = {d}, b = {b}: {e}")),
        }
    }
    vec![rep.finish()]
}

/// `b = 10^{k/4}` for `k = −12..=10`, then 500.
pub fn bessel_oracle_b_grid() -> Vec<f64> {
    let mut v: Vec<f64> = (-12..=10).map(|k| 10f64.powf(f64::from(k) / 4.0)).collect();
    v.push(500.0);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a / b - 1.0).abs()
    }

    #[test]
    fn closed_forms_at_zero() {
        assert!(rel(jd_zero(-1).unwrap(), PI) < 1e-13);
        assert!(rel(jd_zero(0).unwrap(), 2.0) < 1e-13);
        assert!(rel(jd_zero(1).unwrap(), PI / 2.0) < 1e-13);
        assert!(rel(jd_zero(2).unwrap(), 4.0 / 3.0) < 1e-13);
        assert!(jd_zero(-2).is_err());
    }

    #[test]
    fn quadrature_anchors() {
        let v = jd(JdQuery::new(0, 1.0).unwrap(), 64).unwrap();
        assert!(rel(v.value, 2.0 * 1f64.sinh()) < 1e-13);
        let v = jd(JdQuery::new(-1, 1.0).unwrap(), 64).unwrap();
        assert!(rel(v.value, 3.977_463_260_506_422) < 1e-12, "{}", v.value);
        for d in -1..8 {
            let v = jd(JdQuery::new(d, 0.0).unwrap(), 64).unwrap();
            assert!(rel(v.value, jd_zero(d).unwrap()) < 1e-11);
        }
        assert!(jd(JdQuery { d: 2, b: 1.0 }, 8).is_err());
        assert!(JdQuery::new(-2, 1.0).is_err());
    }

    #[test]
    fn quadrature_near_zero_matches_closed_form() {
        // small b must be continuous with the b = 0 branch
        for d in [-1, 0, 3, 10] {
            let v = jd_auto(d, 1e-9).unwrap().value;
            assert!(rel(v, jd_zero(d).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn oracle_agrees_with_quadrature() {
        let v = jd_bessel_oracle(JdQuery::new(0, 2.0).unwrap()).unwrap();
        assert!(rel(v.value, 2f64.sinh()) < 1e-13);
        for &(d, b) in &[(3, 1.0), (-1, 1.0), (17, 40.0), (60, 500.0), (1, 1e-3)] {
            let o = jd_bessel_oracle(JdQuery::new(d, b).unwrap()).unwrap();
            let q = jd_auto(d, b).unwrap();
            assert!(
                (o.log_value - q.log_value).abs() < 1e-10,
                "d = {d}, b = {b}: {} vs {}",
                o.log_value,
                q.log_value
            );
        }
        assert!(jd_bessel_oracle(JdQuery::new(2, 0.0).unwrap()).is_err());
    }

    #[test]
    fn recursion_examples() {
        assert!(check_recursion_a(2, 0.0).unwrap() < 1e-14);
        assert!(check_recursion_a(5, 3.0).unwrap() < 1e-8);
        assert!(check_recursion_a(2, 10.0).unwrap() < 1e-8);
        assert!(check_recursion_a(1, 1.0).is_err());
    }

    #[test]
    fn bound_examples() {
        for d in [2, 3, 10, 50] {
            assert!(check_bound_b(d, 0.0).unwrap().abs() < 1e-11);
            assert!(check_bound_c(d, 0.0).unwrap().abs() < 1e-11);
            assert!(check_bound_d(d, 0.0).unwrap().0.abs() < 1e-11);
        }
        assert!(check_bound_b(2, 5.0).unwrap() >= 0.0);
        assert!(check_bound_b(50, 100.0).unwrap() >= 0.0);
        assert!(check_bound_c(3, 2.0).unwrap() >= 0.0);
        assert!(check_bound_c(20, 200.0).unwrap() >= 0.0);
        let (a, h) = check_bound_d(4, 1.0).unwrap();
        assert!(a >= 0.0 && h >= a);
        let (a, h) = check_bound_d(2, 50.0).unwrap();
        assert!(a >= 0.0 && h >= a);
    }

    #[test]
    fn reduced_inequality_examples() {
        for d in [2u32, 7] {
            let r = f64::from(d + 2).sqrt();
            for b in [0.0, 3.0, 30.0] {
                let m = check_lemma3_reduced(d, b, r).unwrap();
                assert!((m - check_bound_b(d, b).unwrap()).abs() < 1e-14);
            }
        }
        assert!(check_lemma3_reduced(2, 3.0, 10.0).unwrap() >= check_bound_b(2, 3.0).unwrap());
        assert!(check_lemma3_reduced(2, 0.0, 10.0).unwrap().abs() < 1e-11);
        assert!(check_lemma3_reduced(5, 1.0, 2.0).is_err());
    }

    #[test]
    fn quick_grid_passes() {
        let reports = verify_jd_claims(&JdGrid::quick(), JdTolerances::default(), false);
        for r in &reports {
            assert!(r.pass, "{r:?}");
        }
        let faulty = verify_jd_claims(&JdGrid::quick(), JdTolerances::default(), true);
        assert!(faulty.iter().any(|r| !r.pass));
    }
}
