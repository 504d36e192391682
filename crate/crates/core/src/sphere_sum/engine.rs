//! One step of the fold: the law of `‖Y + s η‖` from the law of `‖Y‖`, for a
//! rotationally invariant `Y`, an independent uniform direction `η` and a
//! (possibly random) length `s`.
//!
//! With `u` the cosine between `Y` and `η` (density `∝ (1−u²)^{(d−3)/2}`) the
//! new norm is `√(r² + 2rsu + s²)`. For `t > s` the event `{‖Y+sη‖ > t}` is
//! `{r > r₊(u)}` with `r₊ = −us + √(t² − s²(1−u²))`, so
//! `S_new(t) = E_u S(r₊(u))`: an average of old survival values, which keeps
//! relative accuracy far into the tail. For `t ≤ s` the complementary event is
//! `{u ≤ −√(1−t²/s²), r₋ ≤ r ≤ r₊}` and the CDF is averaged instead.
//!
//! The `u`-integral is done in the angle `φ = arccos u` (density `∝ sin^{d−2}φ`),
//! split wherever `r₊` or `r₋` crosses a point where the old law is not smooth,
//! with a polynomial change of variables on each piece that flattens the
//! algebraic endpoint behaviour.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::specfun::{gauss_legendre, reg_inc_beta_pair};

use super::tabulated::Tabulated;
use super::EngineConfig;

/// A point where a survival function fails to be smooth, with the exponent
/// `q` of its local behaviour `|r − β|^q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Breakpoint {
    pub r: f64,
    pub q: f64,
}

/// Law of a nonnegative radius: finitely many atoms plus a tabulated
/// continuous part.
#[derive(Debug, Clone)]
pub(crate) struct Law {
    pub atoms: Vec<(f64, f64)>,
    pub cont: Option<Tabulated>,
    pub breakpoints: Vec<Breakpoint>,
}

impl Law {
    pub fn atom(r: f64) -> Self {
        Self {
            atoms: vec![(r, 1.0)],
            cont: None,
            breakpoints: Vec::new(),
        }
    }

    /// `P(R > r)`.
    pub fn surv(&self, r: f64) -> f64 {
        let a: f64 = self.atoms.iter().filter(|(x, _)| *x > r).map(|(_, p)| p).sum();
        a + self.cont.as_ref().map_or(0.0, |c| c.surv(r))
    }

    pub fn support(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for &(r, _) in &self.atoms {
            lo = lo.min(r);
            hi = hi.max(r);
        }
        if let Some(c) = &self.cont {
            lo = lo.min(c.lo());
            hi = hi.max(c.hi());
        }
        (lo, hi)
    }

    /// Points to split the angular integral at: atoms, breakpoints, and the
    /// ends of the continuous part.
    fn split_points(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.atoms.iter().map(|a| a.0).collect();
        v.extend(self.breakpoints.iter().map(|b| b.r));
        if let Some(c) = &self.cont {
            v.push(c.lo());
            v.push(c.hi());
        }
        v.retain(|&r| r > 0.0);
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }
}

/// `θ` density on `[0, π]` in the angle: `sin^{d−2}φ / ∫ sin^{d−2}`.
///
/// Pieces that end at a split point get a polynomial change of variables
/// flattening that end; `0` and `π` are regular points of every integrand
/// and are left alone.
pub(crate) struct Angular {
    pub d: u32,
    norm: f64,
    /// `[plain, flattened left, flattened right, both]`
    rules: [Vec<(f64, f64)>; 4],
}

/// Longest piece, in radians, handled by one rule.
const MAX_PIECE: f64 = std::f64::consts::FRAC_PI_4;

impl Angular {
    pub fn new(d: u32, segment_nodes: usize) -> Result<Self> {
        let rule = gauss_legendre(segment_nodes)?;
        let map = |psi: &dyn Fn(f64) -> (f64, f64)| -> Vec<(f64, f64)> {
            rule.nodes
                .iter()
                .zip(&rule.weights)
                .map(|(&x, &w)| {
                    let (p, dp) = psi(0.5 * (x + 1.0));
                    (p, 0.5 * w * dp)
                })
                .collect()
        };
        let rules = [
            map(&|y| (y, 1.0)),
            map(&|y| (y * y * y, 3.0 * y * y)),
            map(&|y| {
                let z = 1.0 - y;
                (1.0 - z * z * z, 3.0 * z * z)
            }),
            // ψ(y) = y³(10 − 15y + 6y²)
            map(&|y| {
                (
                    y * y * y * (10.0 - 15.0 * y + 6.0 * y * y),
                    30.0 * y * y * (1.0 - y) * (1.0 - y),
                )
            }),
        ];
        let norm = crate::laplace_jd::jd_zero(d as i32 - 3)?;
        Ok(Self { d, norm, rules })
    }

    fn density(&self, phi: f64) -> f64 {
        if self.d == 2 {
            1.0
        } else {
            phi.sin().powi(self.d as i32 - 2)
        }
    }

    /// `∫_{a}^{b} f(φ) sin^{d−2}φ dφ / norm`, with `cuts` splitting `[a, b]`.
    /// `a` counts as a split point unless it is `0`. `soft` cuts also split
    /// the range but are regular points of `f`, so they get no substitution.
    fn integrate(&self, a: f64, b: f64, cuts: &mut Vec<f64>, soft: &[f64], f: impl Fn(f64) -> f64) -> f64 {
        // (position, is a split point of f)
        let mut pts: Vec<(f64, bool)> = cuts
            .iter()
            .filter(|&&c| c > a && c < b)
            .map(|&c| (c, true))
            .chain(soft.iter().filter(|&&c| c > a && c < b).map(|&c| (c, false)))
            .collect();
        pts.push((a, a > 0.0));
        pts.push((b, b < PI));
        // hard before soft at equal positions, so dedup keeps the hard one
        pts.sort_by(|x, y| x.0.total_cmp(&y.0).then(y.1.cmp(&x.1)));
        pts.dedup_by(|x, y| x.0 == y.0);
        let mut total = 0.0;
        for w in pts.windows(2) {
            let ((p0, sing0), (p1, sing1)) = (w[0], w[1]);
            if p1 <= p0 {
                continue;
            }
            let pieces = ((p1 - p0) / MAX_PIECE).ceil().max(1.0) as usize;
            let len = (p1 - p0) / pieces as f64;
            for k in 0..pieces {
                let left = sing0 && k == 0;
                let right = sing1 && k + 1 == pieces;
                let rule = &self.rules[usize::from(left) + 2 * usize::from(right)];
                let q0 = p0 + len * k as f64;
                let mut seg = 0.0;
                for &(x, wt) in rule {
                    if wt == 0.0 {
                        continue;
                    }
                    let phi = q0 + len * x;
                    seg += wt * self.density(phi) * f(phi);
                }
                total += seg * len;
            }
        }
        total / self.norm
    }
}

/// Geometric cuts `centre ± width·2^j` out to `MAX_PIECE`, resolving a
/// complex singularity at distance `width` from `centre`.
fn graded_cuts(centre: f64, width: f64) -> Vec<f64> {
    let mut v = Vec::new();
    if !(width > 0.0) || width >= MAX_PIECE {
        return v;
    }
    v.push(centre);
    let mut h = width;
    while h < MAX_PIECE {
        v.push(centre - h);
        v.push(centre + h);
        h *= 2.0;
    }
    v
}

/// `P(θ > v)` for the first coordinate `θ` of a uniform point on `S^{d−1}`,
/// given `lo = (1 − v)/2` and `up = (1 + v)/2` computed without cancellation.
fn theta_tail(d: u32, lo: f64, up: f64) -> Result<f64> {
    if lo <= 0.0 {
        return Ok(0.0);
    }
    if up <= 0.0 {
        return Ok(1.0);
    }
    let h = 0.5 * (f64::from(d) - 1.0);
    // renormalise the pair so that x + y = 1 exactly up to rounding
    let s = lo + up;
    Ok(reg_inc_beta_pair(h, h, lo / s, up / s)?.0)
}

/// `P(‖r e + s η‖ > t)` for fixed `r, s > 0`.
pub(crate) fn atom_step(d: u32, r: f64, s: f64, t: f64) -> Result<f64> {
    if t < (r - s).abs() {
        return Ok(1.0);
    }
    if t >= r + s {
        return Ok(0.0);
    }
    // v = (t² − r² − s²)/(2rs); (1 − v)/2 and (1 + v)/2 in factored form
    let den = 4.0 * r * s;
    let lo = (r + s - t) * (r + s + t) / den;
    let up = (t - r + s) * (t + r - s) / den;
    theta_tail(d, lo, up)
}

/// Survival of `‖Y + sη‖` at `t`, where `‖Y‖ ~ law`, excluding atoms of `law`
/// (those go through [`atom_step`]). `cuts_base` are the split points of the
/// continuous part.
fn cont_step(ang: &Angular, cont: &Tabulated, cuts_base: &[f64], s: f64, t: f64) -> f64 {
    let mass = cont.mass;
    if t <= 0.0 {
        return mass;
    }
    let (lo, hi) = (cont.lo(), cont.hi());
    if t >= hi + s {
        return 0.0;
    }
    // angles at which r± crosses each split point β: u = (t² − s² − β²)/(2βs)
    let mut cuts: Vec<f64> = cuts_base
        .iter()
        .filter_map(|&b| {
            let u = (t * t - s * s - b * b) / (2.0 * b * s);
            (u.abs() < 1.0).then(|| u.acos())
        })
        .collect();
    if t > s {
        if t - s >= hi {
            return 0.0;
        }
        if t + s <= lo {
            return mass;
        }
        let d2 = (t - s) * (t + s);
        // √(d2 + s²u²) branches at u = ±i√d2/s, close to φ = π/2 when t ≈ s
        let soft = graded_cuts(FRAC_PI_2, d2.sqrt() / s);
        ang.integrate(0.0, PI, &mut cuts, &soft, |phi| {
            let u = phi.cos();
            let root = (d2 + s * s * u * u).max(0.0).sqrt();
            // for u > 0 the cancellation-free form d2 / (us + √…)
            let rp = if u > 0.0 { d2 / (u * s + root) } else { -u * s + root };
            cont.surv(rp)
        })
    } else {
        // F_new(t) = E[1{u ≤ −c}(S(r₋) − S(r₊))], c = √(1 − t²/s²)
        let c = ((s - t) * (s + t)).max(0.0).sqrt() / s;
        let phi_c = (-c).acos();
        // the mirror branch point π − φ_c lies just left of the range when t ≈ s
        let soft = graded_cuts(phi_c, 2.0 * (phi_c - FRAC_PI_2));
        let f = ang.integrate(phi_c, PI, &mut cuts, &soft, |phi| {
            let u = phi.cos();
            let sn = phi.sin();
            // t² − s² sin²φ ≥ 0 on this range
            let root = ((t - s * sn) * (t + s * sn)).max(0.0).sqrt();
            let rp = -u * s + root;
            let rm = (-u * s - root).max(0.0);
            (cont.surv(rm) - cont.surv(rp)).max(0.0)
        });
        (mass - f).max(0.0)
    }
}

/// One radius value `s` with probability `w` in the current step.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ShiftAtom {
    pub s: f64,
    pub w: f64,
}

/// Survival of the new law at `t`, continuous part only.
fn new_cont_surv(ang: &Angular, law: &Law, cuts: &[f64], shifts: &[ShiftAtom], t: f64) -> Result<f64> {
    let mut total = 0.0;
    for sh in shifts {
        let mut part = 0.0;
        if sh.s == 0.0 {
            // unchanged law: only its continuous part stays continuous
            if let Some(c) = &law.cont {
                part += c.surv(t);
            }
        } else {
            for &(r, p) in &law.atoms {
                if r > 0.0 {
                    part += p * atom_step(ang.d, r, sh.s, t)?;
                }
            }
            if let Some(c) = &law.cont {
                part += cont_step(ang, c, cuts, sh.s, t);
            }
        }
        total += sh.w * part;
    }
    Ok(total)
}

/// Fold one coefficient into the law.
pub(crate) fn step(ang: &Angular, law: &Law, shifts: &[ShiftAtom], cfg: &EngineConfig) -> Result<Law> {
    let d = ang.d;
    let half = 0.5 * (f64::from(d) - 1.0);
    // atoms that stay atoms: an atom at 0 moved by s, or any atom moved by 0
    let mut atoms: Vec<(f64, f64)> = Vec::new();
    let mut cont_mass = 0.0;
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    let mut bps: Vec<Breakpoint> = Vec::new();
    for sh in shifts {
        if sh.w == 0.0 {
            continue;
        }
        for &(r, p) in &law.atoms {
            if r == 0.0 || sh.s == 0.0 {
                atoms.push((r + sh.s, p * sh.w));
            } else {
                cont_mass += p * sh.w;
                lo = lo.min((r - sh.s).abs());
                hi = hi.max(r + sh.s);
                for b in [(r - sh.s).abs(), r + sh.s] {
                    bps.push(Breakpoint { r: b, q: half });
                }
            }
        }
        if let Some(c) = &law.cont {
            cont_mass += c.mass * sh.w;
            if sh.s == 0.0 {
                lo = lo.min(c.lo());
                hi = hi.max(c.hi());
                bps.extend(law.breakpoints.iter().copied());
            } else {
                let (clo, chi) = (c.lo(), c.hi());
                let new_lo = if sh.s < clo {
                    clo - sh.s
                } else if sh.s > chi {
                    sh.s - chi
                } else {
                    0.0
                };
                lo = lo.min(new_lo);
                hi = hi.max(chi + sh.s);
                for b in law.breakpoints.iter() {
                    for r in [(b.r - sh.s).abs(), b.r + sh.s] {
                        bps.push(Breakpoint { r, q: b.q + half });
                    }
                }
            }
        }
    }
    atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (r, p) in atoms {
        match merged.last_mut() {
            Some(last) if last.0 == r => last.1 += p,
            _ => merged.push((r, p)),
        }
    }
    bps.retain(|b| b.q < cfg.breakpoint_order_cap);
    bps.sort_by(|a, b| a.q.total_cmp(&b.q).then(a.r.total_cmp(&b.r)));
    bps.dedup_by(|a, b| a.r == b.r);
    bps.truncate(cfg.max_breakpoints);
    bps.sort_by(|a, b| a.r.total_cmp(&b.r));

    if cont_mass <= 0.0 {
        return Ok(Law {
            atoms: merged,
            cont: None,
            breakpoints: Vec::new(),
        });
    }
    let cuts = law.split_points();
    let eval = |t: f64| new_cont_surv(ang, law, &cuts, shifts, t);
    let bp_r: Vec<f64> = bps.iter().map(|b| b.r).collect();
    let cont = tabulate(lo, hi, &bp_r, cont_mass, cfg, &eval)?;
    Ok(Law {
        atoms: merged,
        cont: Some(cont),
        breakpoints: bps,
    })
}

/// Tabulate a continuous survival function on `[lo, hi]`: a pilot pass on a
/// uniform grid with geometric grading at breakpoints, then a final grid
/// equidistributing a monitor built from the pilot.
pub(crate) fn tabulate<F>(lo: f64, hi: f64, bps: &[f64], mass: f64, cfg: &EngineConfig, eval: &F) -> Result<Tabulated>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if !(hi > lo) {
        return Err(Error::internal(
            "tabulate",
            format!("degenerate continuous support [{lo}, {hi}]"),
        ));
    }
    let span = hi - lo;
    let mut fixed: Vec<f64> = vec![lo, hi];
    let mut anchors: Vec<f64> = bps.iter().copied().filter(|&b| b > lo && b < hi).collect();
    fixed.extend(anchors.iter().copied());
    anchors.push(lo);
    anchors.push(hi);
    for &b in &anchors {
        let mut h = span;
        for _ in 0..cfg.grading_levels {
            h *= 0.5;
            for r in [b - h, b + h] {
                if r > lo && r < hi {
                    fixed.push(r);
                }
            }
        }
    }
    let pilot_grid = merge_grid(
        (0..=cfg.pilot_points).map(|i| lo + span * i as f64 / cfg.pilot_points as f64).chain(fixed.iter().copied()),
        lo,
        hi,
    );
    let pilot = eval_all(&pilot_grid, mass, eval)?;

    // monitor: arc length in r, probability and log-survival
    let ln_floor = pilot
        .iter()
        .filter(|&&s| s > 0.0)
        .map(|s| s.ln())
        .fold(0.0f64, f64::min)
        .max(-700.0);
    let ln_scale = (-ln_floor).max(1.0);
    let lnc = |s: f64| if s > 0.0 { s.ln().max(ln_floor) } else { ln_floor };
    let mut cum = vec![0.0; pilot_grid.len()];
    for i in 1..pilot_grid.len() {
        let dr = (pilot_grid[i] - pilot_grid[i - 1]) / span;
        let dp = (pilot[i - 1] - pilot[i]).abs() / mass;
        let dl = (lnc(pilot[i - 1]) - lnc(pilot[i])).abs() / ln_scale;
        cum[i] = cum[i - 1] + dr + dp + dl;
    }
    let total = cum[cum.len() - 1];
    let n = cfg.grid_points;
    let mut pts: Vec<f64> = Vec::with_capacity(n + fixed.len());
    let mut j = 0;
    for k in 0..=n {
        let target = total * k as f64 / n as f64;
        while j + 1 < cum.len() - 1 && cum[j + 1] < target {
            j += 1;
        }
        let (c0, c1) = (cum[j], cum[j + 1]);
        let f = if c1 > c0 { ((target - c0) / (c1 - c0)).clamp(0.0, 1.0) } else { 0.0 };
        pts.push(pilot_grid[j] + f * (pilot_grid[j + 1] - pilot_grid[j]));
    }
    pts.extend(fixed);
    let grid = merge_grid(pts.into_iter(), lo, hi);
    let surv = eval_all(&grid, mass, eval)?;
    Ok(Tabulated::new(grid, &surv))
}

fn merge_grid(pts: impl Iterator<Item = f64>, lo: f64, hi: f64) -> Vec<f64> {
    let mut v: Vec<f64> = pts.filter(|r| *r >= lo && *r <= hi).collect();
    v.push(lo);
    v.push(hi);
    v.sort_by(f64::total_cmp);
    let tiny = 1e-15 * (hi.abs() + lo.abs()).max(f64::MIN_POSITIVE);
    v.dedup_by(|a, b| (*a - *b).abs() <= tiny);
    // keep the exact endpoints
    let n = v.len();
    v[0] = lo;
    v[n - 1] = hi;
    v
}

fn eval_all<F>(grid: &[f64], mass: f64, eval: &F) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let n = grid.len();
    let mut out: Vec<f64> = grid
        .par_iter()
        .enumerate()
        .map(|(i, &t)| {
            if i == 0 {
                Ok(mass)
            } else if i == n - 1 {
                Ok(0.0)
            } else {
                eval(t).map(|s| s.clamp(0.0, mass))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    out[0] = mass;
    Ok(out)
}

/// `E_θ[P(R > −θ s + √(t² − s²(1 − θ²)))]` for `t > s`, split at the law's
/// atoms and breakpoints.
pub(crate) fn shifted_survival(ang: &Angular, law: &Law, s: f64, t: f64) -> f64 {
    let cuts_base = law.split_points();
    let mut cuts: Vec<f64> = cuts_base
        .iter()
        .filter_map(|&b| {
            let u = (t * t - s * s - b * b) / (2.0 * b * s);
            (u.abs() < 1.0).then(|| u.acos())
        })
        .collect();
    let d2 = (t - s) * (t + s);
    let soft = graded_cuts(FRAC_PI_2, d2.sqrt() / s);
    ang.integrate(0.0, PI, &mut cuts, &soft, |phi| {
        let u = phi.cos();
        let root = (d2 + s * s * u * u).max(0.0).sqrt();
        let rp = if u > 0.0 { d2 / (u * s + root) } else { -u * s + root };
        law.surv(rp)
    })
}
