//! A continuous sub-probability law on `[lo, hi]`, stored as log-survival on a
//! grid and interpolated monotonically.
//!
//! Interpolation runs in the coordinate `x = −ln(hi − r)`, in which a survival
//! function vanishing like `(hi − r)^q` at the top is linear; this keeps
//! relative accuracy in the upper tail. Cubic Hermite with Fritsch–Butland
//! slopes preserves monotonicity.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub(crate) struct Tabulated {
    pub grid: Vec<f64>,
    pub ln_surv: Vec<f64>,
    /// total mass of this part, `S(lo)`
    pub mass: f64,
    #[serde(skip)]
    slopes: Vec<f64>,
    #[serde(skip)]
    xs: Vec<f64>,
    /// index of the last node with finite `ln_surv`
    #[serde(skip)]
    last: usize,
}

impl Tabulated {
    /// `grid` strictly increasing with `grid[0] = lo`, `grid[n−1] = hi`;
    /// `surv` nonincreasing, `surv[n−1] = 0`.
    pub fn new(grid: Vec<f64>, surv: &[f64]) -> Self {
        debug_assert_eq!(grid.len(), surv.len());
        let n = grid.len();
        let hi = grid[n - 1];
        let mass = surv[0];
        // enforce monotonicity against rounding in the node evaluations
        let mut ln_surv = Vec::with_capacity(n);
        let mut run = f64::INFINITY;
        for (i, &s) in surv.iter().enumerate() {
            let s = if i == n - 1 { 0.0 } else { s.max(0.0) };
            run = run.min(s);
            ln_surv.push(run.ln());
        }
        let last = ln_surv.iter().rposition(|v| v.is_finite()).unwrap_or(0);
        let xs: Vec<f64> = grid[..n - 1].iter().map(|&r| -(hi - r).ln()).collect();
        let slopes = pchip_slopes(&xs[..=last.min(n - 2)], &ln_surv[..=last.min(n - 2)]);
        Self {
            grid,
            ln_surv,
            mass,
            slopes,
            xs,
            last: last.min(n - 2),
        }
    }

    pub fn lo(&self) -> f64 {
        self.grid[0]
    }

    pub fn hi(&self) -> f64 {
        self.grid[self.grid.len() - 1]
    }

    /// Survival of this part at `r` (its contribution to `P(R > r)`).
    pub fn surv(&self, r: f64) -> f64 {
        if r <= self.grid[0] {
            return self.mass;
        }
        let hi = self.hi();
        if r >= hi {
            return 0.0;
        }
        let x = -(hi - r).ln();
        let last = self.last;
        if r >= self.grid[last] {
            // power-law tail towards hi
            let q = if last >= 1 {
                let dx = self.xs[last] - self.xs[last - 1];
                ((self.ln_surv[last - 1] - self.ln_surv[last]) / dx).max(0.0)
            } else {
                1.0
            };
            return (self.ln_surv[last] - q * (x - self.xs[last])).exp().min(self.mass);
        }
        let i = self.grid[..=last].partition_point(|&g| g <= r) - 1;
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let h = x1 - x0;
        let t = ((x - x0) / h).clamp(0.0, 1.0);
        let (y0, y1) = (self.ln_surv[i], self.ln_surv[i + 1]);
        let (m0, m1) = (self.slopes[i] * h, self.slopes[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        let y = (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * m0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * m1;
        // the Hermite cubic is monotone, but clamp against rounding
        y.clamp(y1, y0).exp()
    }
}

/// Fritsch–Butland slopes for monotone cubic Hermite interpolation.
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n < 2 {
        return vec![0.0; n];
    }
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let del: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    let mut m = vec![0.0; n];
    if n == 2 {
        m[0] = del[0];
        m[1] = del[0];
        return m;
    }
    for i in 1..n - 1 {
        let (a, b) = (del[i - 1], del[i]);
        if a * b <= 0.0 {
            m[i] = 0.0;
        } else {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            m[i] = (w1 + w2) / (w1 / a + w2 / b);
        }
    }
    m[0] = end_slope(h[0], h[1], del[0], del[1]);
    m[n - 1] = end_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
    m
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_law_is_reproduced() {
        // S(r) = (1 − r)^3 on [0, 1]
        let grid: Vec<f64> = (0..=200).map(|i| f64::from(i) / 200.0).collect();
        let surv: Vec<f64> = grid.iter().map(|r| (1.0 - r).powi(3)).collect();
        let t = Tabulated::new(grid, &surv);
        for &r in &[0.0, 0.123, 0.5, 0.9, 0.999, 0.999_999] {
            let exact = (1.0f64 - r).powi(3);
            assert!((t.surv(r) / exact - 1.0).abs() < 1e-9, "r = {r}");
        }
        assert_eq!(t.surv(1.0), 0.0);
        assert_eq!(t.surv(-1.0), 1.0);
    }

    #[test]
    fn monotone_on_rough_data() {
        let grid = vec![0.0, 0.1, 0.2, 0.5, 0.51, 0.9, 1.0];
        let surv = vec![1.0, 0.99, 0.6, 0.59, 0.1, 0.09, 0.0];
        let t = Tabulated::new(grid, &surv);
        let mut prev = 1.0;
        for i in 0..=1000 {
            let s = t.surv(f64::from(i) / 1000.0);
            assert!(s <= prev + 1e-15);
            prev = s;
        }
    }
}
