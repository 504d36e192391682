//! Gauss–Jacobi quadrature for the weight `(1 − x)^α (1 + x)^β` on `[−1, 1]`.
//!
//! Nodes are the eigenvalues of the Jacobi matrix (implicit QL, eigenvalues
//! only), each polished by Newton steps on the orthonormal three-term
//! recurrence. Weights come from the Christoffel function
//! `w_k = μ₀ / Σ_{j<n} p̂_j(x_k)²`, which avoids eigenvectors altogether.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::gamma::log_gamma_unchecked;

const QL_MAX_SWEEPS: usize = 60;

/// A symmetric Gauss–Jacobi rule for `∫₋₁¹ (1 − u²)^α f(u) du`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub exponent: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ w_k f(x_k)`.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// `∫₋₁¹ (1 − u²)^α du`.
    pub fn total_mass(&self) -> f64 {
        jacobi_mass(self.exponent, self.exponent)
    }
}

/// `∫₋₁¹ (1 − x)^α (1 + x)^β dx = 2^{α+β+1} Γ(α+1)Γ(β+1)/Γ(α+β+2)`.
pub fn jacobi_mass(alpha: f64, beta: f64) -> f64 {
    ((alpha + beta + 1.0) * std::f64::consts::LN_2 + log_gamma_unchecked(alpha + 1.0)
        + log_gamma_unchecked(beta + 1.0)
        - log_gamma_unchecked(alpha + beta + 2.0))
    .exp()
}

/// Symmetric Gauss–Jacobi rule with `n` nodes for the weight `(1 − u²)^α`.
///
/// `α = −1/2` returns the closed-form Chebyshev rule.
pub fn gauss_jacobi_rule(alpha: f64, n: usize) -> Result<QuadratureRule> {
    const OP: &str = "gauss_jacobi_rule";
    if !(alpha >= -0.5 && alpha.is_finite()) {
        return Err(Error::domain(OP, format!("exponent {alpha} must be finite and >= -1/2")));
    }
    if n == 0 {
        return Err(Error::domain(OP, "rule needs at least one node"));
    }
    if alpha == -0.5 {
        return Ok(chebyshev_rule(n));
    }
    let (nodes, weights) = jacobi_nodes_weights(alpha, alpha, n)?;
    Ok(QuadratureRule {
        exponent: alpha,
        nodes,
        weights,
    })
}

/// Closed-form Chebyshev (first kind) rule: nodes `cos((2k−1)π/2n)`, weights `π/n`.
pub fn chebyshev_rule(n: usize) -> QuadratureRule {
    let nf = n as f64;
    let nodes = (1..=n)
        .map(|k| -((2 * k - 1) as f64 * PI / (2.0 * nf)).cos())
        .collect::<Vec<_>>();
    let mut nodes = nodes;
    symmetrize(&mut nodes);
    QuadratureRule {
        exponent: -0.5,
        nodes,
        weights: vec![PI / nf; n],
    }
}

/// Cached Gauss–Legendre rule (`α = 0`).
pub fn gauss_legendre(n: usize) -> Result<Arc<QuadratureRule>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<QuadratureRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().expect("legendre cache poisoned").get(&n) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(gauss_jacobi_rule(0.0, n)?);
    cache
        .lock()
        .expect("legendre cache poisoned")
        .insert(n, Arc::clone(&rule));
    Ok(rule)
}

/// Nodes and weights for the general weight `(1 − x)^α (1 + x)^β`, `α, β > −1`.
pub fn jacobi_nodes_weights(alpha: f64, beta: f64, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    const OP: &str = "jacobi_nodes_weights";
    if !(alpha > -1.0 && beta > -1.0) {
        return Err(Error::domain(OP, format!("exponents ({alpha}, {beta}) must be > -1")));
    }
    if n == 0 {
        return Err(Error::domain(OP, "rule needs at least one node"));
    }
    let (diag, off) = jacobi_matrix(alpha, beta, n);
    let mut nodes = tridiagonal_eigenvalues(&diag, &off)?;
    nodes.sort_by(f64::total_cmp);

    for x in nodes.iter_mut() {
        for _ in 0..4 {
            let (p, dp, _) = orthonormal_eval(&diag, &off, *x);
            if dp == 0.0 {
                break;
            }
            let step = p / dp;
            let next = *x - step;
            if !(next > -1.0 && next < 1.0) {
                break;
            }
            *x = next;
            if step.abs() <= 4.0 * f64::EPSILON * x.abs().max(1e-300) {
                break;
            }
        }
    }
    if alpha == beta {
        symmetrize(&mut nodes);
    }

    let mass = jacobi_mass(alpha, beta);
    let weights = nodes
        .iter()
        .map(|&x| mass / orthonormal_eval(&diag, &off, x).2)
        .collect::<Vec<_>>();

    if nodes.windows(2).any(|w| w[1] <= w[0]) || nodes.iter().any(|x| x.abs() >= 1.0) {
        return Err(Error::Convergence {
            op: OP,
            iterations: QL_MAX_SWEEPS,
            detail: format!("nodes not strictly increasing inside (-1, 1) for alpha = {alpha}, beta = {beta}, n = {n}"),
        });
    }
    let total: f64 = weights.iter().sum();
    if (total / mass - 1.0).abs() > 1e-12 || weights.iter().any(|&w| !(w > 0.0)) {
        return Err(Error::internal(
            OP,
            format!("weights sum to {total}, expected {mass} (alpha = {alpha}, beta = {beta}, n = {n})"),
        ));
    }
    Ok((nodes, weights))
}

fn symmetrize(nodes: &mut [f64]) {
    let n = nodes.len();
    for i in 0..n / 2 {
        let m = 0.5 * (nodes[n - 1 - i] - nodes[i]);
        nodes[i] = -m;
        nodes[n - 1 - i] = m;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
}

/// Recurrence coefficients of the orthonormal Jacobi polynomials:
/// `off[j] p̂_{j+1} = (x − diag[j]) p̂_j − off[j−1] p̂_{j−1}`.
fn jacobi_matrix(alpha: f64, beta: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let ab = alpha + beta;
    let mut diag = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n);
    for j in 0..n {
        let jf = j as f64;
        let s = 2.0 * jf + ab;
        let a = if j == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            (beta * beta - alpha * alpha) / (s * (s + 2.0))
        };
        diag.push(a);
        // off-diagonal between j and j + 1
        let k = jf + 1.0;
        let s1 = 2.0 * k + ab;
        let b2 = if k == 1.0 {
            4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))
        } else {
            4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (s1 * s1 * (s1 + 1.0) * (s1 - 1.0))
        };
        off.push(b2.sqrt());
    }
    (diag, off)
}

/// Evaluates `p̂_n(x)`, its derivative, and `Σ_{j<n} p̂_j(x)²` (with `p̂₀ = 1`).
fn orthonormal_eval(diag: &[f64], off: &[f64], x: f64) -> (f64, f64, f64) {
    let n = diag.len();
    let mut p_prev = 0.0;
    let mut p = 1.0;
    let mut dp_prev = 0.0;
    let mut dp = 0.0;
    let mut sumsq = 0.0;
    for j in 0..n {
        sumsq += p * p;
        let b_prev = if j == 0 { 0.0 } else { off[j - 1] };
        let p_next = ((x - diag[j]) * p - b_prev * p_prev) / off[j];
        let dp_next = ((x - diag[j]) * dp + p - b_prev * dp_prev) / off[j];
        p_prev = p;
        p = p_next;
        dp_prev = dp;
        dp = dp_next;
    }
    (p, dp, sumsq)
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and
/// sub-diagonal `off[..n-1]`, by implicit QL with Wilkinson-type shifts.
fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n.saturating_sub(1)].copy_from_slice(&off[..n.saturating_sub(1)]);

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > QL_MAX_SWEEPS {
                return Err(Error::Convergence {
                    op: "tridiagonal_eigenvalues",
                    iterations: QL_MAX_SWEEPS,
                    detail: format!("eigenvalue {l} of {n}"),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(d)
}
