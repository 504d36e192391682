//! Special-function kernels: gamma family, chi-square laws (central and
//! noncentral), the normal CDF, modified Bessel `I_ν`, and Gauss–Jacobi rules.
//!
//! Everything here is a pure function of its arguments; quadrature rules are
//! immutable once built and the Legendre cache hands out shared `Arc`s.

mod bessel;
mod gamma;
mod jacobi;
mod noncentral;
mod normal;

pub use bessel::{bessel_i, ln_bessel_i, EvalResult, Method, ASYMPTOTIC_THRESHOLD};
pub use gamma::{
    chi_square_cdf, chi_square_sf, ln_chi_square_sf, ln_reg_gamma_upper, log_gamma,
    reg_gamma_lower, reg_gamma_upper, reg_inc_beta_pair,
};
pub use jacobi::{
    chebyshev_rule, gauss_jacobi_rule, gauss_legendre, jacobi_mass, jacobi_nodes_weights,
    QuadratureRule,
};
pub use noncentral::noncentral_chi_square_cdf;
pub use normal::{std_normal_cdf, std_normal_pdf};

pub(crate) use gamma::{ln_power_integral, log_gamma_unchecked};
