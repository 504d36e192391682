//! Tail probabilities of `‖Σ aᵢ ξᵢ‖` for independent uniform points `ξᵢ` on the
//! unit sphere of `R^d`, their Gaussian counterparts, and numerical checks of
//! the inequalities that compare the two.

pub mod ball_measure;
pub mod cli;
pub mod compare;
pub mod error;
pub mod format;
pub mod laplace_jd;
pub mod report;
pub mod sampling;
pub mod specfun;
pub mod sphere_sum;

pub use error::{Error, Result};
