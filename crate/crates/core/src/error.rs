use thiserror::Error;

/// Errors raised by the numerical kernels and the verification drivers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    /// An iterative method did not reach its tolerance.
    #[error("{op} did not converge after {iterations} iterations ({detail})")]
    Convergence {
        op: &'static str,
        iterations: usize,
        detail: String,
    },

    /// A result violated an internal consistency check (for example a
    /// probability that had to be clamped by more than rounding noise).
    #[error("internal error in {op}: {detail}")]
    Internal { op: &'static str, detail: String },

    /// Invalid engine or run configuration.
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }

    pub(crate) fn internal(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Internal {
            op,
            detail: detail.into(),
        }
    }
}

/// Probabilities outside `[0, 1]` by more than this are treated as bugs.
pub const CLAMP_SLACK: f64 = 1e-12;

/// Clamp a computed probability to `[0, 1]`.
///
/// Excursions up to [`CLAMP_SLACK`] are rounding; anything larger is an
/// [`Error::Internal`].
pub fn clamp_probability(op: &'static str, p: f64) -> Result<f64> {
    if !p.is_finite() {
        return Err(Error::internal(op, format!("non-finite probability {p}")));
    }
    if p < -CLAMP_SLACK || p > 1.0 + CLAMP_SLACK {
        return Err(Error::internal(
            op,
            format!("probability {p:e} outside [0, 1] beyond rounding slack"),
        ));
    }
    Ok(p.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clamp_accepts_rounding_noise() {
        assert_eq!(clamp_probability("t", 1.0 + 1e-14).unwrap(), 1.0);
        assert_eq!(clamp_probability("t", -1e-15).unwrap(), 0.0);
        assert_eq!(clamp_probability("t", 0.25).unwrap(), 0.25);
    }

    #[test]
    fn clamp_rejects_real_excursions() {
        assert!(matches!(
            clamp_probability("t", 1.001),
            Err(Error::Internal { .. })
        ));
        assert!(clamp_probability("t", f64::NAN).is_err());
    }
}
