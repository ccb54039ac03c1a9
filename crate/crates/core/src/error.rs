use core::fmt;

/// Errors produced by the model evaluators.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two nodes coincide; the path loss `(A r)^-alpha` is unbounded at
    /// `r = 0`, so co-located links are rejected rather than capped.
    SingularDistance,
    /// A parameter violated its domain (detail names the offender).
    InvalidParameter(&'static str),
    /// A closed-form expression valid only for `alpha = 2` was requested
    /// with a different path-loss exponent.
    ClosedFormRequiresAlphaTwo { alpha: f64 },
    /// Adaptive quadrature exhausted its subdivision budget before reaching
    /// the requested tolerance. Carries the best value and the achieved
    /// error estimate.
    QuadratureDidNotConverge { value: f64, error_estimate: f64 },
    /// The integrand evaluated to a non-finite value.
    NonFiniteIntegrand,
    /// A cooperative evaluator was invoked on a scenario without a relay.
    MissingRelay,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::SingularDistance => write!(f, "co-located nodes: distance is zero"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::ClosedFormRequiresAlphaTwo { alpha } => {
                write!(f, "closed form requires alpha = 2, got {alpha}")
            }
            Error::QuadratureDidNotConverge {
                value,
                error_estimate,
            } => write!(
                f,
                "quadrature did not converge: value {value}, error estimate {error_estimate}"
            ),
            Error::NonFiniteIntegrand => write!(f, "integrand produced a non-finite value"),
            Error::MissingRelay => write!(f, "scenario has no relay"),
        }
    }
}

impl core::error::Error for Error {}
