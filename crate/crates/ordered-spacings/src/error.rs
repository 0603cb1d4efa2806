use thiserror::Error;

/// Errors surfaced by distribution construction and evaluation.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Structurally invalid input: bad sample count, statistic order out of
    /// range for the model, or a query point outside the unit interval.
    #[error("domain error: {0}")]
    Domain(String),

    /// A float-mode evaluation lost too many digits to cancellation and no
    /// exact fallback was permitted.
    #[error(
        "precision failure: {context} retained ~{surviving_digits:.1} significant digits \
         (minimum {minimum_digits}); rerun in rational mode or raise the rational cap"
    )]
    Precision {
        context: String,
        surviving_digits: f64,
        minimum_digits: u32,
    },

    /// Exact arithmetic was requested for a sample count above the cap.
    #[error("rational arithmetic unavailable: n = {n} exceeds cap {cap} (override with {env})")]
    RationalCap { n: u32, cap: u32, env: &'static str },

    /// The statistic is almost surely constant; it has no density.
    #[error("degenerate statistic: point mass at {at}; no density exists")]
    DegenerateDensity { at: f64 },

    /// Numerical integration could not reach the requested accuracy.
    #[error("quadrature error estimate {achieved:.3e} exceeds requested {requested:.3e}")]
    Quadrature { achieved: f64, requested: f64 },

    /// A data value outside [0,1] (or non-finite) at the given 0-based index.
    #[error("invalid data value at index {index}: {value} is not in [0, 1]")]
    DataValue { index: usize, value: f64 },

    /// Too few observations for the requested boundary mode.
    #[error("need at least {needed} observations for this mode, got {got}")]
    DataCount { needed: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

/// Environment variable that overrides the default rational-mode cap on n.
pub const RATIONAL_NMAX_ENV: &str = "ORDERED_SPACINGS_RATIONAL_NMAX";
