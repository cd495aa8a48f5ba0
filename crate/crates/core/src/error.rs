//! Error types shared across the crate.

/// Convenience alias for results carrying [`Error`].
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by the numerical engine.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// The requested operation is not defined for the given material model
    /// (e.g. imaginary-axis permittivity of a tabulated model).
    #[error("unsupported material model: {0}")]
    UnsupportedModel(String),

    /// A tabulated material was queried outside its tabulated range.
    #[error("frequency {omega} rad/s outside tabulated range [{min}, {max}]")]
    OutOfRange { omega: f64, min: f64, max: f64 },

    /// An argument fell outside the mathematical domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested quantity has no well-defined value for this
    /// configuration (e.g. a semi-infinite body of a lossless medium with a
    /// propagating internal wave has no limiting reflection amplitude).
    #[error("ill-defined configuration: {0}")]
    IllDefined(String),

    /// A scattering element was requested for a singular mode (k_z = 0).
    #[error("singular mode: {0}")]
    SingularMode(String),

    /// Adaptive quadrature failed to reach the requested tolerance.
    #[error(
        "quadrature failed to converge: error estimate {error_estimate:e} \
         for value {value:e} after {evaluations} evaluations; \
         worst subinterval [{worst_lo:e}, {worst_hi:e}]"
    )]
    NonConvergence {
        value: f64,
        error_estimate: f64,
        evaluations: usize,
        worst_lo: f64,
        worst_hi: f64,
    },

    /// The cavity round-trip operator is singular at a real frequency
    /// (a lossless resonance), so the field cannot be solved.
    #[error("cavity resonance: round-trip operator is singular ({0})")]
    Resonance(String),

    /// A numerical operation produced a non-finite intermediate.
    #[error("numerical domain error: {0}")]
    NumericalDomain(String),

    /// Configuration input was structurally invalid.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
