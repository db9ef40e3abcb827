use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared across the crate. Out-of-support *likelihood evaluations* are
/// not errors: [`crate::log_likelihood`] returns `-inf` so that optimizers can
/// probe freely. The variants below are for operations whose result would be
/// meaningless rather than merely zero-density.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// `beta = mu - tau/xi` (or a quantity needing `1/xi`) requested at `xi = 0`.
    #[error("shape parameter is numerically zero; beta = mu - tau/xi is undefined")]
    ZeroShape,

    /// Parameters outside the support `Omega_n` for an operation that requires
    /// strictly positive `w_i`.
    #[error("parameters lie outside the likelihood support")]
    OutOfSupport,

    /// Data that cannot carry a GEV fit (fewer than two points, non-finite
    /// values, or all observations equal).
    #[error("degenerate data: {0}")]
    DegenerateData(String),

    /// No sign change found when expanding the root bracket; indicates a shape
    /// value numerically at a bound of `(-1, n-1)`.
    #[error("no sign-change bracket for the cross-section root at xi = {xi}")]
    BracketFailure { xi: f64 },

    /// An iterative solver ran out of iterations.
    #[error("failed to converge: {0}")]
    ConvergenceFailure(String),

    /// The profile search produced no evaluable candidate.
    #[error("no profile-likelihood candidate could be evaluated")]
    NoCandidate,

    /// Observed information too ill-conditioned to invert.
    #[error("observed information is numerically singular (condition number {cond:.3e})")]
    SingularInformation { cond: f64 },

    /// A caller-checkable precondition does not hold.
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}
