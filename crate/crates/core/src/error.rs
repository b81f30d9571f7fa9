use thiserror::Error;

/// Errors produced by the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A value object was constructed with fields violating its invariants.
    #[error("invalid {what}: {reason}")]
    Invalid { what: &'static str, reason: String },

    /// The closed-form uniform filter was evaluated next to a tangent pole.
    #[error("closed-form filter evaluated at tan pole, omega = {omega}")]
    Pole { omega: f64 },

    /// Adaptive quadrature ran out of subdivisions.
    #[error(
        "quadrature did not converge after {subdivisions} subdivisions: \
         estimate {estimate:e}, error bound {error_bound:e}"
    )]
    Convergence {
        estimate: f64,
        error_bound: f64,
        subdivisions: usize,
    },

    /// A quadrature failure while evaluating the coherence signal.
    #[error("signal at t = {t}, n = {n}, alpha = {alpha}: {source}")]
    Signal {
        t: f64,
        n: usize,
        alpha: f64,
        #[source]
        source: Box<Error>,
    },

    /// Something that must hold by construction did not.
    #[error("internal consistency violated: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn invalid(what: &'static str, reason: impl Into<String>) -> Error {
    Error::Invalid {
        what,
        reason: reason.into(),
    }
}
