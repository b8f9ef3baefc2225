use thiserror::Error;

/// Everything that can go wrong during evaluation or simulation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter is outside its admissible range.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series did not settle within the term budget, even after
    /// precision escalation.
    #[error("series did not converge within {max_terms} terms (order {order}, argument {arg})")]
    NonConvergence {
        order: f64,
        arg: f64,
        max_terms: usize,
    },

    /// Cancellation so severe that the required working precision
    /// exceeds the escalation cap.
    #[error(
        "cancellation needs about {needed} digits (cap {cap}) at order {order}, argument {arg}"
    )]
    CancellationUnresolvable {
        order: f64,
        arg: f64,
        needed: u32,
        cap: u32,
    },

    /// Adaptive quadrature ran out of panels before reaching tolerance.
    #[error("quadrature stalled: error estimate {estimate:.3e} above tolerance {tolerance:.3e}")]
    Quadrature { estimate: f64, tolerance: f64 },

    /// A counting-probability sum was cut off with the tail still above
    /// tolerance.
    #[error("counting series truncated at k={k}: tail {tail:.3e} above {tol:.3e}")]
    CountingTruncated { k: usize, tail: f64, tol: f64 },

    /// The renewal-function sum hit its addend cap.
    #[error("renewal sum hit the {cap}-addend cap with tail estimate {tail:.3e}")]
    RenewalSlow { cap: usize, tail: f64 },

    /// The law puts a unit point mass at this instant, so it has no
    /// density there. Use the cdf.
    #[error("point mass at t={at}: density undefined, use the cdf")]
    AtomDensity { at: f64 },

    /// The convolution grid failed its halved-step self-check.
    #[error("grid too coarse: self-check moved the result by {rel:.3e} (limit {limit:.3e})")]
    GridTooCoarse { rel: f64, limit: f64 },

    /// A time grid violates a structural requirement.
    #[error("bad grid: {0}")]
    Grid(String),

    /// A simulated walker exceeded the event cap before the horizon.
    #[error("walker exceeded {cap} events before reaching the time horizon")]
    RunawayWalker { cap: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
