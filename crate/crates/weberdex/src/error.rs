//! Error type shared by every module in the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Argument outside the function's real domain (e.g. x <= 0).
    #[error("domain error: {0}")]
    Domain(String),

    /// Gamma-function pole hit (nonpositive integer argument).
    #[error("gamma pole at z = {re} + {im}i")]
    Pole { re: f64, im: f64 },

    /// A series or refinement budget was exhausted before the tolerance
    /// was met.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// Contour abscissa outside the symbol's validity strip.
    #[error("abscissa {abscissa} outside strip ({lo}, {hi})")]
    Strip { abscissa: f64, lo: f64, hi: f64 },

    /// Estimated contour tail exceeds the absolute tolerance.
    #[error("tail bound {bound:e} exceeds tolerance {tol:e}")]
    Tail { bound: f64, tol: f64 },

    /// A formula-specific parameter constraint was violated
    /// (e.g. |alpha| < 1/2 for the Anger route).
    #[error("constraint violated: {0}")]
    Constraint(String),

    /// Direct kernel route called with |tau| below the sinh-cancellation
    /// gate; the Mellin-Barnes route is the designated evaluator there.
    #[error("|tau| = {0} below the direct-route gate; use the MB route")]
    NearZeroTau(f64),

    /// Finite-difference stencil does not fit inside the grid.
    #[error("stencil error: {0}")]
    Stencil(String),

    /// Sampled-function grid too coarse for the requested derivative.
    #[error("derivative error: {0}")]
    Derivative(String),
}
