//! Index transforms with Weber-type kernels.
//!
//! The kernel is built from Bessel functions of the first and second kind
//! with conjugate complex orders,
//!
//! ```text
//! W_a(x, tau) = Im[ J_{a+i tau}(sqrt x) Y_{a-i tau}(sqrt x) ] / sinh(pi tau),
//! ```
//!
//! and drives a pair of index transforms: `F_a` integrates a function on the
//! half-line against the kernel in `x`, `G_a` integrates a function on the
//! real line against the kernel in `tau`. This crate evaluates the kernel by
//! three independent routes (direct Bessel product, Mellin-Barnes contour
//! integral, Anger/Fourier-cosine integral), implements both transforms and
//! their inversion formulas, verifies the gamma-integral identities the
//! construction rests on, and solves a fourth-order boundary value problem on
//! a wedge spectrally.
//!
//! Modules mirror that layering: [`specfun`] (complex gamma and Bessel
//! family), [`quad`] (double-exponential and Gauss-Legendre quadrature),
//! [`mbquad`] (Mellin-Barnes contour machinery), [`kernel`] (the Weber-type
//! kernels), [`transforms`] (forward/inverse transforms), [`identities`]
//! (numeric identity checks), [`wedge`] (the boundary value problem).

pub mod error;
pub mod identities;
pub mod kernel;
pub mod mbquad;
pub mod quad;
pub mod specfun;
pub mod transforms;
pub mod wedge;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Number of worker threads batch operations may use. Reads the
/// `WEBERDEX_THREADS` environment variable; defaults to the machine's
/// available parallelism.
pub fn thread_cap() -> usize {
    let hw = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    match std::env::var("WEBERDEX_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        Some(n) if n >= 1 => n,
        _ => hw,
    }
}
