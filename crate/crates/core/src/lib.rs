//! # typent
//!
//! Most probable entanglement spectra of random bipartite pure states.
//!
//! A pure state drawn uniformly from an `N·M`-dimensional Hilbert space has a
//! reduced density matrix on the `N`-dimensional factor whose eigenvalues
//! follow a log-gas law on the probability simplex. This crate computes the
//! most probable spectrum of that law and everything derived from it:
//!
//! - [`spectrum`]: bipartition dimensions, spectra, and the entanglement
//!   quantifiers evaluated on an explicit spectrum (purity, entropy,
//!   elementary symmetric invariants, majorization).
//! - [`orthopoly`]: Laguerre and Hermite polynomials and their zeros, computed
//!   from the symmetric Jacobi matrix of the three-term recurrence.
//! - [`coulomb`]: the log-gas energy, its derivatives, and an independent
//!   projected-Newton minimizer that checks the polynomial-zero solutions.
//! - [`closedform`]: ensemble averages and typical values in closed form.
//! - [`fixedpurity`]: most probable spectra on isopurity manifolds of a
//!   balanced bipartition, and the feasibility threshold.
//! - [`sampler`]: reproducible Monte Carlo over the unitarily invariant
//!   ensemble of pure states.
//! - [`continuum`]: semicircle and Marčenko–Pastur limits, their moments, the
//!   Tricomi equation residual and finite-size convergence.

#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod closedform;
pub mod continuum;
pub mod coulomb;
mod error;
pub mod fixedpurity;
pub mod linalg;
pub mod orthopoly;
pub mod quadrature;
pub mod sampler;
pub mod spectrum;
pub mod stats;

pub use error::{Error, Result};
pub use spectrum::{BipartitionDims, Majorization, Quantifiers, Spectrum};

/// Formats a float with the shortest representation that round-trips.
///
/// Plain decimal in the usual range, exponent form outside it, so CSV cells
/// stay short and parse back to the identical `f64`.
pub fn format_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}
