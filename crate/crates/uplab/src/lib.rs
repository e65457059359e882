//! Numerical laboratory for localization products of a function and its
//! Fourier transform, and for the moment growth of dispersive evolutions.
//!
//! The crate is organized around a single pipeline:
//!
//! * [`params`] — exact rational arithmetic for Lebesgue indices, the
//!   admissibility conditions of the weighted-moment product bounds, and the
//!   derived exponents.
//! * [`field`] — sampled complex fields on uniform boxes: quasi-norms,
//!   weighted moments, the continuous-convention Fourier transform,
//!   Littlewood-Paley projections, set restrictions, spacetime norms.
//! * [`oracles`] — closed-form Gaussian packet algebra used as ground truth
//!   for everything the grid computes.
//! * [`propagators`] — spectral evolutions (Schrödinger, heat, half-wave,
//!   wave) plus a split-step nonlinear solver and a Duhamel fixed-point
//!   iterator.
//! * [`experiments`] — the measurement harnesses: uncertainty products,
//!   lower-bound lemma checks, moment-growth slope fits, observability
//!   ratios, thickness sweeps, and a derivative-free product minimizer.
//! * [`cli`] — config-driven command line driver (`check-params`, `run`,
//!   `sweep`).

pub mod error;
pub mod params;
pub mod field;
pub mod oracles;
pub mod propagators;
pub mod experiments;
pub mod cli;

mod book;

pub use error::{Error, Result};
