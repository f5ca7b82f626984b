//! Semi-analytic models of light transmission through a zero-mode waveguide
//! (a sub-cutoff cylindrical hole in a metal film) that contains a single
//! resonant scatterer: a two-level atom or a small Drude sphere standing in
//! for one.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`]: cylindrical Bessel functions, waveguide mode roots and a
//!   damped Gauss-Newton least-squares solver.
//! * [`materials`]: permittivity models (perfect conductor, lossless Drude,
//!   tabulated data).
//! * [`polarizability`]: scatterer response, free-space Green tensor and
//!   environment-induced shifts of the resonance.
//! * [`waveguide`]: evanescent TE/TM modes of the hole.
//! * [`transmission`]: forward models for the detected power ratio.
//! * [`analysis`]: Fano fitting, spectrum metrics and feasibility estimates.
//!
//! Units throughout: lengths in nm, angular frequencies in rad/s,
//! polarizabilities in nm³ (Gaussian volume convention), Green-tensor
//! components in nm⁻³. Time dependence is `e^{-iωt}`.
//!
//! Spectrum evaluation and fitting are data-parallel over grid points and
//! start candidates. With the default `parallel` feature this runs on rayon;
//! without it every [`Execution`] policy falls back to a sequential loop.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
mod error;
mod exec;
pub mod materials;
pub mod numerics;
pub mod polarizability;
pub mod spectrum;
pub mod transmission;
pub mod units;
pub mod waveguide;

pub use error::{Error, Result};
pub use exec::Execution;
pub use spectrum::Spectrum;

/// Complex scalar used for permittivities, polarizabilities and field amplitudes.
pub use num_complex::Complex64;
