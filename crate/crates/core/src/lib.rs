//! Single-mode Kerr cavity as a spectroscopic quantum reservoir.
//!
//! A driven-dissipative Kerr mode turns the parameters of an incident
//! squeezed field into structure in its emission spectrum. This crate
//! simulates that response and trains readouts on it:
//!
//! - [`fock`]: truncated-Fock-space operators, Gaussian states, Wigner
//!   functions.
//! - [`lindblad`]: Liouvillian construction, propagators, steady states and
//!   the two-time correlation `⟨a†(τ)a⟩` by quantum regression.
//! - [`squeezed_env`]: Lindblad terms realizing continuous driving by a
//!   squeezed, displaced, thermally broadened environment.
//! - [`spectrum`]: emission spectra, spectral moments, measurement noise.
//! - [`readout`]: labeled dataset generation and the linear/ridge readout
//!   with NRMSE evaluation.
//! - [`mlp`]: spectral binning/renormalization and a small dense network
//!   for multivariate prediction.
//! - [`positivep`]: positive-P trajectories of an OPO source cascaded into
//!   the cavity, with spectral estimation from the phase-space fields.
//!
//! Energies are in μeV with ħ = 1, so one time unit is ħ/μeV ≈ 0.6582 ps.
//! All stochastic operations take explicit seeds and are reproducible.

pub mod error;
pub mod fock;
pub mod lindblad;
pub mod linalg;
pub mod mlp;
pub mod pipeline;
pub mod positivep;
pub mod readout;
pub mod spectrum;
pub mod squeezed_env;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// One time unit (ħ/μeV) expressed in picoseconds.
pub const TIME_UNIT_PS: f64 = 0.658_211_956_9;

/// Conversion factor from ms⁻¹ rates to μeV energies (ħ in μeV·ms).
pub const MS_INV_TO_UEV: f64 = 6.582_119_569e-7;
